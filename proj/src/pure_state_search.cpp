#include "pure_state_search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holevo/random.hpp"
#include "parallel.hpp"

namespace holevo::detail {

namespace {

constexpr double kLogFloor = 1e-300;

// D(σ‖ω) given log ω on its support; +inf when σ leaves the support.
ExtendedReal divergence_from(const Matrix& sigma, const Matrix& log_omega, const Matrix& outside) {
  Spectrum s = eigh(sigma);
  double value = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    const double a = s.values[i];
    if (a <= kRankTol) continue;
    const Vector u = s.vectors.col(i);
    const double leak = (outside * u).norm();
    if (leak > kSupportTol) return ExtendedReal::infinity();
    value += a * std::log(a) - a * (u.adjoint() * log_omega * u)(0, 0).real();
  }
  return std::max(0.0, value);
}

}  // namespace

Matrix floored_log(const Matrix& positive) {
  return spectral_apply(eigh(positive), [](double l) { return std::log(std::max(l, kLogFloor)); });
}

DivergenceObjective::DivergenceObjective(const Channel& phi, const Matrix& omega, Matrix penalty)
    : phi_(phi), penalty_(std::move(penalty)), has_penalty_(true) {
  if (omega.rows() != phi.d_out()) fail(ErrorCode::kDimensionMismatch, "reference output has the wrong dimension");
  Spectrum s = eigh(omega);
  log_omega_ = spectral_apply(s, [](double l) { return l > kRankTol ? std::log(l) : 0.0; });
  log_omega_grad_ = spectral_apply(s, [](double l) { return std::log(std::max(l, kLogFloor)); });
  outside_support_ = spectral_apply(s, [](double l) { return l > kRankTol ? 0.0 : 1.0; });
  if (penalty_.size() == 0 || penalty_.cwiseAbs().maxCoeff() == 0.0) has_penalty_ = false;
}

DivergenceObjective::DivergenceObjective(const Channel& phi, const Matrix& omega)
    : DivergenceObjective(phi, omega, Matrix()) {}

ExtendedReal DivergenceObjective::value(const Vector& psi) const {
  ExtendedReal d = divergence_from(phi_.apply_pure(psi), log_omega_, outside_support_);
  if (!has_penalty_ || d.is_infinite()) return d;
  return d.value() - (psi.adjoint() * penalty_ * psi)(0, 0).real();
}

Matrix DivergenceObjective::gradient_operator(const Vector& psi) const {
  Matrix g = phi_.adjoint(floored_log(phi_.apply_pure(psi)) - log_omega_grad_);
  if (has_penalty_) g -= penalty_;
  return g;
}

ExtendedReal NegativeEntropyObjective::value(const Vector& psi) const {
  return -entropy_of(phi_.apply_pure(psi));
}

Matrix NegativeEntropyObjective::gradient_operator(const Vector& psi) const {
  return phi_.adjoint(floored_log(phi_.apply_pure(psi)));
}

LocalMax ascend(const PureObjective& f, Vector psi, int max_iter) {
  psi /= psi.norm();
  ExtendedReal v = f.value(psi);
  if (v.is_infinite()) return {psi, v};
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const Matrix g_op = f.gradient_operator(psi);
    Vector best = psi;
    double best_v = v.value();

    // Linearization jump: non-decreasing for objectives convex in |ψ><ψ|.
    Spectrum s = eigh(g_op);
    Vector jump = s.vectors.col(s.values.size() - 1);
    ExtendedReal vj = f.value(jump);
    if (vj.is_infinite()) return {jump, vj};
    if (vj.value() > best_v) {
      best = jump;
      best_v = vj.value();
    }

    // Riemannian gradient step with Armijo backtracking.
    const cplx mean = (psi.adjoint() * g_op * psi)(0, 0);
    const Vector grad = g_op * psi - mean * psi;
    const double gn2 = grad.squaredNorm();
    if (gn2 > 1e-28) {
      for (int k = 0; k < 40; ++k) {
        Vector trial = psi + step * grad;
        trial /= trial.norm();
        ExtendedReal vt = f.value(trial);
        if (vt.is_infinite()) return {trial, vt};
        if (vt.value() >= v.value() + 1e-4 * step * 2.0 * gn2) {
          if (vt.value() > best_v) {
            best = trial;
            best_v = vt.value();
          }
          step *= 2.0;
          break;
        }
        step *= 0.5;
        if (step < 1e-14) {
          step = 1e-14;
          break;
        }
      }
    }
    const double gain = best_v - v.value();
    psi = best;
    v = best_v;
    if (gain <= 1e-15 * std::max(1.0, std::abs(best_v))) break;
  }
  return {psi, v};
}

Vector bloch_state(double theta, double phi) {
  Vector v(2);
  v[0] = std::cos(theta / 2.0);
  v[1] = std::polar(std::sin(theta / 2.0), phi);
  return v;
}

std::vector<Vector> bloch_grid(int points) {
  std::vector<Vector> out;
  out.reserve(points);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < points; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / points;
    out.push_back(bloch_state(std::acos(z), golden * i));
  }
  // Poles and equator basis points, so computational and |±> states are exact.
  out.push_back(bloch_state(0.0, 0.0));
  out.push_back(bloch_state(std::numbers::pi, 0.0));
  out.push_back(bloch_state(std::numbers::pi / 2, 0.0));
  out.push_back(bloch_state(std::numbers::pi / 2, std::numbers::pi));
  out.push_back(bloch_state(std::numbers::pi / 2, std::numbers::pi / 2));
  out.push_back(bloch_state(std::numbers::pi / 2, -std::numbers::pi / 2));
  return out;
}

namespace {

std::vector<Vector> seed_states(int d, const SearchOptions& opts) {
  if (d == 1) return {Vector::Ones(1)};
  if (d == 2) return bloch_grid(opts.qubit_grid);
  std::vector<Vector> seeds;
  for (int i = 0; i < d; ++i) seeds.push_back(Vector::Unit(d, i));
  for (int k = 0; k < d; ++k) {
    Vector v(d);
    for (int j = 0; j < d; ++j) v[j] = std::polar(1.0 / std::sqrt(static_cast<double>(d)), 2.0 * std::numbers::pi * j * k / d);
    seeds.push_back(v);
  }
  Rng rng(opts.seed);
  for (int i = 0; i < opts.multistart; ++i) seeds.push_back(random_unit_vector(d, rng));
  return seeds;
}

bool same_ray(const Vector& a, const Vector& b) {
  return std::norm(a.dot(b)) > 1.0 - 1e-9;
}

}  // namespace

SearchResult maximize_pure(const PureObjective& f, const std::vector<Vector>& warm, const SearchOptions& opts) {
  const int d = f.dim();
  std::vector<Vector> seeds = seed_states(d, opts);
  std::vector<ExtendedReal> seed_values(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) seed_values[i] = f.value(seeds[i]);

  std::vector<std::size_t> order(seeds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return seed_values[b] < seed_values[a]; });

  const std::size_t refine = d == 2 ? std::min<std::size_t>(8, order.size())
                                    : std::min<std::size_t>(static_cast<std::size_t>(std::max(opts.multistart, d)), order.size());
  std::vector<Vector> starts = warm;
  for (std::size_t i = 0; i < refine; ++i) starts.push_back(seeds[order[i]]);

  std::vector<LocalMax> results(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { results[i] = ascend(f, starts[i]); });

  SearchResult out;
  std::vector<std::size_t> idx(results.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return results[b].value < results[a].value; });
  for (std::size_t i : idx) {
    bool dup = false;
    for (const auto& m : out.maxima)
      if (same_ray(m.psi, results[i].psi)) dup = true;
    if (!dup) out.maxima.push_back(results[i]);
  }
  out.best = out.maxima.front();
  return out;
}

}  // namespace holevo::detail
