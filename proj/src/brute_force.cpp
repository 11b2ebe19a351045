// Independent qubit-input bracket for the χ-capacity.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "holevo/capacity.hpp"

namespace holevo {

namespace {

Vector qubit(double theta, double phi) {
  Vector v(2);
  v[0] = std::cos(theta / 2.0);
  v[1] = std::polar(std::sin(theta / 2.0), phi);
  return v;
}

struct Angles {
  double theta, phi;
};

// Latitude/longitude grid with `rings` latitude steps and spacing near
// π/rings along each ring.
std::vector<Angles> sphere_grid(int rings) {
  std::vector<Angles> out{{0.0, 0.0}, {std::numbers::pi, 0.0}};
  for (int i = 1; i < rings; ++i) {
    const double theta = std::numbers::pi * i / rings;
    const int around = std::max(4, static_cast<int>(std::round(2.0 * rings * std::sin(theta))));
    for (int j = 0; j < around; ++j) out.push_back({theta, 2.0 * std::numbers::pi * j / around});
  }
  return out;
}

// H(Φ(ψ)‖ref) − λ<ψ|H|ψ> by explicit matrix logs.
class Radius {
 public:
  Radius(const Channel& phi, const Matrix& ref, const Matrix& h, double lambda)
      : phi_(phi), h_(h), lambda_(lambda) {
    Spectrum s = eigh(ref);
    log_ref_ = spectral_apply(s, [](double l) { return l > kRankTol ? std::log(l) : 0.0; });
    proj_out_ = spectral_apply(s, [](double l) { return l > kRankTol ? 0.0 : 1.0; });
  }

  double operator()(const Angles& a) const {
    const Vector psi = qubit(a.theta, a.phi);
    const Matrix out = phi_.apply_pure(psi);
    Spectrum s = eigh(out);
    double v = 0.0;
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
      const double l = s.values[i];
      if (l <= kRankTol) continue;
      const Vector u = s.vectors.col(i);
      if ((proj_out_ * u).norm() > kSupportTol) return std::numeric_limits<double>::infinity();
      v += l * std::log(l) - l * (u.adjoint() * log_ref_ * u)(0, 0).real();
    }
    if (lambda_ != 0.0) v -= lambda_ * (psi.adjoint() * h_ * psi)(0, 0).real();
    return v;
  }

 private:
  const Channel& phi_;
  Matrix h_;
  double lambda_;
  Matrix log_ref_;
  Matrix proj_out_;
};

// Compass search on the angles.
double pattern_refine(const Radius& f, Angles a, double step) {
  double best = f(a);
  while (step > 1e-8 && std::isfinite(best)) {
    bool improved = false;
    const Angles moves[4] = {{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}};
    for (const Angles& m : moves) {
      Angles t{a.theta + m.theta, a.phi + m.phi};
      const double v = f(t);
      if (v > best) {
        best = v;
        a = t;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

double sphere_sup(const Radius& f, const std::vector<Angles>& grid) {
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < grid.size(); ++i) scored.emplace_back(f(grid[i]), i);
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  if (!std::isfinite(scored.front().first)) return scored.front().first;
  const double spacing = std::numbers::pi / std::sqrt(grid.size() / 1.27);
  double best = scored.front().first;
  for (std::size_t k = 0; k < std::min<std::size_t>(6, scored.size()); ++k)
    best = std::max(best, pattern_refine(f, grid[scored[k].second], spacing));
  return best;
}

}  // namespace

Bracket brute_force_capacity(const Channel& phi, const ConstraintSet& constraint, int resolution) {
  if (phi.d_in() != 2) fail(ErrorCode::kUnsupported, "brute-force oracle needs qubit inputs");
  if (constraint.kind() == ConstraintSet::Kind::kSingleton)
    fail(ErrorCode::kUnsupported, "brute-force oracle does not handle singleton constraints");
  if (resolution < 8) fail(ErrorCode::kInvalidArgument, "resolution must be at least 8");
  if (auto d = constraint.dim(); d && *d != 2) fail(ErrorCode::kDimensionMismatch, "constraint is not on a qubit");

  const bool bounded = constraint.kind() == ConstraintSet::Kind::kExpectationBound;
  const Matrix h = bounded ? constraint.observable().matrix() : Matrix::Zero(2, 2);
  const double hb = bounded ? constraint.bound() : 0.0;
  const std::vector<Angles> grid = sphere_grid(resolution);

  std::vector<Matrix> outputs;
  std::vector<double> entropies, costs;
  for (const Angles& a : grid) {
    const Vector psi = qubit(a.theta, a.phi);
    outputs.push_back(phi.apply_pure(psi));
    entropies.push_back(entropy_of(outputs.back()));
    costs.push_back(bounded ? (psi.adjoint() * h * psi)(0, 0).real() : 0.0);
  }
  const std::size_t m = outputs.size();
  auto average = [&](const std::vector<double>& p) {
    Matrix w = Matrix::Zero(phi.d_out(), phi.d_out());
    for (std::size_t i = 0; i < m; ++i) w += p[i] * outputs[i];
    return w;
  };
  auto chi_of = [&](const std::vector<double>& p) {
    double mean_h = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean_h += p[i] * entropies[i];
    return std::max(0.0, entropy_of(average(p)) - mean_h);
  };
  auto cost_of = [&](const std::vector<double>& p) {
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i) c += p[i] * costs[i];
    return c;
  };
  // Blahut–Arimoto for max_p χ(p) − λ Σ p_i c_i on the grid alphabet.
  // Warm starts keep the multiplier bisection cheap; the lower bound is the
  // χ of whatever distribution comes out, so the stopping rule only affects
  // tightness.
  auto blahut_arimoto = [&](double lambda, std::vector<double> p) {
    if (p.empty()) p.assign(m, 1.0 / static_cast<double>(m));
    for (double& x : p) x = std::max(x, 1e-30);
    // The plain update is the η = 1 case; larger accepted exponents keep the
    // ascent monotone but cut the iteration count by orders of magnitude on
    // sparse optima.
    double eta = 1.0;
    double value = chi_of(p) - lambda * cost_of(p);
    for (int it = 0; it < 5000; ++it) {
      const Matrix log_omega_t = spectral_apply(eigh(average(p)), [](double l) { return std::log(std::max(l, 1e-300)); }).transpose();
      std::vector<double> d(m);
      double mean = 0.0, top = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        d[i] = -entropies[i] - outputs[i].cwiseProduct(log_omega_t).sum().real() - lambda * costs[i];
        mean += p[i] * d[i];
        top = std::max(top, d[i]);
      }
      if (top - mean < 1e-10) break;
      bool accepted = false;
      for (int k = 0; k < 40 && !accepted; ++k) {
        std::vector<double> q(m);
        double z = 0.0;
        for (std::size_t i = 0; i < m; ++i) z += (q[i] = std::max(p[i] * std::exp(eta * (d[i] - top)), 1e-300));
        for (double& x : q) x /= z;
        const double v = chi_of(q) - lambda * cost_of(q);
        if (v >= value || eta <= 1.0) {
          p = std::move(q);
          value = v;
          accepted = true;
          eta = std::min(eta * 2.0, 1e6);
        } else {
          eta = std::max(1.0, eta * 0.5);
        }
      }
    }
    return p;
  };

  // Slater bound on the optimal multiplier: the ground state has χ = 0 and
  // C <= log d_out.
  double lambda_max = 0.0;
  if (bounded) {
    Spectrum s = eigh(h);
    const double slack = hb - s.values.minCoeff();
    const double range = std::max(1e-3, s.values.maxCoeff() - s.values.minCoeff());
    lambda_max = slack > 1e-9 ? 1.05 * std::log(static_cast<double>(phi.d_out())) / slack : 1e3 / range;
  }

  std::vector<double> p = blahut_arimoto(0.0, {});
  double lambda_star = 0.0;
  if (bounded && cost_of(p) > hb) {
    // Bisection on λ; the feasible end is mixed with the infeasible one to
    // sit on the constraint.
    double lo = 0.0, hi = lambda_max;
    std::vector<double> p_lo = p, p_hi = blahut_arimoto(hi, p);
    for (int b = 0; b < 40 && cost_of(p_hi) > hb; ++b) p_hi = blahut_arimoto(hi *= 2.0, p_hi);
    for (int b = 0; b < 40 && hi - lo > 1e-6 * hi; ++b) {
      const double mid = 0.5 * (lo + hi);
      std::vector<double> q = blahut_arimoto(mid, p_hi);
      (cost_of(q) > hb ? (lo = mid, p_lo) : (hi = mid, p_hi)) = q;
    }
    lambda_star = hi;
    const double c_lo = cost_of(p_lo), c_hi = cost_of(p_hi);
    p = p_hi;
    if (c_hi < hb && c_lo > c_hi) {
      const double theta = (hb - c_hi) / (c_lo - c_hi) * (1.0 - 1e-12);
      std::vector<double> mix(m);
      for (std::size_t i = 0; i < m; ++i) mix[i] = theta * p_lo[i] + (1.0 - theta) * p_hi[i];
      if (chi_of(mix) > chi_of(p)) p = std::move(mix);
    }
    if (cost_of(p) > hb) {
      // The ground state alone is always feasible.
      std::fill(p.begin(), p.end(), 0.0);
      std::size_t g = static_cast<std::size_t>(std::min_element(costs.begin(), costs.end()) - costs.begin());
      p[g] = costs[g] <= hb ? 1.0 : 0.0;
      if (costs[g] > hb) p.assign(m, 0.0);
    }
  }
  const bool have_lower = std::any_of(p.begin(), p.end(), [](double x) { return x > 0.0; });
  const double lower = have_lower ? chi_of(p) : 0.0;
  const Matrix omega = have_lower ? average(p) : Matrix(Matrix::Identity(phi.d_out(), phi.d_out()) / phi.d_out());

  // Reference outputs: the grid optimum, nudged copies and smoothed copies.
  std::vector<Matrix> refs{omega};
  const int dout = phi.d_out();
  for (double eps : {1e-9, 1e-6, 1e-4})
    refs.push_back((1.0 - eps) * omega + eps * Matrix::Identity(dout, dout) / static_cast<double>(dout));
  if (dout == 2) {
    const Matrix pauli[3] = {(Matrix(2, 2) << 0, 1, 1, 0).finished(),
                             (Matrix(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished(),
                             (Matrix(2, 2) << 1, 0, 0, -1).finished()};
    for (double delta : {1e-4, 1e-3})
      for (const Matrix& s : pauli)
        for (double sign : {-1.0, 1.0}) {
          Matrix r = omega + 0.5 * sign * delta * s;
          if (eigh(r).values.minCoeff() > 0.0) refs.push_back(r);
        }
  }

  auto dual = [&](const Matrix& r, double lambda) {
    return lambda * hb + sphere_sup(Radius(phi, r, h, lambda), grid);
  };
  double upper = dual(omega, lambda_star);
  double lambda_best = lambda_star;
  if (bounded) {
    // The dual is convex in λ; golden-section search at the grid optimum,
    // keeping every value seen since each one is a valid bound.
    double a = 0.0, b = std::max(2.0 * lambda_star, lambda_max);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = dual(omega, x1), f2 = dual(omega, x2);
    auto keep = [&](double x, double f) {
      if (f < upper) upper = f, lambda_best = x;
    };
    keep(x1, f1);
    keep(x2, f2);
    for (int it = 0; it < 30; ++it) {
      if (f1 <= f2) {
        b = x2, x2 = x1, f2 = f1;
        x1 = b - g * (b - a);
        keep(x1, f1 = dual(omega, x1));
      } else {
        a = x1, x1 = x2, f1 = f2;
        x2 = a + g * (b - a);
        keep(x2, f2 = dual(omega, x2));
      }
    }
  }
  for (std::size_t k = 1; k < refs.size(); ++k) upper = std::min(upper, dual(refs[k], lambda_best));
  return {lower, upper};
}

}  // namespace holevo
