// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "holevo/additivity.hpp"
#include "holevo/experiments.hpp"
#include "holevo/random.hpp"

using namespace holevo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

bool report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
  return ok;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool guarded(int id, const std::function<bool()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return report(id, false, std::string("exception: ") + e.what());
  }
}

Channel eb_channel() {
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  std::vector<HermitianOperator> povm{HermitianOperator(p0), HermitianOperator(p1)};
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  std::vector<DensityOperator> states{DensityOperator::basis(2, 0), DensityOperator::pure(plus)};
  return measure_prepare(povm, states);
}

// Random qubit-input channel into C^8 whose output amplitude decays by a
// factor 4 per level, so that its truncations converge visibly.
Channel decaying_channel(std::uint64_t seed) {
  Rng rng(seed);
  const int d_out = 8, rank = 2;
  std::vector<Matrix> kraus;
  for (int j = 0; j < rank; ++j) {
    Matrix k(d_out, 2);
    for (int r = 0; r < d_out; ++r)
      for (int c = 0; c < 2; ++c) k(r, c) = std::pow(0.25, r) * rng.complex_normal();
    kraus.push_back(k);
  }
  Matrix s = Matrix::Zero(2, 2);
  for (const Matrix& k : kraus) s += k.adjoint() * k;
  const Matrix s_inv_sqrt = spectral_apply(eigh(s), [](double l) { return 1.0 / std::sqrt(l); });
  for (Matrix& k : kraus) k = k * s_inv_sqrt;
  return Channel(2, d_out, kraus);
}

bool criterion1() {
  const auto t0 = Clock::now();
  const std::pair<int, double> cases[] = {{1, 0.5}, {3, 0.25}, {7, 0.1}, {15, 0.05}};
  double worst = 0.0;
  for (auto [n, q] : cases) {
    const CapacityResult r = chi_capacity(example2_channel({n, q, 2 * n}), ConstraintSet::unconstrained());
    worst = std::max(worst, std::abs(r.value - q * std::log(n + 1.0)));
  }
  const double t = seconds_since(t0);
  return report(1, worst <= 1e-4 && t <= 60.0,
                fmt("classical family capacity vs q log(n+1): max error %.3g (tol 1e-4), %.1f s (limit 60 s)", worst, t));
}

bool criterion2() {
  const auto t0 = Clock::now();
  const std::vector<DiscontinuityRow> rows = discontinuity_rows({1, 3, 7, 15, 31}, 0.3);
  double worst = 0.0;
  bool bounded = true, shrinking = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    worst = std::max(worst, std::abs(rows[i].capacity - 0.3));
    bounded = bounded && rows[i].norm_distance <= rows[i].norm_bound;
    if (i > 0) shrinking = shrinking && rows[i].norm_distance < rows[i - 1].norm_distance;
  }
  const double limit = chi_capacity(example2_limit(2 * rows.back().n), ConstraintSet::unconstrained()).value;
  const bool ok = worst <= 1e-3 && bounded && shrinking && std::abs(limit) <= 1e-9;
  return report(2, ok,
                fmt("capacity within %.3g of 0.3 (tol 1e-3); distance <= 3q: %s, decreasing to %.4g; limit channel "
                    "capacity %.3g; %.1f s",
                    worst, bounded ? "yes" : "no", rows.back().norm_distance, limit, seconds_since(t0)));
}

bool criterion3() {
  double worst = 0.0, worst_gap = 0.0, worst_radius = 0.0;
  for (int d = 2; d <= 4; ++d) {
    const CapacityResult r = chi_capacity(noiseless(d), ConstraintSet::unconstrained());
    worst = std::max(worst, std::abs(r.value - std::log(d)));
    worst_gap = std::max(worst_gap, r.gap);
    const double radius =
        divergence_radius_at(noiseless(d), ConstraintSet::unconstrained(), DensityOperator::maximally_mixed(d)).value();
    worst_radius = std::max(worst_radius, std::abs(radius - std::log(d)));
  }
  return report(3, worst <= 1e-6 && worst_gap <= 1e-6 && worst_radius <= 1e-6,
                fmt("noiseless d=2,3,4: |C - log d| %.3g, gap %.3g, radius at I/d off by %.3g (tol 1e-6)", worst,
                    worst_gap, worst_radius));
}

bool criterion4() {
  const auto t0 = Clock::now();
  int inside = 0;
  double widest = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    Rng rng = Rng::derive(2024, i);
    const Channel phi = random_channel(2, 2 + static_cast<int>((i / 2) % 2), 2 + static_cast<int>(i % 2), rng);
    const CapacityResult r = chi_capacity(phi, ConstraintSet::unconstrained());
    const Bracket b = brute_force_capacity(phi, ConstraintSet::unconstrained(), 32);
    if (b.lower <= r.value + 1e-9 && r.value <= b.upper + 1e-9) ++inside;
    widest = std::max(widest, b.width());
  }
  const double t = seconds_since(t0);
  return report(4, inside == 10 && widest <= 5e-3 && t <= 600.0,
                fmt("%d/10 random qubit channels inside the oracle bracket, widest %.3g (tol 5e-3), %.1f s", inside,
                    widest, t));
}

bool suites(int id, std::initializer_list<const char*> names, std::uint64_t seed) {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const char* name : names) {
    for (const SuiteResult& s : run_verify(name, seed, 1000)) {
      ok = ok && s.ok() && s.cases == 1000;
      detail += fmt("%s %d/%d max %.3g (tol %.0e); ", s.name.c_str(), s.passed, s.cases, s.max_residual, s.tol);
    }
  }
  detail += fmt("%.1f s", seconds_since(t0));
  return report(id, ok, detail);
}

bool criterion7() {
  const Channel phi = decaying_channel(7);
  const DensityOperator rho = DensityOperator::maximally_mixed(2);
  DecompositionOptions o;
  std::vector<double> chi;
  for (int n = 1; n <= 7; ++n) {
    const ChiFunctionResult r = chi_function_detailed(truncate(phi, n), rho, o);
    chi.push_back(r.value);
    o.seeds = {r.closure.decomposition};
  }
  const double full = chi_function(phi, rho, o);
  bool monotone = true;
  for (std::size_t i = 1; i < chi.size(); ++i) monotone = monotone && chi[i] >= chi[i - 1] - 1e-9;
  return report(7, monotone && chi.back() >= full - 1e-4,
                fmt("chi of truncations nondecreasing: %s; n=1 %.6f, n=7 %.9f, full %.9f (tol 1e-4)",
                    monotone ? "yes" : "no", chi.front(), chi.back(), full));
}

bool criterion8() {
  struct Case {
    const char* label;
    Channel phi, psi;
  };
  const Case cases[] = {
      {"noiseless x depolarizing", noiseless(2), depolarizing(2, 0.3)},
      {"eb x depolarizing", eb_channel(), depolarizing(2, 0.3)},
      {"dsm(eb) x noiseless", direct_sum_mixture(0.5, eb_channel()), noiseless(2)},
  };
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    const AdditivityReport r =
        additivity_report(c.phi, ConstraintSet::unconstrained(), c.psi, ConstraintSet::unconstrained(), {}, c.label);
    const bool this_ok = std::abs(r.gap) <= 2e-3 && r.rhs_left.gap <= 1e-4 && r.rhs_right.gap <= 1e-4 &&
                         r.omega_product_residual <= r.cauchy_bound;
    ok = ok && this_ok;
    detail += fmt("%s: gap %.3g, single gaps %.2g/%.2g, omega residual %.3g <= %.3g; ", c.label, r.gap,
                  r.rhs_left.gap, r.rhs_right.gap, r.omega_product_residual, r.cauchy_bound);
  }
  detail.resize(detail.size() - 2);
  return report(8, ok, detail);
}

}  // namespace

int main() {
  const bool c1 = guarded(1, criterion1);
  const bool c2 = guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  const bool c5 = guarded(5, [] { return suites(5, {"donald", "lemma1", "pinsker", "chain", "strong_concavity", "concavity"}, 5); });
  guarded(6, [] { return suites(6, {"transport", "transport_sweep"}, 6); });
  const bool c7 = guarded(7, criterion7);
  guarded(8, criterion8);
  (void)c1;
  report(9, c2 && c5 && c7,
         "infinite-dimensional statements are covered by property checks: semicontinuity by criterion 2, the "
         "identities by criterion 5, truncation by criterion 7");
  return failures;
}
