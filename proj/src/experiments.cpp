#include "holevo/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "holevo/random.hpp"
#include "parallel.hpp"

namespace holevo {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Per-case residuals are computed in parallel and folded in index order.
SuiteResult fold(std::string name, double tol, int cases, const std::function<double(std::uint64_t)>& residual) {
  std::vector<double> r(static_cast<std::size_t>(cases));
  detail::parallel_for(r.size(), [&](std::size_t i) { r[i] = residual(i); });
  SuiteResult out{std::move(name), cases, 0, 0.0, tol};
  for (double x : r) {
    if (x <= tol) ++out.passed;
    out.max_residual = std::max(out.max_residual, std::isnan(x) ? std::numeric_limits<double>::infinity() : x);
  }
  return out;
}

int pick_dim(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1)); }

DensityOperator mix(double lambda, const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::trusted(lambda * a.matrix() + (1.0 - lambda) * b.matrix());
}

DecompositionOptions suite_decomposition(std::uint64_t seed) {
  DecompositionOptions o;
  o.starts = 8;
  o.seed = seed;
  return o;
}

double output_divergence(const Channel& phi, const DensityOperator& a, const DensityOperator& b) {
  return relative_entropy_of(phi.apply(a.matrix()), phi.apply(b.matrix())).value();
}

SuiteResult pinsker(std::uint64_t seed, int cases) {
  return fold("pinsker", 1e-9, cases, [seed](std::uint64_t i) {
    Rng rng = Rng::derive(seed, i);
    const int d = pick_dim(rng, 2, 4);
    DensityOperator a = random_density(d, rng), b = random_density(d, rng);
    const double t = trace_distance(a, b);
    return 0.5 * t * t - relative_entropy(a, b).value();
  });
}

SuiteResult donald(std::uint64_t seed, int cases) {
  return fold("donald", 1e-9, cases, [seed](std::uint64_t i) {
    Rng rng = Rng::derive(seed, i);
    const int d = pick_dim(rng, 2, 4);
    Ensemble e = random_ensemble(d, pick_dim(rng, 2, 5), rng);
    DonaldSides s = donald_check(e, random_density(d, rng));
    return std::abs(s.lhs.value() - s.rhs.value());
  });
}

// Identity for a three-part combination, plus the quadratic bound for two
// parts; the residual is the worse of the two.
SuiteResult lemma1(std::uint64_t seed, int cases) {
  return fold("lemma1", 1e-9, cases, [seed](std::uint64_t i) {
    Rng rng = Rng::derive(seed, i);
    const int d = pick_dim(rng, 2, 3);
    Channel phi = random_channel(d, pick_dim(rng, 2, 3), 2, rng);
    std::vector<std::pair<double, Ensemble>> parts;
    double total = 0.0;
    std::vector<double> lambda(3);
    for (double& l : lambda) total += (l = -std::log(1.0 - rng.uniform()));
    for (double& l : lambda) parts.emplace_back(l / total, random_ensemble(d, pick_dim(rng, 1, 3), rng));
    const Ensemble joint = convex_combination(parts);
    const DensityOperator bar = average_state(joint);
    double rhs = 0.0;
    for (const auto& [l, e] : parts)
      rhs += l * (chi_quantity(phi, e).value() + output_divergence(phi, average_state(e), bar));
    const double identity = std::abs(chi_quantity(phi, joint).value() - rhs);

    const double l = parts[0].first / (parts[0].first + parts[1].first);
    const std::pair<double, Ensemble> two[] = {{l, parts[0].second}, {1.0 - l, parts[1].second}};
    const DensityOperator b2 = average_state(convex_combination(two));
    const DensityOperator r1 = average_state(parts[0].second), r2 = average_state(parts[1].second);
    const double excess = l * output_divergence(phi, r1, b2) + (1.0 - l) * output_divergence(phi, r2, b2);
    const double t = trace_norm(phi.apply(r1.matrix()) - phi.apply(r2.matrix()));
    const double quadratic = 0.5 * l * (1.0 - l) * t * t - excess;
    return std::max(identity, quadratic);
  });
}

// χ_{Ψ∘Φ}(ρ) against χ_Φ(ρ) and χ_Ψ(Φ(ρ)). Each right-hand search starts
// from the decomposition found on the left, so data processing bounds it.
SuiteResult chain(std::uint64_t seed, int cases) {
  return fold("chain", 1e-9, cases, [seed](std::uint64_t i) {
    Rng rng = Rng::derive(seed, i);
    Channel phi = random_channel(2, 2, pick_dim(rng, 1, 3), rng);
    Channel psi = random_channel(2, 2, pick_dim(rng, 1, 3), rng);
    DensityOperator rho = random_density(2, rng);
    DecompositionOptions o = suite_decomposition(rng.next());
    ChiFunctionResult outer = chi_function_detailed(compose(psi, phi), rho, o);
    const Ensemble& dec = outer.closure.decomposition;
    DecompositionOptions first = o;
    first.seeds.push_back(dec);
    std::vector<EnsembleItem> pushed;
    for (const auto& it : dec.items()) pushed.push_back({it.weight, phi.apply(it.state)});
    DecompositionOptions second = o;
    second.seeds.push_back(Ensemble(std::move(pushed)));
    const double a = outer.value - chi_function(phi, rho, first);
    const double b = outer.value - chi_function(psi, phi.apply(rho), second);
    return std::max(a, b);
  });
}

// The mixed state's search is seeded with the union of the component
// optima.
SuiteResult strong_concavity(std::uint64_t seed, int cases) {
  return fold("strong_concavity", 1e-5, cases, [seed](std::uint64_t i) {
    Rng rng = Rng::derive(seed, i);
    Channel phi = random_channel(2, 2, pick_dim(rng, 1, 3), rng);
    DensityOperator r1 = random_density(2, rng), r2 = random_density(2, rng);
    const double l = 0.05 + 0.9 * rng.uniform();
    DecompositionOptions o = suite_decomposition(rng.next());
    ChiFunctionResult c1 = chi_function_detailed(phi, r1, o), c2 = chi_function_detailed(phi, r2, o);
    const std::pair<double, Ensemble> parts[] = {{l, c1.closure.decomposition}, {1.0 - l, c2.closure.decomposition}};
    DecompositionOptions mixed = o;
    mixed.seeds.push_back(convex_combination(parts));
    const double lhs = chi_function(phi, mix(l, r1, r2), mixed);
    const double t = trace_norm(phi.apply(r2.matrix()) - phi.apply(r1.matrix()));
    return l * c1.value + (1.0 - l) * c2.value + 0.5 * l * (1.0 - l) * t * t - lhs;
  });
}

SuiteResult concavity(std::uint64_t seed, int cases) {
  return fold("concavity", 1e-9, cases, [seed](std::uint64_t i) {
    Rng rng = Rng::derive(seed, i);
    Channel phi = random_channel(2, 2, pick_dim(rng, 1, 3), rng);
    Ensemble e = random_ensemble(2, pick_dim(rng, 2, 3), rng);
    const DensityOperator bar = average_state(e);
    DecompositionOptions o = suite_decomposition(rng.next());
    std::vector<std::pair<double, Ensemble>> parts;
    double weighted = 0.0, divergence = 0.0;
    for (const auto& it : e.items()) {
      ChiFunctionResult c = chi_function_detailed(phi, it.state, o);
      weighted += it.weight * c.value;
      divergence += it.weight * output_divergence(phi, it.state, bar);
      parts.emplace_back(it.weight, c.closure.decomposition);
    }
    DecompositionOptions seeded = o;
    seeded.seeds.push_back(convex_combination(parts));
    return divergence - (chi_function(phi, bar, seeded) - weighted);
  });
}

SuiteResult transport(std::uint64_t seed, int cases) {
  return fold("transport", 1e-10, cases, [seed](std::uint64_t i) {
    Rng rng = Rng::derive(seed, i);
    const int d = pick_dim(rng, 2, 3);
    Ensemble e = random_ensemble(d, pick_dim(rng, 2, 4), rng);
    DensityOperator target = random_density(d, rng, pick_dim(rng, 1, d));
    Ensemble moved = transport_ensemble(e, target);
    double weights = 0.0;
    for (const auto& it : moved.items()) weights += it.weight;
    return std::max(trace_norm(average_state(moved).matrix() - target.matrix()), std::abs(weights - 1.0));
  });
}

// Targets within 1e-7 of the original average must move every weight and
// member state by at most 1e-6.
SuiteResult transport_sweep(std::uint64_t seed, int cases) {
  return fold("transport_sweep", 1e-6, cases, [seed](std::uint64_t i) {
    Rng rng = Rng::derive(seed, i);
    const int d = pick_dim(rng, 2, 3);
    Ensemble e = random_ensemble(d, pick_dim(rng, 2, 4), rng);
    const DensityOperator rho = average_state(e);
    const DensityOperator other = random_density(d, rng);
    double drift = 0.0;
    for (double eps : {1e-7, 1e-8, 1e-9, 1e-10}) {
      const DensityOperator near = mix(1.0 - eps / 2.0, rho, other);
      if (trace_distance(near, rho) > 1e-7) return std::numeric_limits<double>::infinity();
      Ensemble t = transport_ensemble(e, near);
      if (t.size() != e.size()) return std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < e.size(); ++k)
        drift = std::max({drift, std::abs(t[k].weight - e[k].weight), trace_distance(t[k].state, e[k].state)});
    }
    return drift;
  });
}

}  // namespace

std::vector<DiscontinuityRow> discontinuity_rows(const std::vector<int>& n_list, double c_target,
                                                 const SolverOptions& opts) {
  if (!(c_target > 0.0)) fail(ErrorCode::kInvalidArgument, "target capacity must be positive");
  std::vector<DiscontinuityRow> rows;
  for (int n : n_list) {
    if (n < 1) fail(ErrorCode::kInvalidArgument, "n must be at least 1");
    const double q = std::min(1.0, c_target / std::log(n + 1.0));
    if (c_target / std::log(n + 1.0) > 1.0 + 1e-12)
      fail(ErrorCode::kInvalidArgument, "target capacity exceeds log(n+1) for n = " + std::to_string(n));
    const int big_n = 2 * n;
    Channel phi = example2_channel({n, q, big_n});
    CapacityResult r = chi_capacity(phi, ConstraintSet::unconstrained(), opts);
    rows.push_back({n, q, basis_trace_norm_distance(phi, example2_limit(big_n)), 3.0 * q, r.value, r.gap});
  }
  return rows;
}

std::string discontinuity_csv(const std::vector<DiscontinuityRow>& rows) {
  std::ostringstream os;
  os << "n,q,norm_distance,norm_bound,capacity,gap\n";
  for (const auto& r : rows)
    os << r.n << ',' << fmt(r.q) << ',' << fmt(r.norm_distance) << ',' << fmt(r.norm_bound) << ','
       << fmt(r.capacity) << ',' << fmt(r.gap) << '\n';
  return os.str();
}

std::vector<std::string> verify_suite_names() {
  return {"pinsker", "donald", "lemma1", "chain", "strong_concavity", "concavity", "transport", "transport_sweep", "all"};
}

std::vector<SuiteResult> run_verify(const std::string& suite, std::uint64_t seed, int cases) {
  if (cases <= 0) fail(ErrorCode::kInvalidArgument, "case count must be positive");
  using Runner = SuiteResult (*)(std::uint64_t, int);
  const std::pair<const char*, Runner> table[] = {
      {"pinsker", pinsker}, {"donald", donald},        {"lemma1", lemma1},       {"chain", chain},
      {"strong_concavity", strong_concavity}, {"concavity", concavity}, {"transport", transport},
      {"transport_sweep", transport_sweep}};
  std::vector<SuiteResult> out;
  for (const auto& [name, run] : table)
    if (suite == "all" || suite == name) out.push_back(run(seed, cases));
  if (out.empty()) fail(ErrorCode::kInvalidArgument, "unknown verify suite: " + suite);
  return out;
}

}  // namespace holevo
