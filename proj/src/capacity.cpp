// χ-capacity by column generation over pure input states.
//
// For a multiplier vector λ >= 0 the penalized problem
//   max_E  χ_Φ(E) − Σ_k λ_k (Tr ρ̄ H_k − h_k)
// is solved by alternating (a) entropic mirror ascent on the weights of a
// finite support and (b) adding the pure states that maximize
// H(Φ(ψ)‖ω) − Σ λ_k <ψ|H_k|ψ> at ω = Φ(ρ̄). Every (ω, λ) gives the bound
//   C <= Σ λ_k h_k + max_ψ [H(Φ(ψ)‖ω) − Σ λ_k <ψ|H_k|ψ>],
// which is the certificate reported as the upper bound.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "holevo/capacity.hpp"
#include "pure_state_search.hpp"

namespace holevo {

// ---------------------------------------------------------------- constraint

ConstraintSet ConstraintSet::unconstrained() { return ConstraintSet(Unconstrained{}); }

ConstraintSet ConstraintSet::singleton(DensityOperator rho) { return ConstraintSet(Singleton{std::move(rho)}); }

ConstraintSet ConstraintSet::expectation_bound(HermitianOperator observable, double bound) {
  if (bound < observable.min_eigenvalue() - 1e-10)
    fail(ErrorCode::kInfeasible, "expectation bound lies below the smallest eigenvalue of the observable");
  return ConstraintSet(Expectation{std::move(observable), bound});
}

ConstraintSet::Kind ConstraintSet::kind() const {
  if (std::holds_alternative<Singleton>(v_)) return Kind::kSingleton;
  if (std::holds_alternative<Expectation>(v_)) return Kind::kExpectationBound;
  return Kind::kUnconstrained;
}

const DensityOperator& ConstraintSet::state() const {
  if (const auto* s = std::get_if<Singleton>(&v_)) return s->rho;
  fail(ErrorCode::kInvalidArgument, "constraint set is not a singleton");
}

const HermitianOperator& ConstraintSet::observable() const {
  if (const auto* e = std::get_if<Expectation>(&v_)) return e->observable;
  fail(ErrorCode::kInvalidArgument, "constraint set is not an expectation bound");
}

double ConstraintSet::bound() const {
  if (const auto* e = std::get_if<Expectation>(&v_)) return e->bound;
  fail(ErrorCode::kInvalidArgument, "constraint set is not an expectation bound");
}

std::optional<int> ConstraintSet::dim() const {
  if (const auto* s = std::get_if<Singleton>(&v_)) return s->rho.dim();
  if (const auto* e = std::get_if<Expectation>(&v_)) return e->observable.dim();
  return std::nullopt;
}

bool ConstraintSet::contains(const DensityOperator& rho, double tol) const {
  if (auto d = dim(); d && *d != rho.dim()) return false;
  if (const auto* s = std::get_if<Singleton>(&v_)) return (s->rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <= tol;
  if (const auto* e = std::get_if<Expectation>(&v_))
    return (rho.matrix() * e->observable.matrix()).trace().real() <= e->bound + tol;
  return true;
}

DensityOperator output_optimal_average(const CapacityResult& result) { return result.omega; }

// -------------------------------------------------------------- the solver

namespace {

struct Linear {
  Matrix observable;
  double bound;
};

struct Support {
  std::vector<Vector> states;
  std::vector<Matrix> outputs;
  std::vector<double> entropies;
  std::vector<RealVector> costs;  // <ψ|H_k|ψ>
  std::vector<double> weights;

  std::size_t size() const { return states.size(); }
};

class Problem {
 public:
  Problem(const Channel& phi, std::vector<Linear> constraints, const SolverOptions& opts)
      : phi_(phi), constraints_(std::move(constraints)), opts_(opts) {}

  const Channel& channel() const { return phi_; }
  std::size_t num_constraints() const { return constraints_.size(); }
  const std::vector<Linear>& constraints() const { return constraints_; }
  const SolverOptions& options() const { return opts_; }

  void add_state(Support& s, const Vector& psi, double weight) const {
    Vector u = psi / psi.norm();
    for (const Vector& v : s.states)
      if (std::norm(v.dot(u)) > 1.0 - 1e-12) return;
    s.states.emplace_back();
    s.outputs.emplace_back();
    s.entropies.push_back(0.0);
    s.costs.emplace_back();
    s.weights.push_back(weight);
    set_state(s, s.size() - 1, u);
  }

  void set_state(Support& s, std::size_t i, const Vector& u) const {
    RealVector c(static_cast<Eigen::Index>(constraints_.size()));
    for (std::size_t k = 0; k < constraints_.size(); ++k)
      c[static_cast<Eigen::Index>(k)] = (u.adjoint() * constraints_[k].observable * u)(0, 0).real();
    s.states[i] = u;
    s.outputs[i] = phi_.apply_pure(u);
    s.entropies[i] = entropy_of(s.outputs[i]);
    s.costs[i] = std::move(c);
  }

  Matrix penalty(const RealVector& lambda) const {
    Matrix p = Matrix::Zero(phi_.d_in(), phi_.d_in());
    for (std::size_t k = 0; k < constraints_.size(); ++k) p += lambda[static_cast<Eigen::Index>(k)] * constraints_[k].observable;
    return p;
  }

  double dual_offset(const RealVector& lambda) const {
    double o = 0.0;
    for (std::size_t k = 0; k < constraints_.size(); ++k) o += lambda[static_cast<Eigen::Index>(k)] * constraints_[k].bound;
    return o;
  }

 private:
  const Channel& phi_;
  std::vector<Linear> constraints_;
  SolverOptions opts_;
};

Matrix average_output(const Support& s) {
  Matrix w = Matrix::Zero(s.outputs.front().rows(), s.outputs.front().cols());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.weights[i] > 0.0) w += s.weights[i] * s.outputs[i];
  return w;
}

// Scores H(σ_i‖ω) − λ·c_i and χ for the current weights.
struct Scores {
  std::vector<double> score;
  double chi = 0.0;
  double objective = 0.0;  // Σ π_i score_i = χ − λ·c̄
};

Scores score(const Support& s, const RealVector& lambda) {
  const Matrix omega = average_output(s);
  Spectrum sp = eigh(omega);
  double h_omega = 0.0;
  for (Eigen::Index i = 0; i < sp.values.size(); ++i)
    if (sp.values[i] > 0.0) h_omega -= sp.values[i] * std::log(sp.values[i]);
  // Floored log keeps scores finite for members of vanishing weight.
  const Matrix log_omega = detail::floored_log(omega);
  Scores out;
  out.score.resize(s.size());
  double mean_entropy = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = -s.entropies[i] - (s.outputs[i].cwiseProduct(log_omega.transpose())).sum().real();
    out.score[i] = d - (lambda.size() ? lambda.dot(s.costs[i]) : 0.0);
    if (s.weights[i] > 0.0) {
      mean_entropy += s.weights[i] * s.entropies[i];
      out.objective += s.weights[i] * out.score[i];
    }
  }
  out.chi = std::max(0.0, h_omega - mean_entropy);
  return out;
}

// Entropic mirror ascent with backtracking on the fixed support.
void optimize_weights(Support& s, const RealVector& lambda, double tol, int max_iter) {
  double eta = 1.0;
  Scores cur = score(s, lambda);
  for (int it = 0; it < max_iter; ++it) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s.weights[i] > 0.0) top = std::max(top, cur.score[i]);
    if (top - cur.objective <= tol) break;
    bool accepted = false;
    for (int k = 0; k < 60 && !accepted; ++k) {
      std::vector<double> w(s.size());
      double z = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        w[i] = s.weights[i] > 0.0 ? s.weights[i] * std::exp(eta * (cur.score[i] - top)) : 0.0;
        z += w[i];
      }
      for (auto& x : w) x /= z;
      std::vector<double> saved = s.weights;
      s.weights = w;
      Scores next = score(s, lambda);
      if (next.objective >= cur.objective - 1e-15) {
        cur = std::move(next);
        eta = std::min(eta * 2.0, 1e8);
        accepted = true;
      } else {
        s.weights = std::move(saved);
        eta *= 0.5;
      }
    }
    if (!accepted) break;
  }
  // Drop states the ascent has extinguished.
  Support kept;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.weights[i] <= 1e-15) continue;
    kept.states.push_back(s.states[i]);
    kept.outputs.push_back(s.outputs[i]);
    kept.entropies.push_back(s.entropies[i]);
    kept.costs.push_back(s.costs[i]);
    kept.weights.push_back(s.weights[i]);
  }
  double total = 0.0;
  for (double w : kept.weights) total += w;
  for (double& w : kept.weights) w /= total;
  s = std::move(kept);
}

// Moves every member along its Riemannian gradient of the penalized
// objective at fixed weights, G_i = Φ*(log σ_i − log ω) − Λ, with Armijo
// backtracking. Column generation alone stalls once the members sit close
// to, but not at, the optimal positions.
void polish_states(const Problem& p, Support& s, const RealVector& lambda, const Matrix& pen, int iters) {
  Scores cur = score(s, lambda);
  double step = 1.0;
  for (int it = 0; it < iters; ++it) {
    const Matrix log_omega = detail::floored_log(average_output(s));
    std::vector<Vector> dir(s.size());
    double slope = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Matrix g = p.channel().adjoint(detail::floored_log(s.outputs[i]) - log_omega) - pen;
      Vector t = g * s.states[i];
      t -= s.states[i].dot(t) * s.states[i];
      slope += 2.0 * s.weights[i] * t.squaredNorm();
      dir[i] = std::move(t);
    }
    if (slope < 1e-28) break;
    bool moved = false;
    for (int k = 0; k < 40 && !moved; ++k) {
      Support trial = s;
      for (std::size_t i = 0; i < s.size(); ++i) {
        Vector u = s.states[i] + step * dir[i];
        p.set_state(trial, i, u / u.norm());
      }
      Scores next = score(trial, lambda);
      if (next.objective >= cur.objective + 1e-4 * step * slope) {
        s = std::move(trial);
        cur = std::move(next);
        step *= 2.0;
        moved = true;
      } else {
        step *= 0.5;
      }
    }
    if (!moved) break;
  }
}

struct PenalizedResult {
  Support support;
  double chi = 0.0;
  RealVector mean_costs;
  ExtendedReal upper;  // Σλh + max_ψ(...), an upper bound on the constrained capacity
  Matrix omega;
  int iterations = 0;
};

RealVector mean_costs(const Support& s, std::size_t k) {
  RealVector c = RealVector::Zero(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < s.size(); ++i) c += s.weights[i] * s.costs[i];
  return c;
}

PenalizedResult solve_penalized(const Problem& p, const RealVector& lambda, Support support, int& budget) {
  const SolverOptions& opts = p.options();
  const int cap = std::max(p.channel().d_in() * p.channel().d_in(), 2);
  detail::SearchOptions search{opts.multistart, opts.qubit_grid, opts.seed};
  const Matrix pen = p.penalty(lambda);
  const double offset = p.dual_offset(lambda);

  PenalizedResult best;
  best.upper = ExtendedReal::infinity();
  int iterations = 0;
  double stall_best = -std::numeric_limits<double>::infinity();
  int stall = 0;
  while (true) {
    optimize_weights(support, lambda, 0.05 * opts.tol, 4000);
    polish_states(p, support, lambda, pen, 20);
    optimize_weights(support, lambda, 0.05 * opts.tol, 4000);
    Scores sc = score(support, lambda);
    const Matrix omega = average_output(support);
    ++iterations;
    --budget;

    detail::DivergenceObjective f(p.channel(), omega, pen);
    detail::SearchResult found = detail::maximize_pure(f, support.states, search);
    const ExtendedReal upper = found.best.value.is_infinite() ? ExtendedReal::infinity()
                                                              : ExtendedReal(offset + found.best.value.value());
    if (upper < best.upper) best.upper = upper;
    best.support = support;
    best.chi = sc.chi;
    best.mean_costs = mean_costs(support, p.num_constraints());
    best.omega = omega;

    const double lower_pen = offset + sc.objective;
    const bool done = !best.upper.is_infinite() && best.upper.value() - lower_pen <= opts.tol;
    if (done || budget <= 0) break;
    // Stop when new columns no longer move the objective; this happens when
    // the optimum puts vanishing weight on some direction and the
    // certificate stays infinite.
    if (lower_pen > stall_best + 1e-3 * opts.tol) {
      stall_best = lower_pen;
      stall = 0;
    } else if (++stall >= 50) {
      break;
    }

    // Add improving local maxima with a small seed weight.
    int added = 0;
    for (const auto& m : found.maxima) {
      if (m.value.is_finite() && m.value.value() <= sc.objective + 0.01 * opts.tol) continue;
      p.add_state(support, m.psi, 0.0);
      if (++added >= std::max(2, p.channel().d_in())) break;
    }
    if (added == 0) break;
    const double seed_weight = 1.0 / (4.0 * static_cast<double>(support.size()));
    double total = 0.0;
    for (double& w : support.weights) {
      if (w == 0.0) w = seed_weight;
      total += w;
    }
    for (double& w : support.weights) w /= total;

    if (static_cast<int>(support.size()) > cap) {
      std::vector<std::size_t> idx(support.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return support.weights[a] > support.weights[b]; });
      Support kept;
      for (int j = 0; j < cap; ++j) {
        std::size_t i = idx[static_cast<std::size_t>(j)];
        kept.states.push_back(support.states[i]);
        kept.outputs.push_back(support.outputs[i]);
        kept.entropies.push_back(support.entropies[i]);
        kept.costs.push_back(support.costs[i]);
        kept.weights.push_back(support.weights[i]);
      }
      double t = 0.0;
      for (double w : kept.weights) t += w;
      for (double& w : kept.weights) w /= t;
      support = std::move(kept);
    }
  }
  best.iterations = iterations;
  return best;
}

Ensemble to_ensemble(const Support& s, const Matrix& isometry) {
  std::vector<EnsembleItem> items;
  for (std::size_t i = 0; i < s.size(); ++i) items.push_back({s.weights[i], DensityOperator::pure(isometry * s.states[i])});
  return Ensemble(std::move(items));
}

bool feasible(const RealVector& costs, const std::vector<Linear>& cons) {
  for (std::size_t k = 0; k < cons.size(); ++k)
    if (costs[static_cast<Eigen::Index>(k)] > cons[k].bound + 1e-12) return false;
  return true;
}

// Candidate ensembles from penalized solves, pooled to build the best
// feasible mixture (the χ of a mixture dominates the mixed χ values).
struct PoolEntry {
  Support support;
  double chi;
  RealVector costs;
};

std::optional<Ensemble> best_feasible(const std::vector<PoolEntry>& pool, const Problem& p, const Matrix& iso) {
  const auto& cons = p.constraints();
  double best_bound = -1.0;
  std::vector<std::pair<double, std::size_t>> mix;
  for (std::size_t a = 0; a < pool.size(); ++a) {
    if (feasible(pool[a].costs, cons) && pool[a].chi > best_bound) {
      best_bound = pool[a].chi;
      mix = {{1.0, a}};
    }
  }
  for (std::size_t a = 0; a < pool.size(); ++a) {
    if (!feasible(pool[a].costs, cons)) continue;
    for (std::size_t b = 0; b < pool.size(); ++b) {
      if (feasible(pool[b].costs, cons)) continue;
      // Largest θ with θ c_b + (1−θ) c_a <= h componentwise.
      double theta = 1.0;
      for (std::size_t k = 0; k < cons.size(); ++k) {
        const Eigen::Index kk = static_cast<Eigen::Index>(k);
        const double ca = pool[a].costs[kk], cb = pool[b].costs[kk];
        if (cb > ca) theta = std::min(theta, (cons[k].bound - ca) / (cb - ca));
      }
      theta = std::clamp(theta, 0.0, 1.0) * (1.0 - 1e-12);
      const double bound = theta * pool[b].chi + (1.0 - theta) * pool[a].chi;
      if (bound > best_bound) {
        best_bound = bound;
        mix = {{1.0 - theta, a}, {theta, b}};
      }
    }
  }
  if (mix.empty()) return std::nullopt;
  std::vector<std::pair<double, Ensemble>> parts;
  for (auto [w, i] : mix)
    if (w > 0.0) parts.emplace_back(w, to_ensemble(pool[i].support, iso));
  return convex_combination(parts);
}

struct Reduced {
  Channel phi;
  Matrix isometry;  // maps reduced inputs to the original space
  std::vector<Linear> constraints;
};

Channel restrict_input(const Channel& phi, const Matrix& iso) {
  std::vector<Matrix> kraus;
  for (const Matrix& k : phi.kraus()) kraus.push_back(k * iso);
  return Channel(static_cast<int>(iso.cols()), phi.d_out(), std::move(kraus), phi.tags());
}

// Tight expectation bounds (h at the ground energy) confine the input to
// the ground eigenspace; that case is solved as an unconstrained problem on
// the subspace.
Reduced reduce(const Channel& phi, std::vector<Linear> constraints) {
  Matrix iso = Matrix::Identity(phi.d_in(), phi.d_in());
  std::vector<Linear> remaining;
  for (Linear& c : constraints) {
    Matrix h_red = iso.adjoint() * c.observable * iso;
    Spectrum s = eigh(h_red);
    const double lo = s.values.minCoeff();
    const double scale = std::max(1.0, s.values.cwiseAbs().maxCoeff());
    if (c.bound < lo - 1e-10 * scale) fail(ErrorCode::kInfeasible, "expectation bound is infeasible");
    if (c.bound <= lo + 1e-10 * scale) {
      std::vector<Eigen::Index> ground;
      for (Eigen::Index i = 0; i < s.values.size(); ++i)
        if (s.values[i] <= lo + 1e-10 * scale) ground.push_back(i);
      Matrix basis(h_red.rows(), static_cast<Eigen::Index>(ground.size()));
      for (std::size_t j = 0; j < ground.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = s.vectors.col(ground[j]);
      iso = iso * basis;
    } else {
      remaining.push_back(std::move(c));
    }
  }
  for (Linear& c : remaining) c.observable = iso.adjoint() * c.observable * iso;
  return {restrict_input(phi, iso), iso, std::move(remaining)};
}

CapacityResult finish(const Channel& original, Ensemble witness, double upper, int iterations, bool certified,
                      double tol) {
  ExtendedReal chi = chi_quantity(original, witness);
  const double lower = chi.value_or(0.0);
  DensityOperator omega = original.apply(average_state(witness));
  const double up = std::max(upper, lower);
  return CapacityResult{lower, lower, up, up - lower, std::move(witness), std::move(omega), iterations,
                        certified, up - lower <= tol};
}

CapacityResult solve_linear(const Channel& phi, std::vector<Linear> constraints, const SolverOptions& opts,
                            const std::vector<Vector>& initial) {
  if (!(opts.tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tolerance must be positive");
  Reduced red = reduce(phi, std::move(constraints));
  const Problem prob(red.phi, red.constraints, opts);
  const int d = red.phi.d_in();
  const bool certified = d <= 2;
  int budget = std::max(1, opts.max_iter);

  Support seed;
  for (const Vector& v : initial) {
    if (v.size() != phi.d_in()) fail(ErrorCode::kDimensionMismatch, "initial state does not match channel input");
    Vector r = red.isometry.adjoint() * v;
    if (r.norm() > 1e-8) prob.add_state(seed, r, 1.0);
  }
  for (int i = 0; i < d; ++i) prob.add_state(seed, Vector::Unit(d, i), 1.0);
  for (double& w : seed.weights) w = 1.0 / static_cast<double>(seed.size());

  const std::size_t k = prob.num_constraints();
  RealVector lambda = RealVector::Zero(static_cast<Eigen::Index>(k));
  PenalizedResult r0 = solve_penalized(prob, lambda, seed, budget);
  double upper = r0.upper.value_or(std::numeric_limits<double>::infinity());

  if (k == 0 || feasible(r0.mean_costs, prob.constraints())) {
    return finish(phi, to_ensemble(r0.support, red.isometry), upper, r0.iterations, certified, opts.tol);
  }

  // Constraint active: coordinate-wise bisection on the multipliers.
  std::vector<PoolEntry> pool;
  pool.push_back({r0.support, r0.chi, r0.mean_costs});
  {
    // Ground state of Σ H_k is feasible for every product-type constraint list.
    Matrix hsum = Matrix::Zero(d, d);
    for (const auto& c : prob.constraints()) hsum += c.observable;
    Spectrum s = eigh(hsum);
    Support g;
    prob.add_state(g, s.vectors.col(0), 1.0);
    pool.push_back({g, 0.0, mean_costs(g, k)});
  }
  Support warm = r0.support;
  int iterations = r0.iterations;
  const int sweeps = k == 1 ? 1 : 4;
  for (int sweep = 0; sweep < sweeps && budget > 0; ++sweep) {
    for (std::size_t c = 0; c < k && budget > 0; ++c) {
      const Eigen::Index cc = static_cast<Eigen::Index>(c);
      Spectrum hs = eigh(prob.constraints()[c].observable);
      double lo = 0.0;
      // Slater bound: the ground state of H_c is feasible with χ = 0, so
      // λ_c* (h_c − min H_c) <= C.
      const double slack = prob.constraints()[c].bound - hs.values.minCoeff();
      double hi = std::isfinite(upper) && slack > 0.0
                      ? std::max(1e-6, 1.05 * upper / slack)
                      : std::max(1e-3, 10.0 * (hs.values.maxCoeff() - hs.values.minCoeff()));
      // Grow the bracket until the constraint is satisfied.
      for (int grow = 0; grow < 40 && budget > 0; ++grow) {
        lambda[cc] = hi;
        PenalizedResult r = solve_penalized(prob, lambda, warm, budget);
        iterations += r.iterations;
        upper = std::min(upper, r.upper.value_or(upper));
        pool.push_back({r.support, r.chi, r.mean_costs});
        warm = r.support;
        if (r.mean_costs[cc] <= prob.constraints()[c].bound + 1e-12) break;
        lo = hi;
        hi *= 2.0;
      }
      for (int b = 0; b < 60 && budget > 0; ++b) {
        lambda[cc] = 0.5 * (lo + hi);
        PenalizedResult r = solve_penalized(prob, lambda, warm, budget);
        iterations += r.iterations;
        upper = std::min(upper, r.upper.value_or(upper));
        pool.push_back({r.support, r.chi, r.mean_costs});
        warm = r.support;
        if (r.mean_costs[cc] <= prob.constraints()[c].bound + 1e-12)
          hi = lambda[cc];
        else
          lo = lambda[cc];
        std::optional<Ensemble> w = best_feasible(pool, prob, Matrix::Identity(d, d));
        if (w) {
          const double chi = chi_quantity(red.phi, *w).value_or(0.0);
          if (upper - chi <= opts.tol) break;
        }
        if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
      }
      lambda[cc] = hi;
    }
  }
  std::optional<Ensemble> w = best_feasible(pool, prob, red.isometry);
  if (!w) fail(ErrorCode::kInfeasible, "no feasible ensemble found");
  return finish(phi, std::move(*w), upper, iterations, certified, opts.tol);
}

std::vector<Linear> to_linear(const Channel& phi, const ConstraintSet& c) {
  if (auto d = c.dim(); d && *d != phi.d_in())
    fail(ErrorCode::kDimensionMismatch, "constraint set lives on a different space than the channel input");
  if (c.kind() == ConstraintSet::Kind::kExpectationBound) return {{c.observable().matrix(), c.bound()}};
  return {};
}

}  // namespace

namespace detail {

// Shared with the additivity module.
CapacityResult solve_with_linear_constraints(const Channel& phi, const std::vector<std::pair<Matrix, double>>& cons,
                                             const SolverOptions& opts, const std::vector<Vector>& initial) {
  std::vector<Linear> lin;
  for (const auto& [h, b] : cons) lin.push_back({h, b});
  return solve_linear(phi, std::move(lin), opts, initial);
}

}  // namespace detail

CapacityResult chi_capacity(const Channel& phi, const ConstraintSet& constraint, const SolverOptions& opts,
                            const std::vector<Vector>& initial) {
  if (constraint.kind() == ConstraintSet::Kind::kSingleton) {
    const DensityOperator& rho = constraint.state();
    if (rho.dim() != phi.d_in()) fail(ErrorCode::kDimensionMismatch, "singleton state does not match channel input");
    DecompositionOptions dopts;
    dopts.seed = opts.seed;
    dopts.starts = opts.decomposition_starts;
    ChiFunctionResult chi = chi_function_detailed(phi, rho, dopts);
    // The radius at ω = Φ(ρ) coincides with the value; the bound inherits
    // the decomposition search and is therefore not certified.
    return CapacityResult{chi.value, chi.value, chi.value, 0.0, chi.closure.decomposition, phi.apply(rho), 0, false, true};
  }
  return solve_linear(phi, to_linear(phi, constraint), opts, initial);
}

CapacityResult chi_capacity(const Channel& phi, const ConstraintSet& constraint, const SolverOptions& opts) {
  return chi_capacity(phi, constraint, opts, {});
}

// ------------------------------------------------------- divergence radius

ExtendedReal divergence_radius_at(const Channel& phi, const ConstraintSet& constraint,
                                  const DensityOperator& reference, const SolverOptions& opts) {
  if (reference.dim() != phi.d_out()) fail(ErrorCode::kDimensionMismatch, "reference state does not match channel output");
  if (auto d = constraint.dim(); d && *d != phi.d_in())
    fail(ErrorCode::kDimensionMismatch, "constraint set lives on a different space than the channel input");
  detail::SearchOptions search{opts.multistart, opts.qubit_grid, opts.seed};

  switch (constraint.kind()) {
    case ConstraintSet::Kind::kUnconstrained: {
      detail::DivergenceObjective f(phi, reference.matrix());
      return detail::maximize_pure(f, {}, search).best.value;
    }
    case ConstraintSet::Kind::kSingleton: {
      const DensityOperator& rho = constraint.state();
      DecompositionOptions dopts;
      dopts.seed = opts.seed;
      dopts.starts = opts.decomposition_starts;
      const double hhat = convex_closure_output_entropy(phi, rho, dopts).value;
      const Matrix out = phi.apply(rho.matrix());
      // −Ĥ − Tr Φ(ρ) log ρ' = H(Φ(ρ)‖ρ') + H(Φ(ρ)) − Ĥ.
      ExtendedReal d = relative_entropy_of(out, reference.matrix());
      if (d.is_infinite()) return d;
      return d.value() + entropy_of(out) - hhat;
    }
    case ConstraintSet::Kind::kExpectationBound: {
      Reduced red = reduce(phi, {{constraint.observable().matrix(), constraint.bound()}});
      if (red.constraints.empty()) {
        detail::DivergenceObjective f(red.phi, reference.matrix());
        return detail::maximize_pure(f, {}, search).best.value;
      }
      const Linear& c = red.constraints.front();
      // g(λ) = λh + max_ψ [D − λ<H>] is convex; bisect on the sign of its
      // slope h − <H>_ψ*.
      auto eval = [&](double lambda, double& slope) -> ExtendedReal {
        detail::DivergenceObjective f(red.phi, reference.matrix(), lambda * c.observable);
        detail::LocalMax m = detail::maximize_pure(f, {}, search).best;
        slope = c.bound - (m.psi.adjoint() * c.observable * m.psi)(0, 0).real();
        if (m.value.is_infinite()) return m.value;
        return lambda * c.bound + m.value.value();
      };
      Spectrum hs = eigh(c.observable);
      double lo = 0.0, hi = std::max(1e-3, 10.0 * (hs.values.maxCoeff() - hs.values.minCoeff()));
      double slope = 0.0;
      ExtendedReal best = eval(0.0, slope);
      if (slope >= 0.0) return best;
      for (int grow = 0; grow < 40; ++grow) {
        ExtendedReal v = eval(hi, slope);
        if (v < best) best = v;
        if (slope >= 0.0) break;
        lo = hi;
        hi *= 2.0;
      }
      for (int b = 0; b < 60 && hi - lo > 1e-12 * std::max(1.0, hi); ++b) {
        const double mid = 0.5 * (lo + hi);
        ExtendedReal v = eval(mid, slope);
        if (v < best) best = v;
        if (slope >= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      return best;
    }
  }
  return ExtendedReal::infinity();
}

double corollary2_residual(const Channel& phi, const ConstraintSet& constraint, const DensityOperator& rho,
                           const CapacityResult& result, const DecompositionOptions& opts) {
  if (!constraint.contains(rho)) fail(ErrorCode::kInvalidArgument, "state is not feasible for the constraint set");
  const double chi = chi_function(phi, rho, opts);
  ExtendedReal d = relative_entropy_of(phi.apply(rho.matrix()), result.omega.matrix());
  if (d.is_infinite()) return -std::numeric_limits<double>::infinity();
  return result.upper_bound - (chi + d.value());
}

}  // namespace holevo
