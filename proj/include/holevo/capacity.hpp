#pragma once

// Constrained χ-capacity with two-sided bounds, the divergence radius,
// the χ-function and the convex closure of the output entropy.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "holevo/channels.hpp"
#include "holevo/ensembles.hpp"
#include "holevo/opalg.hpp"

namespace holevo {

inline constexpr double kFeasibilityTol = 1e-8;

/// Set of admissible input barycenters.
class ConstraintSet {
 public:
  enum class Kind { kUnconstrained, kSingleton, kExpectationBound };

  static ConstraintSet unconstrained();
  static ConstraintSet singleton(DensityOperator rho);
  /// {ρ : Tr ρH <= h}; throws kInfeasible when h < min eig H.
  static ConstraintSet expectation_bound(HermitianOperator observable, double bound);

  Kind kind() const;
  /// Singleton state; throws for other kinds.
  const DensityOperator& state() const;
  const HermitianOperator& observable() const;
  double bound() const;

  bool contains(const DensityOperator& rho, double tol = kFeasibilityTol) const;
  /// Input dimension the set is tied to, if any.
  std::optional<int> dim() const;

 private:
  struct Unconstrained {};
  struct Singleton {
    DensityOperator rho;
  };
  struct Expectation {
    HermitianOperator observable;
    double bound;
  };
  using Variant = std::variant<Unconstrained, Singleton, Expectation>;
  explicit ConstraintSet(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct SolverOptions {
  double tol = 1e-6;
  int max_iter = 10000;
  std::uint64_t seed = 42;
  int multistart = 32;         ///< inner pure-state maximizations (d_in >= 3)
  int qubit_grid = 256;        ///< Bloch grid for the qubit upper-bound search
  int decomposition_starts = 32;
};

struct CapacityResult {
  double value = 0.0;  ///< χ of the feasible witness
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double gap = 0.0;
  Ensemble witness;
  DensityOperator omega;  ///< Φ(average(witness))
  int iterations = 0;
  /// True when the upper bound comes from an exhaustive qubit search; the
  /// bound is heuristic otherwise.
  bool certified = false;
  bool converged = false;
};

/// sup over feasible ensembles of Σ μ_j H(Φ(σ_j)‖ρ'). Always an upper bound
/// on the χ-capacity.
ExtendedReal divergence_radius_at(const Channel& phi, const ConstraintSet& constraint,
                                  const DensityOperator& reference, const SolverOptions& opts = {});

/// Alternating ensemble/output scheme; deterministic for a fixed seed.
/// Throws kInfeasible for empty constraint sets and kDimensionMismatch for
/// constraints on the wrong space.
CapacityResult chi_capacity(const Channel& phi, const ConstraintSet& constraint, const SolverOptions& opts = {});

/// Warm-started variant: `initial` pure states seed the ensemble support.
CapacityResult chi_capacity(const Channel& phi, const ConstraintSet& constraint, const SolverOptions& opts,
                            const std::vector<Vector>& initial);

struct DecompositionOptions {
  int starts = 32;
  int max_iter = 500;
  std::uint64_t seed = 42;
  /// Decomposition length; 0 means d_in².
  int size = 0;
  /// Extra starting decompositions of the same state. Mixed members are
  /// split along their eigenvectors.
  std::vector<Ensemble> seeds;
};

struct ConvexClosureResult {
  double value = 0.0;       ///< Σ π_i H(Φ(ρ_i)) of the best decomposition found
  double spread = 0.0;      ///< worst minus best over the multi-start runs
  int agreeing_starts = 0;  ///< runs ending within 1e-8 of the best
  Ensemble decomposition;   ///< pure states
};

/// Ĥ_Φ(ρ): minimal average output entropy over pure decompositions of ρ.
/// The returned value is an upper bound on the true infimum.
ConvexClosureResult convex_closure_output_entropy(const Channel& phi, const DensityOperator& rho,
                                                  const DecompositionOptions& opts = {});

struct ChiFunctionResult {
  double value = 0.0;  ///< H(Φ(ρ)) − Ĥ_Φ(ρ)
  ConvexClosureResult closure;
};

ChiFunctionResult chi_function_detailed(const Channel& phi, const DensityOperator& rho,
                                        const DecompositionOptions& opts = {});
double chi_function(const Channel& phi, const DensityOperator& rho, const DecompositionOptions& opts = {});

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
};

/// Independent oracle for qubit inputs: Blahut–Arimoto over a Fibonacci grid
/// of `resolution` pure states for the lower bound; for the upper bound the
/// divergence radius at reference outputs near the grid optimum, with the
/// supremum over pure states taken by grid scan plus pattern-search
/// refinement. Throws kUnsupported when d_in > 2 or for singleton sets.
Bracket brute_force_capacity(const Channel& phi, const ConstraintSet& constraint, int resolution);

/// Ω(Φ,𝒜) estimate carried by a solve.
DensityOperator output_optimal_average(const CapacityResult& result);

/// upper_bound − [χ_Φ(ρ) + H(Φ(ρ)‖ω)] for a feasible ρ; non-negative up to
/// solver tolerance.
double corollary2_residual(const Channel& phi, const ConstraintSet& constraint, const DensityOperator& rho,
                           const CapacityResult& result, const DecompositionOptions& opts = {});

/// Pure-state decomposition of a (possibly mixed) ensemble: every member is
/// split along its eigenvectors.
Ensemble refine_to_pure(const Ensemble& e);

}  // namespace holevo
