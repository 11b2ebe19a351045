#pragma once

// Instance-level additivity experiments for pairs of channels. Every
// number here is evidence about a specific instance, carried together with
// the solver gaps needed to audit it.

#include <string>
#include <vector>

#include "holevo/capacity.hpp"

namespace holevo {

/// 𝒜⊗ℬ: joint barycenters whose marginals lie in the two factor sets.
struct ProductConstraint {
  ConstraintSet left = ConstraintSet::unconstrained();
  ConstraintSet right = ConstraintSet::unconstrained();

  /// False when the joint dimension is not dim_left * dim_right.
  bool contains(const DensityOperator& joint, int dim_left, int dim_right, double tol = kFeasibilityTol) const;
};

/// χ-capacity of Φ⊗Ψ under 𝒜⊗ℬ. Expectation bounds on a factor become
/// linear constraints on the joint barycenter; singleton factors are
/// rejected with kUnsupported. `initial` seeds the joint support.
CapacityResult joint_capacity(const Channel& phi, const Channel& psi, const ProductConstraint& constraint,
                              const SolverOptions& opts = {}, const std::vector<Vector>& initial = {});

struct AdditivityReport {
  std::string label;
  CapacityResult lhs;
  CapacityResult rhs_left;
  CapacityResult rhs_right;
  double gap = 0.0;  ///< lhs.value − (rhs_left.value + rhs_right.value)
  double omega_product_residual = 0.0;  ///< ‖Ω_joint − Ω_left ⊗ Ω_right‖₁
  double cauchy_bound = 0.0;            ///< sqrt(8 · sum of the three gaps)
  double runtime_seconds = 0.0;
};

/// Solves both factors and the joint problem; the joint support is seeded
/// with the product of the factor witnesses.
AdditivityReport additivity_report(const Channel& phi, const ConstraintSet& a, const Channel& psi,
                                   const ConstraintSet& b, const SolverOptions& opts = {},
                                   std::string label = "");

/// χ_Φ(ω^H) + χ_Ψ(ω^K) − χ_{Φ⊗Ψ}(ω).
double subadditivity_gap(const Channel& phi, const Channel& psi, const DensityOperator& omega,
                         const DecompositionOptions& opts = {});

enum class Evidence { kSupports, kInconclusive, kViolates };
std::string to_string(Evidence e);

struct HhatGap {
  double gap = 0.0;  ///< Ĥ_{Φ⊗Ψ}(ω) − Ĥ_Φ(ω^H) − Ĥ_Ψ(ω^K)
  Evidence evidence = Evidence::kSupports;
};

/// Negative values within `slack` are reported as inconclusive, since every
/// Ĥ estimate is an upper bound from a multi-start search.
HhatGap superadditivity_gap_hhat(const Channel& phi, const Channel& psi, const DensityOperator& omega,
                                 const DecompositionOptions& opts = {}, double slack = 1e-6);

struct MinOutputEntropy {
  double value = 0.0;
  Vector minimizer;
};

/// min over pure inputs of H(Φ(ψ)); `warm` seeds the search.
MinOutputEntropy min_output_entropy(const Channel& phi, const SolverOptions& opts = {},
                                    const std::vector<Vector>& warm = {});
/// MOE(Φ⊗Ψ) − MOE(Φ) − MOE(Ψ); the joint search starts from the product
/// of the factor minimizers.
double moe_additivity_gap(const Channel& phi, const Channel& psi, const SolverOptions& opts = {});

struct OmegaProductCheck {
  double residual = 0.0;
  double cauchy_bound = 0.0;
};
OmegaProductCheck remark3_product_omega_check(const Channel& phi, const ConstraintSet& a, const Channel& psi,
                                              const ConstraintSet& b, const SolverOptions& opts = {});

/// One row per report; numbers with 12 significant digits. The runtime
/// column is left empty unless `timing` is set.
std::string additivity_csv(const std::vector<AdditivityReport>& reports, bool timing);

}  // namespace holevo
