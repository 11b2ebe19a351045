#pragma once

#include <span>
#include <utility>
#include <vector>

#include "holevo/channels.hpp"
#include "holevo/opalg.hpp"

namespace holevo {

inline constexpr double kWeightSumTol = 1e-10;

struct EnsembleItem {
  double weight;
  DensityOperator state;
};

/// Finite ensemble {π_i, ρ_i}. Zero-weight items are dropped on construction.
class Ensemble {
 public:
  /// Throws kInvalidArgument on negative weights, weights not summing to 1
  /// within 1e-10, mixed dimensions, or no item of positive weight.
  explicit Ensemble(std::vector<EnsembleItem> items);
  static Ensemble single(DensityOperator state);

  int dim() const { return items_.front().state.dim(); }
  std::size_t size() const { return items_.size(); }
  const std::vector<EnsembleItem>& items() const { return items_; }
  const EnsembleItem& operator[](std::size_t i) const { return items_[i]; }

 private:
  std::vector<EnsembleItem> items_;
};

/// Σ π_i ρ_i.
DensityOperator average_state(const Ensemble& e);

/// χ_Φ(E) = Σ π_i H(Φ(ρ_i)‖Φ(ρ̄)).
ExtendedReal chi_quantity(const Channel& phi, const Ensemble& e);
/// H(Φ(ρ̄)) − Σ π_i H(Φ(ρ_i)); equal to chi_quantity in finite dimensions.
double chi_quantity_entropy_form(const Channel& phi, const Ensemble& e);

struct DonaldSides {
  ExtendedReal lhs;  ///< Σ π_i H(ρ_i‖ρ̂)
  ExtendedReal rhs;  ///< Σ π_i H(ρ_i‖ρ̄) + H(ρ̄‖ρ̂)
};
DonaldSides donald_check(const Ensemble& e, const DensityOperator& reference);

/// Σ_k λ_k E_k as the concatenation with weights λ_k π^k_i.
Ensemble convex_combination(std::span<const std::pair<double, Ensemble>> parts);

/// Ensemble with average `target` obtained by transporting each member of
/// `e` through ρ^{-1/2}(·)ρ^{-1/2} and target^{1/2}(·)target^{1/2}. Throws
/// kDegenerateTransport if a transported member has zero trace.
Ensemble transport_ensemble(const Ensemble& e, const DensityOperator& target);

/// Pseudo-inverse square root cutoff used by transport_ensemble.
inline constexpr double kPseudoInverseCutoff = 1e-12;

}  // namespace holevo
