#include "holevo/ensembles.hpp"

#include <cmath>

namespace holevo {

Ensemble::Ensemble(std::vector<EnsembleItem> items) {
  double total = 0.0;
  for (auto& it : items) {
    if (!(it.weight >= 0.0)) fail(ErrorCode::kInvalidArgument, "ensemble weight is negative");
    total += it.weight;
    if (it.weight > 0.0) items_.push_back(std::move(it));
  }
  if (items_.empty()) fail(ErrorCode::kInvalidArgument, "ensemble has no item of positive weight");
  if (std::abs(total - 1.0) > kWeightSumTol) fail(ErrorCode::kInvalidArgument, "ensemble weights do not sum to 1");
  for (const auto& it : items_)
    if (it.state.dim() != items_.front().state.dim())
      fail(ErrorCode::kDimensionMismatch, "ensemble states live on different spaces");
}

Ensemble Ensemble::single(DensityOperator state) {
  return Ensemble({{1.0, std::move(state)}});
}

DensityOperator average_state(const Ensemble& e) {
  Matrix avg = Matrix::Zero(e.dim(), e.dim());
  for (const auto& it : e.items()) avg += it.weight * it.state.matrix();
  return DensityOperator::trusted(avg);
}

ExtendedReal chi_quantity(const Channel& phi, const Ensemble& e) {
  if (e.dim() != phi.d_in()) fail(ErrorCode::kDimensionMismatch, "ensemble does not match channel input");
  Matrix out_avg = phi.apply(average_state(e).matrix());
  ExtendedReal chi = 0.0;
  for (const auto& it : e.items())
    chi = chi + it.weight * relative_entropy_of(phi.apply(it.state.matrix()), out_avg);
  return chi;
}

double chi_quantity_entropy_form(const Channel& phi, const Ensemble& e) {
  if (e.dim() != phi.d_in()) fail(ErrorCode::kDimensionMismatch, "ensemble does not match channel input");
  double h = entropy_of(phi.apply(average_state(e).matrix()));
  for (const auto& it : e.items()) h -= it.weight * entropy_of(phi.apply(it.state.matrix()));
  return h;
}

DonaldSides donald_check(const Ensemble& e, const DensityOperator& reference) {
  if (e.dim() != reference.dim()) fail(ErrorCode::kDimensionMismatch, "reference state does not match ensemble");
  DensityOperator avg = average_state(e);
  ExtendedReal lhs = 0.0;
  ExtendedReal rhs = relative_entropy(avg, reference);
  for (const auto& it : e.items()) {
    lhs = lhs + it.weight * relative_entropy(it.state, reference);
    rhs = rhs + it.weight * relative_entropy(it.state, avg);
  }
  return {lhs, rhs};
}

Ensemble convex_combination(std::span<const std::pair<double, Ensemble>> parts) {
  std::vector<EnsembleItem> items;
  for (const auto& [lambda, ens] : parts) {
    if (lambda < 0.0) fail(ErrorCode::kInvalidArgument, "convex combination weight is negative");
    for (const auto& it : ens.items()) items.push_back({lambda * it.weight, it.state});
  }
  return Ensemble(std::move(items));
}

Ensemble transport_ensemble(const Ensemble& e, const DensityOperator& target) {
  if (e.dim() != target.dim()) fail(ErrorCode::kDimensionMismatch, "target state does not match ensemble");
  const int d = e.dim();
  const Matrix rho = average_state(e).matrix();
  Spectrum s = eigh(rho);
  Matrix inv_sqrt = spectral_apply(s, [](double l) { return l > kPseudoInverseCutoff ? 1.0 / std::sqrt(l) : 0.0; });
  Matrix support = spectral_apply(s, [](double l) { return l > kPseudoInverseCutoff ? 1.0 : 0.0; });
  Matrix t_sqrt = spectral_apply(eigh(target.matrix()), [](double l) { return std::sqrt(std::max(0.0, l)); });
  Matrix leak = t_sqrt * (Matrix::Identity(d, d) - support) * t_sqrt;

  std::vector<EnsembleItem> items;
  for (const auto& it : e.items()) {
    Matrix a = inv_sqrt * it.state.matrix() * inv_sqrt;
    Matrix b = t_sqrt * a * t_sqrt + leak;
    b = 0.5 * (b + b.adjoint());
    double tr = b.trace().real();
    if (!(tr > 0.0)) fail(ErrorCode::kDegenerateTransport, "transported ensemble member has zero trace");
    items.push_back({it.weight * tr, DensityOperator::trusted(b / tr)});
  }
  // Weights sum to Tr target = 1 up to rounding; renormalize the residue.
  double total = 0.0;
  for (const auto& it : items) total += it.weight;
  for (auto& it : items) it.weight /= total;
  return Ensemble(std::move(items));
}

}  // namespace holevo
