#include "holevo/additivity.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pure_state_search.hpp"

namespace holevo {

namespace detail {
CapacityResult solve_with_linear_constraints(const Channel& phi, const std::vector<std::pair<Matrix, double>>& cons,
                                             const SolverOptions& opts, const std::vector<Vector>& initial);
}  // namespace detail

namespace {

Vector leading_vector(const DensityOperator& pure) {
  Spectrum s = eigh(pure.matrix());
  return s.vectors.col(s.values.size() - 1);
}

std::vector<Vector> product_seeds(const Ensemble& a, const Ensemble& b) {
  std::vector<Vector> out;
  const Ensemble pa = refine_to_pure(a), pb = refine_to_pure(b);
  for (const auto& x : pa.items())
    for (const auto& y : pb.items()) {
      const Vector u = leading_vector(x.state), v = leading_vector(y.state);
      Vector w(u.size() * v.size());
      for (Eigen::Index i = 0; i < u.size(); ++i) w.segment(i * v.size(), v.size()) = u[i] * v;
      out.push_back(w);
    }
  return out;
}

Ensemble marginal(const Ensemble& joint, int da, int db, Keep keep) {
  std::vector<EnsembleItem> items;
  for (const auto& it : joint.items()) items.push_back({it.weight, partial_trace(it.state, da, db, keep)});
  return Ensemble(std::move(items));
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

bool ProductConstraint::contains(const DensityOperator& joint, int dim_left, int dim_right, double tol) const {
  if (dim_left <= 0 || dim_right <= 0 || joint.dim() != dim_left * dim_right) return false;
  return left.contains(partial_trace(joint, dim_left, dim_right, Keep::kFirst), tol) &&
         right.contains(partial_trace(joint, dim_left, dim_right, Keep::kSecond), tol);
}

CapacityResult joint_capacity(const Channel& phi, const Channel& psi, const ProductConstraint& constraint,
                              const SolverOptions& opts, const std::vector<Vector>& initial) {
  if (constraint.left.kind() == ConstraintSet::Kind::kSingleton ||
      constraint.right.kind() == ConstraintSet::Kind::kSingleton)
    fail(ErrorCode::kUnsupported, "joint capacity with a singleton factor constraint is not supported");
  if (auto d = constraint.left.dim(); d && *d != phi.d_in())
    fail(ErrorCode::kDimensionMismatch, "left constraint does not match the first channel");
  if (auto d = constraint.right.dim(); d && *d != psi.d_in())
    fail(ErrorCode::kDimensionMismatch, "right constraint does not match the second channel");
  std::vector<std::pair<Matrix, double>> cons;
  if (constraint.left.kind() == ConstraintSet::Kind::kExpectationBound)
    cons.emplace_back(kron(constraint.left.observable().matrix(), Matrix::Identity(psi.d_in(), psi.d_in())),
                      constraint.left.bound());
  if (constraint.right.kind() == ConstraintSet::Kind::kExpectationBound)
    cons.emplace_back(kron(Matrix::Identity(phi.d_in(), phi.d_in()), constraint.right.observable().matrix()),
                      constraint.right.bound());
  return detail::solve_with_linear_constraints(tensor_channel(phi, psi), cons, opts, initial);
}

AdditivityReport additivity_report(const Channel& phi, const ConstraintSet& a, const Channel& psi,
                                   const ConstraintSet& b, const SolverOptions& opts, std::string label) {
  const auto start = std::chrono::steady_clock::now();
  CapacityResult left = chi_capacity(phi, a, opts);
  CapacityResult right = chi_capacity(psi, b, opts);
  CapacityResult joint = joint_capacity(phi, psi, {a, b}, opts, product_seeds(left.witness, right.witness));
  const double residual = trace_distance(joint.omega, tensor(left.omega, right.omega));
  const double cauchy = std::sqrt(8.0 * (joint.gap + left.gap + right.gap));
  const double gap = joint.value - (left.value + right.value);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return AdditivityReport{std::move(label), std::move(joint), std::move(left), std::move(right),
                          gap, residual, cauchy, secs};
}

double subadditivity_gap(const Channel& phi, const Channel& psi, const DensityOperator& omega,
                         const DecompositionOptions& opts) {
  const int da = phi.d_in(), db = psi.d_in();
  if (omega.dim() != da * db) fail(ErrorCode::kDimensionMismatch, "joint state does not match the channel pair");
  ChiFunctionResult joint = chi_function_detailed(tensor_channel(phi, psi), omega, opts);
  // Marginals of the joint optimum are decompositions of the reduced states.
  DecompositionOptions left_opts = opts, right_opts = opts;
  left_opts.seeds.push_back(marginal(joint.closure.decomposition, da, db, Keep::kFirst));
  right_opts.seeds.push_back(marginal(joint.closure.decomposition, da, db, Keep::kSecond));
  const double chi_left = chi_function(phi, partial_trace(omega, da, db, Keep::kFirst), left_opts);
  const double chi_right = chi_function(psi, partial_trace(omega, da, db, Keep::kSecond), right_opts);
  return chi_left + chi_right - joint.value;
}

std::string to_string(Evidence e) {
  switch (e) {
    case Evidence::kSupports: return "supports";
    case Evidence::kInconclusive: return "inconclusive";
    case Evidence::kViolates: return "violates";
  }
  return "unknown";
}

HhatGap superadditivity_gap_hhat(const Channel& phi, const Channel& psi, const DensityOperator& omega,
                                 const DecompositionOptions& opts, double slack) {
  const int da = phi.d_in(), db = psi.d_in();
  if (omega.dim() != da * db) fail(ErrorCode::kDimensionMismatch, "joint state does not match the channel pair");
  const DensityOperator wa = partial_trace(omega, da, db, Keep::kFirst);
  const DensityOperator wb = partial_trace(omega, da, db, Keep::kSecond);
  ConvexClosureResult left = convex_closure_output_entropy(phi, wa, opts);
  ConvexClosureResult right = convex_closure_output_entropy(psi, wb, opts);
  DecompositionOptions joint_opts = opts;
  if ((omega.matrix() - kron(wa.matrix(), wb.matrix())).cwiseAbs().maxCoeff() < 1e-12) {
    // Product input: the product of the factor optima decomposes ω.
    std::vector<EnsembleItem> items;
    for (const auto& x : left.decomposition.items())
      for (const auto& y : right.decomposition.items()) items.push_back({x.weight * y.weight, tensor(x.state, y.state)});
    joint_opts.seeds.push_back(Ensemble(std::move(items)));
  }
  ConvexClosureResult joint = convex_closure_output_entropy(tensor_channel(phi, psi), omega, joint_opts);
  HhatGap out;
  out.gap = joint.value - left.value - right.value;
  out.evidence = out.gap >= -1e-9 ? Evidence::kSupports : out.gap >= -slack ? Evidence::kInconclusive : Evidence::kViolates;
  return out;
}

MinOutputEntropy min_output_entropy(const Channel& phi, const SolverOptions& opts, const std::vector<Vector>& warm) {
  detail::NegativeEntropyObjective f(phi);
  detail::SearchResult r = detail::maximize_pure(f, warm, {opts.multistart, opts.qubit_grid, opts.seed});
  return {-r.best.value.value(), r.best.psi};
}

double moe_additivity_gap(const Channel& phi, const Channel& psi, const SolverOptions& opts) {
  MinOutputEntropy a = min_output_entropy(phi, opts);
  MinOutputEntropy b = min_output_entropy(psi, opts);
  Vector prod(a.minimizer.size() * b.minimizer.size());
  for (Eigen::Index i = 0; i < a.minimizer.size(); ++i)
    prod.segment(i * b.minimizer.size(), b.minimizer.size()) = a.minimizer[i] * b.minimizer;
  MinOutputEntropy joint = min_output_entropy(tensor_channel(phi, psi), opts, {prod});
  return joint.value - a.value - b.value;
}

OmegaProductCheck remark3_product_omega_check(const Channel& phi, const ConstraintSet& a, const Channel& psi,
                                              const ConstraintSet& b, const SolverOptions& opts) {
  AdditivityReport r = additivity_report(phi, a, psi, b, opts);
  return {r.omega_product_residual, r.cauchy_bound};
}

std::string additivity_csv(const std::vector<AdditivityReport>& reports, bool timing) {
  std::ostringstream os;
  os << "instance,lhs_value,lhs_lower,lhs_upper,lhs_gap,rhs_left_value,rhs_left_gap,rhs_right_value,"
        "rhs_right_gap,additivity_gap,omega_residual,cauchy_bound,runtime_s\n";
  for (const auto& r : reports) {
    os << r.label << ',' << fmt(r.lhs.value) << ',' << fmt(r.lhs.lower_bound) << ',' << fmt(r.lhs.upper_bound) << ','
       << fmt(r.lhs.gap) << ',' << fmt(r.rhs_left.value) << ',' << fmt(r.rhs_left.gap) << ','
       << fmt(r.rhs_right.value) << ',' << fmt(r.rhs_right.gap) << ',' << fmt(r.gap) << ','
       << fmt(r.omega_product_residual) << ',' << fmt(r.cauchy_bound) << ',';
    if (timing) os << fmt(r.runtime_seconds);
    os << '\n';
  }
  return os.str();
}

}  // namespace holevo
