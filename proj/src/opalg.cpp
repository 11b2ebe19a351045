#include "holevo/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace holevo {

double ExtendedReal::value() const {
  if (infinite_) fail(ErrorCode::kInvalidArgument, "value of +infinity requested");
  return value_;
}

ExtendedReal operator*(double w, ExtendedReal a) {
  if (a.infinite_) return w == 0.0 ? ExtendedReal(0.0) : ExtendedReal::infinity();
  return {w * a.value_};
}

Spectrum eigh(const Matrix& hermitian) {
  Matrix h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double max_hermitian_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator::HermitianOperator(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    fail(ErrorCode::kInvalidOperand, "Hermitian operator must be a non-empty square matrix");
  if (max_hermitian_defect(m_) > kHermitianTol)
    fail(ErrorCode::kInvalidOperand, "operator is not self-adjoint");
  m_ = 0.5 * (m_ + m_.adjoint());
}

double HermitianOperator::min_eigenvalue() const { return eigh(m_).values.minCoeff(); }
double HermitianOperator::max_eigenvalue() const { return eigh(m_).values.maxCoeff(); }

DensityOperator::DensityOperator(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    fail(ErrorCode::kInvalidOperand, "density operator must be a non-empty square matrix");
  if (max_hermitian_defect(m_) > kHermitianTol)
    fail(ErrorCode::kInvalidOperand, "density operator is not self-adjoint");
  m_ = 0.5 * (m_ + m_.adjoint());
  double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "density operator trace is " << tr << ", expected 1";
    fail(ErrorCode::kInvalidOperand, os.str());
  }
  if (eigh(m_).values.minCoeff() < -kPositivityTol)
    fail(ErrorCode::kInvalidOperand, "density operator has a negative eigenvalue");
}

DensityOperator DensityOperator::trusted(Matrix entries) {
  return DensityOperator(std::move(entries), Unchecked{});
}

DensityOperator DensityOperator::pure(const Vector& psi) {
  double n = psi.norm();
  if (n == 0.0) fail(ErrorCode::kInvalidOperand, "zero vector has no pure state");
  Vector u = psi / n;
  return DensityOperator(u * u.adjoint(), Unchecked{});
}

DensityOperator DensityOperator::basis(int dim, int index) {
  if (index < 0 || index >= dim) fail(ErrorCode::kInvalidArgument, "basis index out of range");
  Matrix m = Matrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityOperator(std::move(m), Unchecked{});
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  if (dim < 1) fail(ErrorCode::kInvalidArgument, "dimension must be positive");
  return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim), Unchecked{});
}

DensityOperator DensityOperator::diagonal(std::span<const double> p) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) m(i, i) = p[i];
  return DensityOperator(std::move(m));
}

double entropy_of(const Matrix& positive) {
  RealVector ev = eigh(positive).values;
  double h = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double l = ev[i];
    if (l > 0.0) h -= l * std::log(l);
  }
  return h;
}

double entropy(const DensityOperator& a) { return entropy_of(a.matrix()); }

double binary_entropy(double q) {
  double h = 0.0;
  if (q > 0.0) h -= q * std::log(q);
  if (q < 1.0) h -= (1.0 - q) * std::log(1.0 - q);
  return h;
}

ExtendedReal relative_entropy_of(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    fail(ErrorCode::kDimensionMismatch, "relative entropy of operators on different spaces");
  Spectrum sa = eigh(a);
  Spectrum sb = eigh(b);
  const Eigen::Index d = a.rows();

  std::vector<Eigen::Index> supp_b, kernel_b;
  for (Eigen::Index j = 0; j < d; ++j) (sb.values[j] > kRankTol ? supp_b : kernel_b).push_back(j);

  // Overlaps |<a_i|b_j>|^2 in the common refinement.
  Matrix overlap = sa.vectors.adjoint() * sb.vectors;
  double value = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    double ai = sa.values[i];
    if (ai <= kRankTol) continue;
    // ‖a_i − P_B a_i‖, summed over ker B directly so round-off stays small.
    double leak = 0.0;
    for (Eigen::Index j : kernel_b) leak += std::norm(overlap(i, j));
    if (std::sqrt(leak) > kSupportTol) return ExtendedReal::infinity();
    double cross = 0.0;
    for (Eigen::Index j : supp_b) cross += std::norm(overlap(i, j)) * std::log(sb.values[j]);
    value += ai * std::log(ai) - ai * cross;
  }
  return std::max(0.0, value);
}

ExtendedReal relative_entropy(const DensityOperator& a, const DensityOperator& b) {
  return relative_entropy_of(a.matrix(), b.matrix());
}

double trace_norm(const Matrix& hermitian) {
  return eigh(hermitian).values.cwiseAbs().sum();
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::kDimensionMismatch, "trace distance of states on different spaces");
  return trace_norm(a.matrix() - b.matrix());
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::trusted(kron(a.matrix(), b.matrix()));
}

Matrix partial_trace_of(const Matrix& w, int dim_a, int dim_b, Keep keep) {
  if (dim_a < 1 || dim_b < 1 || w.rows() != static_cast<Eigen::Index>(dim_a) * dim_b || w.cols() != w.rows())
    fail(ErrorCode::kDimensionMismatch, "operator dimension does not factor as dA*dB");
  if (keep == Keep::kFirst) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int k = 0; k < dim_b; ++k) out(i, j) += w(i * dim_b + k, j * dim_b + k);
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_b; ++i)
    for (int j = 0; j < dim_b; ++j)
      for (int k = 0; k < dim_a; ++k) out(i, j) += w(k * dim_b + i, k * dim_b + j);
  return out;
}

DensityOperator partial_trace(const DensityOperator& w, int dim_a, int dim_b, Keep keep) {
  return DensityOperator::trusted(partial_trace_of(w.matrix(), dim_a, dim_b, keep));
}

Matrix partial_transpose_second(const Matrix& w, int dim_a, int dim_b) {
  if (w.rows() != static_cast<Eigen::Index>(dim_a) * dim_b)
    fail(ErrorCode::kDimensionMismatch, "operator dimension does not factor as dA*dB");
  Matrix out(w.rows(), w.cols());
  for (int a = 0; a < dim_a; ++a)
    for (int b = 0; b < dim_b; ++b)
      for (int c = 0; c < dim_a; ++c)
        for (int e = 0; e < dim_b; ++e) out(a * dim_b + b, c * dim_b + e) = w(a * dim_b + e, c * dim_b + b);
  return out;
}

Matrix support_projector(const Matrix& positive) {
  Spectrum s = eigh(positive);
  return spectral_apply(s, [](double l) { return l > kRankTol ? 1.0 : 0.0; });
}

}  // namespace holevo
