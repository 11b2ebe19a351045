#pragma once

// Dense complex operator algebra on finite-dimensional Hilbert spaces.
// Every entropic quantity is in nats.

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "holevo/error.hpp"

namespace holevo {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = 1e-10;
/// Eigenvalues at or below this are outside the support.
inline constexpr double kRankTol = 1e-10;
/// Maximal residual of a support vector projected off the reference support.
inline constexpr double kSupportTol = 1e-8;

/// A non-negative real or +infinity.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit by intent
  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_finite() const { return !infinite_; }
  constexpr bool is_infinite() const { return infinite_; }
  /// Throws kInvalidArgument when infinite.
  double value() const;
  /// Finite value, or `fallback` for +infinity.
  constexpr double value_or(double fallback) const {
    return infinite_ ? fallback : value_;
  }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return {a.value_ + b.value_};
  }
  friend ExtendedReal operator*(double w, ExtendedReal a);
  friend bool operator<(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(ExtendedReal a, ExtendedReal b) { return b < a; }
  friend bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
struct Spectrum {
  RealVector values;
  Matrix vectors;
};

/// Hermitian part is taken before decomposing.
Spectrum eigh(const Matrix& hermitian);

/// f applied to the eigenvalues: V f(Λ) V†.
template <class F>
Matrix spectral_apply(const Spectrum& s, F&& f) {
  RealVector fv(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) fv[i] = f(s.values[i]);
  return s.vectors * fv.asDiagonal() * s.vectors.adjoint();
}

double max_hermitian_defect(const Matrix& m);
Matrix kron(const Matrix& a, const Matrix& b);

class HermitianOperator {
 public:
  /// Throws kInvalidOperand if not square or not self-adjoint within 1e-10.
  explicit HermitianOperator(Matrix entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double min_eigenvalue() const;
  double max_eigenvalue() const;

 private:
  Matrix m_;
};

/// Positive unit-trace operator. Eigenvalues in [-1e-10, 0) are tolerated
/// and clamped to zero wherever a spectrum is consumed.
class DensityOperator {
 public:
  /// Validates Hermiticity, unit trace and positivity.
  explicit DensityOperator(Matrix entries);

  /// Skips validation; for states the library produced itself from valid
  /// inputs (channel outputs, ensemble averages).
  static DensityOperator trusted(Matrix entries);

  static DensityOperator pure(const Vector& psi);
  static DensityOperator basis(int dim, int index);
  static DensityOperator maximally_mixed(int dim);
  static DensityOperator diagonal(std::span<const double> probabilities);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  struct Unchecked {};
  DensityOperator(Matrix entries, Unchecked) : m_(std::move(entries)) {}
  Matrix m_;
};

/// -Σ λ log λ with 0 log 0 = 0.
double entropy(const DensityOperator& a);
/// Von Neumann entropy of a positive matrix given by its matrix, without
/// state validation. Eigenvalues are clamped at zero.
double entropy_of(const Matrix& positive);
double binary_entropy(double q);

/// H(A‖B); +infinity unless ran A ⊆ ran B.
ExtendedReal relative_entropy(const DensityOperator& a, const DensityOperator& b);
ExtendedReal relative_entropy_of(const Matrix& a, const Matrix& b);

/// ‖A − B‖₁.
double trace_distance(const DensityOperator& a, const DensityOperator& b);
double trace_norm(const Matrix& hermitian);

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

enum class Keep { kFirst, kSecond };

/// Reduced state of W on the factor named by `keep`; W lives on C^{dA}⊗C^{dB}.
DensityOperator partial_trace(const DensityOperator& w, int dim_a, int dim_b, Keep keep);
Matrix partial_trace_of(const Matrix& w, int dim_a, int dim_b, Keep keep);

/// Partial transpose on the second factor.
Matrix partial_transpose_second(const Matrix& w, int dim_a, int dim_b);

/// Projector onto the eigenvectors with eigenvalue > kRankTol.
Matrix support_projector(const Matrix& positive);

}  // namespace holevo
