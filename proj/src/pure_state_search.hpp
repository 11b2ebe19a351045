#pragma once

// Local and multi-start maximization of functions of a pure input state
// whose value is convex in |ψ><ψ|. Both objectives used by the library
// (divergence to a fixed output and negative output entropy) are of that
// form, which makes the top eigenvector of the gradient operator a
// non-decreasing jump.

#include <cstdint>
#include <vector>

#include "holevo/channels.hpp"
#include "holevo/opalg.hpp"

namespace holevo::detail {

class PureObjective {
 public:
  virtual ~PureObjective() = default;
  virtual int dim() const = 0;
  virtual ExtendedReal value(const Vector& psi) const = 0;
  /// Hermitian G with Euclidean gradient 2Gψ.
  virtual Matrix gradient_operator(const Vector& psi) const = 0;
};

/// ψ -> H(Φ(ψ)‖ω) − <ψ|penalty|ψ>.
class DivergenceObjective final : public PureObjective {
 public:
  DivergenceObjective(const Channel& phi, const Matrix& omega, Matrix penalty);
  DivergenceObjective(const Channel& phi, const Matrix& omega);
  int dim() const override { return phi_.d_in(); }
  ExtendedReal value(const Vector& psi) const override;
  Matrix gradient_operator(const Vector& psi) const override;

 private:
  const Channel& phi_;
  Matrix log_omega_;        // log on supp ω, 0 elsewhere
  Matrix log_omega_grad_;   // log with a floor, used for gradients only
  Matrix outside_support_;  // I − P_ω
  Matrix penalty_;
  bool has_penalty_;
};

/// ψ -> −H(Φ(ψ)).
class NegativeEntropyObjective final : public PureObjective {
 public:
  explicit NegativeEntropyObjective(const Channel& phi) : phi_(phi) {}
  int dim() const override { return phi_.d_in(); }
  ExtendedReal value(const Vector& psi) const override;
  Matrix gradient_operator(const Vector& psi) const override;

 private:
  const Channel& phi_;
};

struct LocalMax {
  Vector psi;
  ExtendedReal value;
};

LocalMax ascend(const PureObjective& f, Vector psi, int max_iter = 300);

struct SearchOptions {
  int multistart = 32;    ///< ascents launched from the best-ranked seeds
  int qubit_grid = 256;   ///< Bloch-sphere grid size when dim == 2
  std::uint64_t seed = 42;
};

struct SearchResult {
  LocalMax best;
  std::vector<LocalMax> maxima;  ///< distinct local maxima, best first
};

/// Qubits: the full Fibonacci grid is scored and the best points refined.
/// Higher dimensions: basis states, Fourier states and seeded random
/// states are scored and the best `multistart` refined. `warm` starts are
/// always refined.
SearchResult maximize_pure(const PureObjective& f, const std::vector<Vector>& warm, const SearchOptions& opts);

/// Unit vectors on the Bloch sphere (Fibonacci lattice).
std::vector<Vector> bloch_grid(int points);
Vector bloch_state(double theta, double phi);

/// Logarithm with eigenvalues floored at 1e-300.
Matrix floored_log(const Matrix& positive);

}  // namespace holevo::detail
