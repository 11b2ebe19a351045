#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "holevo/opalg.hpp"

namespace holevo {

enum class ChannelTag {
  kNoiseless,
  kEntanglementBreaking,
  kClassical,
  kTruncated,
  kDirectSumMixture,
  kGeneric,
};

std::string to_string(ChannelTag tag);
ChannelTag channel_tag_from_string(const std::string& name);

inline constexpr double kTracePreservationTol = 1e-9;

/// Completely positive trace-preserving map C^{d_in} -> C^{d_out} in Kraus
/// form. Immutable after construction.
class Channel {
 public:
  /// Throws kInvalidArgument if the Kraus set is empty, has wrong shapes, or
  /// misses trace preservation by more than 1e-9.
  Channel(int d_in, int d_out, std::vector<Matrix> kraus,
          std::set<ChannelTag> tags = {ChannelTag::kGeneric});

  int d_in() const { return d_in_; }
  int d_out() const { return d_out_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  const std::set<ChannelTag>& tags() const { return tags_; }
  bool has_tag(ChannelTag t) const { return tags_.count(t) != 0; }

  DensityOperator apply(const DensityOperator& rho) const;
  /// Linear action on an arbitrary d_in x d_in operator.
  Matrix apply(const Matrix& x) const;
  /// Output of the rank-one input |ψ><ψ|.
  Matrix apply_pure(const Vector& psi) const;
  /// Heisenberg-picture dual Φ*.
  Matrix adjoint(const Matrix& y) const;

  /// max-norm of Σ K†K − I.
  double trace_preservation_residual() const;

  /// Equivalent channel with at most d_in*d_out Kraus operators (Choi
  /// eigendecomposition). Action is unchanged.
  Channel compressed() const;

 private:
  int d_in_;
  int d_out_;
  std::vector<Matrix> kraus_;
  std::set<ChannelTag> tags_;
};

/// Ψ∘Φ; requires outer.d_in == inner.d_out.
Channel compose(const Channel& outer, const Channel& inner);
Channel tensor_channel(const Channel& phi, const Channel& psi);

Channel noiseless(int d);
Channel completely_depolarizing(int d);
/// ρ -> (1−p)ρ + p·I/d.
Channel depolarizing(int d, double p);

/// ρ -> Σ_j Tr(ρ M_j) ρ'_j. The POVM must be PSD and complete within 1e-9.
Channel measure_prepare(std::span<const HermitianOperator> povm,
                        std::span<const DensityOperator> outputs);

/// ρ -> qρ ⊕ (1−q)Φ0(ρ) on C^{d_in} ⊕ C^{Φ0.d_out}.
Channel direct_sum_mixture(double q, const Channel& phi0);

/// Output compression onto the first n basis vectors with the lost weight
/// sent to |n>; d_out of the result is n+1. Requires n < Φ.d_out.
Channel truncate(const Channel& phi, int n);
/// The compression map itself, C^{d} -> C^{n+1}.
Channel truncation_map(int d, int n);

struct ClassicalChannelSpec {
  int n = 1;
  double q = 0.5;
  int N = 2;  ///< input dimension; must satisfy N >= n+1
};

/// Dephasing classical channel x -> ((1−q)Σx, qΣ_{i>n}x, qx_1, ..., qx_n, 0, ...)
/// from C^N to C^{N+1}.
Channel example2_channel(const ClassicalChannelSpec& spec);
/// x -> (Σx, 0, ...) from C^N to C^{N+1}.
Channel example2_limit(int N);

/// Equal action on every matrix unit |i><j| within tol.
bool same_action(const Channel& a, const Channel& b, double tol = 1e-10);

/// max over computational basis inputs of ‖(Φ − Ψ)(|i><i|)‖₁.
double basis_trace_norm_distance(const Channel& phi, const Channel& psi);

}  // namespace holevo
