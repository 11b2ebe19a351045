#pragma once

#include <cstdint>
#include <random>

#include "holevo/channels.hpp"
#include "holevo/ensembles.hpp"
#include "holevo/opalg.hpp"

namespace holevo {

/// Seeded generator. Normals come from Box–Muller over mt19937_64 so draws
/// are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  ///< [0, 1)
  double normal();
  cplx complex_normal();
  std::uint64_t next() { return engine_(); }
  /// Independent stream for case `index` of a seeded suite.
  static Rng derive(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

Vector random_unit_vector(int d, Rng& rng);
/// Ginibre-distributed state of the given rank (full rank when rank <= 0).
DensityOperator random_density(int d, Rng& rng, int rank = 0);
DensityOperator random_pure(int d, Rng& rng);
/// Kraus operators from a Haar-like random isometry C^{d_in} -> C^{rank*d_out}.
Channel random_channel(int d_in, int d_out, int kraus_rank, Rng& rng);
Ensemble random_ensemble(int d, int size, Rng& rng, int rank = 0);

}  // namespace holevo
