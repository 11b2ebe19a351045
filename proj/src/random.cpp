#include "holevo/random.hpp"

#include <cmath>
#include <numbers>

namespace holevo {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

Rng Rng::derive(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return Rng(z ^ (z >> 31));
}

Vector random_unit_vector(int d, Rng& rng) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.complex_normal();
  return v / v.norm();
}

DensityOperator random_density(int d, Rng& rng, int rank) {
  if (rank <= 0 || rank > d) rank = d;
  Matrix g(d, rank);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = rng.complex_normal();
  Matrix rho = g * g.adjoint();
  return DensityOperator::trusted(rho / rho.trace().real());
}

DensityOperator random_pure(int d, Rng& rng) { return DensityOperator::pure(random_unit_vector(d, rng)); }

Channel random_channel(int d_in, int d_out, int kraus_rank, Rng& rng) {
  if (kraus_rank < 1) fail(ErrorCode::kInvalidArgument, "random_channel: Kraus rank must be positive");
  const int rows = kraus_rank * d_out;
  if (rows < d_in) fail(ErrorCode::kInvalidArgument, "random_channel: need kraus_rank*d_out >= d_in");
  Matrix g(rows, d_in);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < d_in; ++j) g(i, j) = rng.complex_normal();
  // Isometry V = G (G†G)^{-1/2}.
  Matrix gg = g.adjoint() * g;
  Spectrum s = eigh(gg);
  Matrix v = g * spectral_apply(s, [](double l) { return l > 1e-14 ? 1.0 / std::sqrt(l) : 0.0; });
  std::vector<Matrix> kraus;
  for (int k = 0; k < kraus_rank; ++k) kraus.push_back(v.block(k * d_out, 0, d_out, d_in));
  return Channel(d_in, d_out, std::move(kraus));
}

Ensemble random_ensemble(int d, int size, Rng& rng, int rank) {
  std::vector<double> w(size);
  double total = 0.0;
  for (auto& x : w) {
    x = -std::log(1.0 - rng.uniform());  // Dirichlet(1,...,1)
    total += x;
  }
  std::vector<EnsembleItem> items;
  for (int i = 0; i < size; ++i) items.push_back({w[i] / total, random_density(d, rng, rank)});
  return Ensemble(std::move(items));
}

}  // namespace holevo
