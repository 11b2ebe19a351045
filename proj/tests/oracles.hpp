#pragma once

// Reference computations that avoid the library's own code paths: matrix
// logarithms through Eigen's Schur–Parlett routine, classical channel
// capacities through textbook Blahut–Arimoto on probability vectors.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXcd;

inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

/// Tr ρ(log ρ − log σ) for full-rank arguments.
inline double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  const Matrix lr = rho.log(), ls = sigma.log();
  return (rho * (lr - ls)).trace().real();
}

inline double entropy(const Matrix& rho) { return -(rho * rho.log()).trace().real(); }

/// Bloch-vector formula for a qubit state.
inline double qubit_entropy(const Matrix& rho) {
  const double x = 2.0 * rho(0, 1).real(), y = -2.0 * rho(0, 1).imag(), z = (rho(0, 0) - rho(1, 1)).real();
  const double r = std::sqrt(x * x + y * y + z * z);
  return h2((1.0 + r) / 2.0);
}

/// Capacity of a classical channel with transition rows w[x][y].
inline double classical_capacity(const std::vector<std::vector<double>>& w, int iters = 200000) {
  const std::size_t nx = w.size(), ny = w[0].size();
  std::vector<double> p(nx, 1.0 / nx);
  double lower = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> q(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * w[x][y];
    std::vector<double> c(nx, 0.0);
    double mean = 0.0, top = -1e300;
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y)
        if (w[x][y] > 0.0) c[x] += w[x][y] * std::log(w[x][y] / q[y]);
      mean += p[x] * c[x];
      top = std::max(top, c[x]);
    }
    lower = mean;
    if (top - mean < 1e-12) break;
    double z = 0.0;
    for (std::size_t x = 0; x < nx; ++x) z += (p[x] *= std::exp(c[x]));
    for (double& v : p) v /= z;
  }
  return lower;
}

}  // namespace oracle
