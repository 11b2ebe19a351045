// Ĥ_Φ(ρ) by descent over decompositions. Every length-m pure decomposition
// of ρ = A A† (A = eigenvectors scaled by sqrt of eigenvalues, rank r) is
// ψ̃_i = A v_i with v_i the rows of an m x r isometry V, so the search runs
// on the complex Stiefel manifold.

#include <algorithm>
#include <cmath>
#include <limits>

#include "holevo/capacity.hpp"
#include "holevo/random.hpp"
#include "parallel.hpp"
#include "pure_state_search.hpp"

namespace holevo {

namespace {

struct Factor {
  Matrix a;  // d x r
  Matrix a_pinv;  // r x d
};

Factor factorize(const DensityOperator& rho) {
  Spectrum s = eigh(rho.matrix());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < s.values.size(); ++i)
    if (s.values[i] > kRankTol) keep.push_back(i);
  Matrix a(rho.dim(), static_cast<Eigen::Index>(keep.size()));
  Matrix a_pinv(static_cast<Eigen::Index>(keep.size()), rho.dim());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const double l = s.values[keep[k]];
    a.col(k) = std::sqrt(l) * s.vectors.col(keep[k]);
    a_pinv.row(k) = s.vectors.col(keep[k]).adjoint() / std::sqrt(l);
  }
  return {a, a_pinv};
}

Matrix polar(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

class ClosureObjective {
 public:
  ClosureObjective(const Channel& phi, const Factor& f) : phi_(phi), f_(f) {}

  // Σ_i π_i H(σ_i/π_i) with σ_i = Φ(ψ̃_i ψ̃_i†).
  double value(const Matrix& v) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      Vector psi = f_.a * v.row(i).transpose();
      const double w = psi.squaredNorm();
      if (w <= 0.0) continue;
      total += w * entropy_of(phi_.apply_pure(psi) / w);
    }
    return total;
  }

  // Euclidean gradient with respect to V under Re tr(Z† dV).
  Matrix gradient(const Matrix& v) const {
    Matrix z = Matrix::Zero(v.rows(), v.cols());
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      Vector psi = f_.a * v.row(i).transpose();
      const double w = psi.squaredNorm();
      if (w <= 1e-300) continue;
      Matrix sigma = phi_.apply_pure(psi);
      Matrix m = -(detail::floored_log(sigma) - std::log(w) * Matrix::Identity(sigma.rows(), sigma.cols()));
      Vector g = 2.0 * f_.a.adjoint() * phi_.adjoint(m) * psi;
      z.row(i) = g.transpose();
    }
    return z;
  }

 private:
  const Channel& phi_;
  const Factor& f_;
};

Matrix tangent(const Matrix& v, const Matrix& z) {
  Matrix vz = v.adjoint() * z;
  return z - v * (0.5 * (vz + vz.adjoint()));
}

struct Run {
  Matrix v;
  double value = std::numeric_limits<double>::infinity();
};

Run descend(const ClosureObjective& obj, Matrix v, int max_iter) {
  double f = obj.value(v);
  double step = 1.0;
  Matrix prev_v, prev_g;
  int stall = 0;
  for (int it = 0; it < max_iter; ++it) {
    Matrix g = tangent(v, obj.gradient(v));
    const double gn2 = g.squaredNorm();
    if (gn2 < 1e-24) break;
    if (prev_v.size() != 0) {
      // Barzilai–Borwein initial step.
      Matrix s = v - prev_v;
      Matrix y = g - prev_g;
      const double sy = std::abs(s.cwiseProduct(y.conjugate()).sum().real());
      if (sy > 1e-300) step = std::clamp(s.squaredNorm() / sy, 1e-8, 1e4);
    }
    bool moved = false;
    for (int k = 0; k < 50; ++k) {
      Matrix trial = polar(Matrix(v - step * g));
      const double ft = obj.value(trial);
      if (ft <= f - 1e-4 * step * gn2) {
        prev_v = v;
        prev_g = g;
        const double gain = f - ft;
        v = trial;
        f = ft;
        moved = true;
        stall = gain < 1e-15 ? stall + 1 : 0;
        break;
      }
      step *= 0.5;
    }
    if (!moved || stall >= 3) break;
  }
  return {v, f};
}

// Rows of V for a seed decomposition: v_i = (A⁺ ψ̃_i)ᵀ.
std::optional<Matrix> seed_isometry(const Ensemble& seed, const Factor& f, int d) {
  if (seed.dim() != d) return std::nullopt;
  Ensemble pure = refine_to_pure(seed);
  Matrix v(static_cast<Eigen::Index>(pure.size()), f.a.cols());
  for (std::size_t i = 0; i < pure.size(); ++i) {
    Spectrum s = eigh(pure[i].state.matrix());
    Vector psi = std::sqrt(pure[i].weight) * s.vectors.col(s.values.size() - 1);
    v.row(static_cast<Eigen::Index>(i)) = (f.a_pinv * psi).transpose();
  }
  if (v.rows() < v.cols()) return std::nullopt;
  return polar(v);
}

Ensemble to_ensemble(const Matrix& v, const Factor& f) {
  std::vector<EnsembleItem> items;
  double total = 0.0;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    Vector psi = f.a * v.row(i).transpose();
    const double w = psi.squaredNorm();
    if (w <= 1e-300) continue;
    total += w;
    items.push_back({w, DensityOperator::pure(psi)});
  }
  for (auto& it : items) it.weight /= total;
  return Ensemble(std::move(items));
}

}  // namespace

Ensemble refine_to_pure(const Ensemble& e) {
  std::vector<EnsembleItem> items;
  for (const auto& it : e.items()) {
    Spectrum s = eigh(it.state.matrix());
    for (Eigen::Index k = 0; k < s.values.size(); ++k) {
      if (s.values[k] <= kRankTol) continue;
      items.push_back({it.weight * s.values[k], DensityOperator::pure(s.vectors.col(k))});
    }
  }
  double total = 0.0;
  for (const auto& it : items) total += it.weight;
  for (auto& it : items) it.weight /= total;
  return Ensemble(std::move(items));
}

ConvexClosureResult convex_closure_output_entropy(const Channel& phi, const DensityOperator& rho,
                                                  const DecompositionOptions& opts) {
  if (rho.dim() != phi.d_in()) fail(ErrorCode::kDimensionMismatch, "state does not match channel input");
  const Factor f = factorize(rho);
  const int r = static_cast<int>(f.a.cols());
  const int m = std::max(r, opts.size > 0 ? opts.size : phi.d_in() * phi.d_in());
  ClosureObjective obj(phi, f);

  std::vector<Matrix> starts;
  for (const Ensemble& s : opts.seeds)
    if (auto v = seed_isometry(s, f, rho.dim())) starts.push_back(*v);
  {
    // Spectral decomposition first, then seeded random isometries.
    Matrix v = Matrix::Zero(m, r);
    v.topRows(r) = Matrix::Identity(r, r);
    starts.push_back(v);
    Rng rng(opts.seed);
    for (int s = 1; s < opts.starts; ++s) {
      Matrix g(m, r);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) g(i, j) = rng.complex_normal();
      starts.push_back(polar(g));
    }
  }

  std::vector<Run> runs(starts.size());
  detail::parallel_for(starts.size(), [&](std::size_t i) { runs[i] = descend(obj, starts[i], opts.max_iter); });

  std::size_t best = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].value < runs[best].value) best = i;
    worst = std::max(worst, runs[i].value);
  }
  int agreeing = 0;
  for (const Run& run : runs)
    if (run.value <= runs[best].value + 1e-8) ++agreeing;
  return {runs[best].value, worst - runs[best].value, agreeing, to_ensemble(runs[best].v, f)};
}

ChiFunctionResult chi_function_detailed(const Channel& phi, const DensityOperator& rho,
                                        const DecompositionOptions& opts) {
  ConvexClosureResult closure = convex_closure_output_entropy(phi, rho, opts);
  const double value = entropy_of(phi.apply(rho.matrix())) - closure.value;
  return {value, std::move(closure)};
}

double chi_function(const Channel& phi, const DensityOperator& rho, const DecompositionOptions& opts) {
  return chi_function_detailed(phi, rho, opts).value;
}

}  // namespace holevo
