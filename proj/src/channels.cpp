#include "holevo/channels.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace holevo {

namespace {

const std::map<ChannelTag, std::string>& tag_names() {
  static const std::map<ChannelTag, std::string> names = {
      {ChannelTag::kNoiseless, "noiseless"},
      {ChannelTag::kEntanglementBreaking, "entanglement_breaking"},
      {ChannelTag::kClassical, "classical"},
      {ChannelTag::kTruncated, "truncated"},
      {ChannelTag::kDirectSumMixture, "direct_sum_mixture"},
      {ChannelTag::kGeneric, "generic"},
  };
  return names;
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace

std::string to_string(ChannelTag tag) { return tag_names().at(tag); }

ChannelTag channel_tag_from_string(const std::string& name) {
  for (const auto& [tag, n] : tag_names())
    if (n == name) return tag;
  fail(ErrorCode::kParse, "unknown channel tag '" + name + "'");
}

Channel::Channel(int d_in, int d_out, std::vector<Matrix> kraus, std::set<ChannelTag> tags)
    : d_in_(d_in), d_out_(d_out), kraus_(std::move(kraus)), tags_(std::move(tags)) {
  require(d_in_ >= 1 && d_out_ >= 1, "channel dimensions must be positive");
  require(!kraus_.empty(), "channel needs at least one Kraus operator");
  for (const Matrix& k : kraus_)
    require(k.rows() == d_out_ && k.cols() == d_in_, "Kraus operator has the wrong shape");
  if (tags_.empty()) tags_.insert(ChannelTag::kGeneric);
  double r = trace_preservation_residual();
  if (r > kTracePreservationTol) {
    std::ostringstream os;
    os << "Kraus set is not trace preserving (residual " << r << ")";
    fail(ErrorCode::kInvalidArgument, os.str());
  }
}

double Channel::trace_preservation_residual() const {
  Matrix s = Matrix::Zero(d_in_, d_in_);
  for (const Matrix& k : kraus_) s += k.adjoint() * k;
  return (s - Matrix::Identity(d_in_, d_in_)).cwiseAbs().maxCoeff();
}

Matrix Channel::apply(const Matrix& x) const {
  if (x.rows() != d_in_ || x.cols() != d_in_)
    fail(ErrorCode::kDimensionMismatch, "channel input has the wrong dimension");
  Matrix out = Matrix::Zero(d_out_, d_out_);
  for (const Matrix& k : kraus_) out.noalias() += k * x * k.adjoint();
  return out;
}

Matrix Channel::apply_pure(const Vector& psi) const {
  if (psi.size() != d_in_) fail(ErrorCode::kDimensionMismatch, "channel input has the wrong dimension");
  Matrix out = Matrix::Zero(d_out_, d_out_);
  for (const Matrix& k : kraus_) {
    Vector v = k * psi;
    out.noalias() += v * v.adjoint();
  }
  return out;
}

DensityOperator Channel::apply(const DensityOperator& rho) const {
  Matrix out = apply(rho.matrix());
  return DensityOperator::trusted(0.5 * (out + out.adjoint()));
}

Matrix Channel::adjoint(const Matrix& y) const {
  if (y.rows() != d_out_ || y.cols() != d_out_)
    fail(ErrorCode::kDimensionMismatch, "dual channel input has the wrong dimension");
  Matrix out = Matrix::Zero(d_in_, d_in_);
  for (const Matrix& k : kraus_) out.noalias() += k.adjoint() * y * k;
  return out;
}

Channel Channel::compressed() const {
  const Eigen::Index din = d_in_, dout = d_out_;
  if (static_cast<Eigen::Index>(kraus_.size()) <= din * dout) return *this;
  // Choi vectors vec(K) stacked column-major.
  Matrix choi = Matrix::Zero(din * dout, din * dout);
  for (const Matrix& k : kraus_) {
    Eigen::Map<const Vector> v(k.data(), din * dout);
    choi.noalias() += v * v.adjoint();
  }
  Spectrum s = eigh(choi);
  const double cutoff = 1e-14 * std::max(1.0, s.values.maxCoeff());
  std::vector<Matrix> out;
  for (Eigen::Index i = s.values.size() - 1; i >= 0; --i) {
    if (s.values[i] <= cutoff) break;
    Vector v = std::sqrt(s.values[i]) * s.vectors.col(i);
    out.push_back(Eigen::Map<const Matrix>(v.data(), dout, din));
  }
  return Channel(d_in_, d_out_, std::move(out), tags_);
}

Channel compose(const Channel& outer, const Channel& inner) {
  if (outer.d_in() != inner.d_out())
    fail(ErrorCode::kDimensionMismatch, "compose: outer input dimension differs from inner output dimension");
  std::vector<Matrix> kraus;
  kraus.reserve(outer.kraus().size() * inner.kraus().size());
  for (const Matrix& l : outer.kraus())
    for (const Matrix& k : inner.kraus()) kraus.push_back(l * k);
  std::set<ChannelTag> tags;
  if (outer.has_tag(ChannelTag::kEntanglementBreaking) || inner.has_tag(ChannelTag::kEntanglementBreaking))
    tags.insert(ChannelTag::kEntanglementBreaking);
  if (outer.has_tag(ChannelTag::kNoiseless) && inner.has_tag(ChannelTag::kNoiseless))
    tags.insert(ChannelTag::kNoiseless);
  if (outer.has_tag(ChannelTag::kTruncated)) tags.insert(ChannelTag::kTruncated);
  return Channel(inner.d_in(), outer.d_out(), std::move(kraus), std::move(tags)).compressed();
}

Channel tensor_channel(const Channel& phi, const Channel& psi) {
  std::vector<Matrix> kraus;
  kraus.reserve(phi.kraus().size() * psi.kraus().size());
  for (const Matrix& k : phi.kraus())
    for (const Matrix& l : psi.kraus()) kraus.push_back(kron(k, l));
  std::set<ChannelTag> tags;
  if (phi.has_tag(ChannelTag::kNoiseless) && psi.has_tag(ChannelTag::kNoiseless))
    tags.insert(ChannelTag::kNoiseless);
  return Channel(phi.d_in() * psi.d_in(), phi.d_out() * psi.d_out(), std::move(kraus), std::move(tags))
      .compressed();
}

Channel noiseless(int d) {
  require(d >= 1, "noiseless: dimension must be positive");
  return Channel(d, d, {Matrix::Identity(d, d)}, {ChannelTag::kNoiseless});
}

Channel completely_depolarizing(int d) {
  require(d >= 2, "completely_depolarizing: dimension must be at least 2");
  std::vector<Matrix> kraus;
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Matrix k = Matrix::Zero(d, d);
      k(i, j) = s;
      kraus.push_back(std::move(k));
    }
  return Channel(d, d, std::move(kraus), {ChannelTag::kEntanglementBreaking});
}

Channel depolarizing(int d, double p) {
  require(d >= 2, "depolarizing: dimension must be at least 2");
  require(p >= 0.0 && p <= 1.0, "depolarizing: p must lie in [0,1]");
  std::vector<Matrix> kraus;
  if (p < 1.0) kraus.push_back(std::sqrt(1.0 - p) * Matrix::Identity(d, d));
  if (p > 0.0) {
    const double s = std::sqrt(p / d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Matrix k = Matrix::Zero(d, d);
        k(i, j) = s;
        kraus.push_back(std::move(k));
      }
  }
  std::set<ChannelTag> tags{ChannelTag::kGeneric};
  if (p == 0.0) tags = {ChannelTag::kNoiseless};
  // Depolarizing noise breaks entanglement once p >= d/(d+1).
  else if (p * (d + 1) >= d) tags = {ChannelTag::kEntanglementBreaking};
  return Channel(d, d, std::move(kraus), std::move(tags));
}

Channel measure_prepare(std::span<const HermitianOperator> povm, std::span<const DensityOperator> outputs) {
  require(!povm.empty(), "measure_prepare: empty POVM");
  require(povm.size() == outputs.size(), "measure_prepare: POVM and output lists differ in length");
  const int d_in = povm.front().dim();
  const int d_out = outputs.front().dim();
  Matrix completeness = Matrix::Zero(d_in, d_in);
  std::vector<Matrix> kraus;
  for (std::size_t j = 0; j < povm.size(); ++j) {
    require(povm[j].dim() == d_in, "measure_prepare: POVM elements differ in dimension");
    require(outputs[j].dim() == d_out, "measure_prepare: output states differ in dimension");
    completeness += povm[j].matrix();
    Spectrum m = eigh(povm[j].matrix());
    if (m.values.minCoeff() < -kTracePreservationTol)
      fail(ErrorCode::kInvalidArgument, "measure_prepare: POVM element is not positive");
    Spectrum r = eigh(outputs[j].matrix());
    for (Eigen::Index s = 0; s < m.values.size(); ++s) {
      if (m.values[s] <= 0.0) continue;
      for (Eigen::Index t = 0; t < r.values.size(); ++t) {
        if (r.values[t] <= 0.0) continue;
        kraus.push_back(std::sqrt(m.values[s] * r.values[t]) * r.vectors.col(t) * m.vectors.col(s).adjoint());
      }
    }
  }
  if ((completeness - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff() > kTracePreservationTol)
    fail(ErrorCode::kInvalidArgument, "measure_prepare: POVM elements do not sum to the identity");
  return Channel(d_in, d_out, std::move(kraus), {ChannelTag::kEntanglementBreaking}).compressed();
}

Channel direct_sum_mixture(double q, const Channel& phi0) {
  require(q >= 0.0 && q <= 1.0, "direct_sum_mixture: q must lie in [0,1]");
  const int d = phi0.d_in();
  const int d_out = d + phi0.d_out();
  std::vector<Matrix> kraus;
  if (q > 0.0) {
    Matrix k = Matrix::Zero(d_out, d);
    k.topRows(d) = std::sqrt(q) * Matrix::Identity(d, d);
    kraus.push_back(std::move(k));
  }
  if (q < 1.0) {
    for (const Matrix& k0 : phi0.kraus()) {
      Matrix k = Matrix::Zero(d_out, d);
      k.bottomRows(phi0.d_out()) = std::sqrt(1.0 - q) * k0;
      kraus.push_back(std::move(k));
    }
  }
  return Channel(d, d_out, std::move(kraus), {ChannelTag::kDirectSumMixture});
}

Channel truncation_map(int d, int n) {
  if (n < 1 || n >= d) fail(ErrorCode::kInvalidArgument, "truncation: need 1 <= n < output dimension");
  std::vector<Matrix> kraus;
  Matrix p = Matrix::Zero(n + 1, d);
  for (int i = 0; i < n; ++i) p(i, i) = 1.0;
  kraus.push_back(std::move(p));
  for (int j = n; j < d; ++j) {
    Matrix l = Matrix::Zero(n + 1, d);
    l(n, j) = 1.0;
    kraus.push_back(std::move(l));
  }
  return Channel(d, n + 1, std::move(kraus), {ChannelTag::kTruncated});
}

Channel truncate(const Channel& phi, int n) {
  Channel pi = truncation_map(phi.d_out(), n);
  std::vector<Matrix> kraus;
  for (const Matrix& l : pi.kraus())
    for (const Matrix& k : phi.kraus()) kraus.push_back(l * k);
  return Channel(phi.d_in(), n + 1, std::move(kraus), {ChannelTag::kTruncated}).compressed();
}

namespace {

// Dephase-then-map realization of a column-stochastic matrix T (d_out x d_in).
Channel classical_channel(const Eigen::MatrixXd& t) {
  const int d_out = static_cast<int>(t.rows());
  const int d_in = static_cast<int>(t.cols());
  std::vector<Matrix> kraus;
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_out; ++j) {
      if (t(j, i) <= 0.0) continue;
      Matrix k = Matrix::Zero(d_out, d_in);
      k(j, i) = std::sqrt(t(j, i));
      kraus.push_back(std::move(k));
    }
  return Channel(d_in, d_out, std::move(kraus), {ChannelTag::kClassical, ChannelTag::kEntanglementBreaking});
}

}  // namespace

Channel example2_channel(const ClassicalChannelSpec& spec) {
  require(spec.n >= 1, "example2: n must be positive");
  require(spec.q > 0.0 && spec.q <= 1.0, "example2: q must lie in (0,1]");
  require(spec.N >= spec.n + 1, "example2: need N >= n+1");
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(spec.N + 1, spec.N);
  for (int i = 0; i < spec.N; ++i) {
    t(0, i) = 1.0 - spec.q;
    if (i < spec.n)
      t(2 + i, i) = spec.q;
    else
      t(1, i) = spec.q;
  }
  return classical_channel(t);
}

Channel example2_limit(int N) {
  require(N >= 1, "example2_limit: N must be positive");
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(N + 1, N);
  t.row(0).setOnes();
  return classical_channel(t);
}

bool same_action(const Channel& a, const Channel& b, double tol) {
  if (a.d_in() != b.d_in() || a.d_out() != b.d_out()) return false;
  for (int i = 0; i < a.d_in(); ++i)
    for (int j = 0; j < a.d_in(); ++j) {
      Matrix e = Matrix::Zero(a.d_in(), a.d_in());
      e(i, j) = 1.0;
      if ((a.apply(e) - b.apply(e)).cwiseAbs().maxCoeff() > tol) return false;
    }
  return true;
}

double basis_trace_norm_distance(const Channel& phi, const Channel& psi) {
  if (phi.d_in() != psi.d_in() || phi.d_out() != psi.d_out())
    fail(ErrorCode::kDimensionMismatch, "channels act between different spaces");
  double worst = 0.0;
  for (int i = 0; i < phi.d_in(); ++i) {
    Matrix e = Matrix::Zero(phi.d_in(), phi.d_in());
    e(i, i) = 1.0;
    worst = std::max(worst, trace_norm(phi.apply(e) - psi.apply(e)));
  }
  return worst;
}

}  // namespace holevo
