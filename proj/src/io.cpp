#include "holevo/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "holevo/random.hpp"
#include "json.hpp"

namespace holevo {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { fail(ErrorCode::kParse, what); }

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
  const json& v = field(j, key);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    parse_error(std::string("field \"") + key + "\" has the wrong type");
  }
}

cplx entry(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  parse_error("matrix entries must be numbers or [re, im] pairs");
}

Matrix matrix(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) parse_error("matrix must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size()), cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) parse_error("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entry(j[r][c]);
  }
  return m;
}

Vector vector(const json& j) {
  if (!j.is_array() || j.empty()) parse_error("vector must be a non-empty list");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = entry(j[i]);
  return v;
}

DensityOperator state(const json& j) {
  if (j.is_array()) return DensityOperator(matrix(j));
  const std::string kind = get<std::string>(j, "kind");
  if (kind == "maximally_mixed") return DensityOperator::maximally_mixed(get<int>(j, "d"));
  if (kind == "basis") return DensityOperator::basis(get<int>(j, "d"), get<int>(j, "i"));
  if (kind == "pure") return DensityOperator::pure(vector(field(j, "vector")));
  if (kind == "matrix") return DensityOperator(matrix(field(j, "matrix")));
  parse_error("unknown state kind \"" + kind + "\"");
}

Channel channel(const json& j) {
  if (!j.is_object()) parse_error("channel spec must be an object");
  if (!j.contains("kind")) {
    const int d_in = get<int>(j, "d_in"), d_out = get<int>(j, "d_out");
    const json& ks = field(j, "kraus");
    if (!ks.is_array() || ks.empty()) parse_error("\"kraus\" must be a non-empty list");
    std::vector<Matrix> kraus;
    for (const json& k : ks) kraus.push_back(matrix(k));
    std::set<ChannelTag> tags;
    if (j.contains("tags"))
      for (const json& t : j.at("tags")) {
        if (!t.is_string()) parse_error("tags must be strings");
        tags.insert(channel_tag_from_string(t.get<std::string>()));
      }
    return Channel(d_in, d_out, std::move(kraus), std::move(tags));
  }
  const std::string kind = get<std::string>(j, "kind");
  if (kind == "noiseless") return noiseless(get<int>(j, "d"));
  if (kind == "completely_depolarizing") return completely_depolarizing(get<int>(j, "d"));
  if (kind == "depolarizing") return depolarizing(get<int>(j, "d"), get<double>(j, "p"));
  if (kind == "example2") return example2_channel({get<int>(j, "n"), get<double>(j, "q"), get<int>(j, "N")});
  if (kind == "example2_limit") return example2_limit(get<int>(j, "N"));
  if (kind == "measure_prepare") {
    std::vector<HermitianOperator> povm;
    std::vector<DensityOperator> states;
    for (const json& m : field(j, "povm")) povm.emplace_back(matrix(m));
    for (const json& s : field(j, "states")) states.push_back(state(s));
    return measure_prepare(povm, states);
  }
  if (kind == "direct_sum_mixture") return direct_sum_mixture(get<double>(j, "q"), channel(field(j, "channel")));
  if (kind == "truncate") return truncate(channel(field(j, "channel")), get<int>(j, "n"));
  if (kind == "compose") return compose(channel(field(j, "outer")), channel(field(j, "inner")));
  if (kind == "tensor") return tensor_channel(channel(field(j, "left")), channel(field(j, "right")));
  if (kind == "random") {
    Rng rng(j.value("seed", std::uint64_t{42}));
    return random_channel(get<int>(j, "d_in"), get<int>(j, "d_out"), j.value("rank", 2), rng);
  }
  parse_error("unknown channel kind \"" + kind + "\"");
}

double number(double v) { return round12(v); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({number(m(r, c).real()), number(m(r, c).imag())});
    rows.push_back(row);
  }
  return rows;
}

json ensemble_json(const Ensemble& e) {
  json items = json::array();
  for (const auto& it : e.items()) items.push_back({{"weight", number(it.weight)}, {"state", matrix_json(it.state.matrix())}});
  return {{"items", items}};
}

double scale(const OutputFormat& f) { return f.bits ? 1.0 / std::log(2.0) : 1.0; }

json header(const OutputFormat& f) {
  json j;
  j["units"] = f.bits ? "bits" : "nats";
  if (f.wall_time) j["wall_time_s"] = number(*f.wall_time);
  return j;
}

json closure_json(const ConvexClosureResult& r, double s) {
  return {{"value", number(r.value * s)},
          {"spread", number(r.spread * s)},
          {"agreeing_starts", r.agreeing_starts},
          {"decomposition", ensemble_json(r.decomposition)}};
}

json capacity_json(const CapacityResult& r, double s) {
  return {{"value", number(r.value * s)},
          {"lower_bound", number(r.lower_bound * s)},
          {"upper_bound", std::isinf(r.upper_bound) ? json("inf") : json(number(r.upper_bound * s))},
          {"gap", std::isinf(r.gap) ? json("inf") : json(number(r.gap * s))},
          {"certified", r.certified},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"witness", ensemble_json(r.witness)},
          {"omega", matrix_json(r.omega.matrix())}};
}

}  // namespace

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double out = std::strtod(buf, nullptr);
  return out == 0.0 ? 0.0 : out;  // no negative zero in output
}

Channel channel_from_json(std::string_view text) { return channel(parse(text)); }
DensityOperator state_from_json(std::string_view text) { return state(parse(text)); }

Ensemble ensemble_from_json(std::string_view text) {
  const json j = parse(text);
  const json& items = field(j, "items");
  if (!items.is_array()) parse_error("\"items\" must be a list");
  std::vector<EnsembleItem> out;
  for (const json& it : items) out.push_back({get<double>(it, "weight"), state(field(it, "state"))});
  return Ensemble(std::move(out));
}

ConstraintSet constraint_from_json(std::string_view text) {
  const json j = parse(text);
  const std::string kind = j.is_string() ? j.get<std::string>() : get<std::string>(j, "kind");
  if (kind == "unconstrained") return ConstraintSet::unconstrained();
  if (kind == "singleton") return ConstraintSet::singleton(state(field(j, "state")));
  if (kind == "expectation")
    return ConstraintSet::expectation_bound(HermitianOperator(matrix(field(j, "observable"))), get<double>(j, "bound"));
  parse_error("unknown constraint kind \"" + kind + "\"");
}

std::string channel_to_json(const Channel& phi) {
  json kraus = json::array();
  for (const Matrix& k : phi.kraus()) kraus.push_back(matrix_json(k));
  json tags = json::array();
  for (ChannelTag t : phi.tags()) tags.push_back(to_string(t));
  return json{{"d_in", phi.d_in()}, {"d_out", phi.d_out()}, {"kraus", kraus}, {"tags", tags}}.dump(2);
}

std::string ensemble_to_json(const Ensemble& e) { return ensemble_json(e).dump(2); }

std::string to_json(const CapacityResult& r, const OutputFormat& f) {
  json j = header(f);
  j.update(capacity_json(r, scale(f)));
  return j.dump(2);
}

std::string to_json(const ChiFunctionResult& r, const OutputFormat& f) {
  json j = header(f);
  j["value"] = number(r.value * scale(f));
  j["closure"] = closure_json(r.closure, scale(f));
  return j.dump(2);
}

std::string to_json(const ConvexClosureResult& r, const OutputFormat& f) {
  json j = header(f);
  j.update(closure_json(r, scale(f)));
  return j.dump(2);
}

std::string to_json(const AdditivityReport& r, const OutputFormat& f) {
  const double s = scale(f);
  json j = header(f);
  j["label"] = r.label;
  j["joint"] = capacity_json(r.lhs, s);
  j["left"] = capacity_json(r.rhs_left, s);
  j["right"] = capacity_json(r.rhs_right, s);
  j["additivity_gap"] = number(r.gap * s);
  j["omega_residual"] = number(r.omega_product_residual);
  j["cauchy_bound"] = number(r.cauchy_bound);
  return j.dump(2);
}

std::string to_json(const std::vector<DiscontinuityRow>& rows, const OutputFormat& f) {
  const double s = scale(f);
  json j = header(f);
  json list = json::array();
  for (const auto& r : rows)
    list.push_back({{"n", r.n},
                    {"q", number(r.q)},
                    {"norm_distance", number(r.norm_distance)},
                    {"norm_bound", number(r.norm_bound)},
                    {"capacity", number(r.capacity * s)},
                    {"gap", number(r.gap * s)}});
  j["rows"] = list;
  return j.dump(2);
}

std::string to_json(const std::vector<SuiteResult>& suites, const OutputFormat& f) {
  json j = header(f);
  json list = json::array();
  bool all = true;
  for (const auto& r : suites) {
    all = all && r.ok();
    list.push_back({{"name", r.name},
                    {"cases", r.cases},
                    {"passed", r.passed},
                    {"max_residual", std::isinf(r.max_residual) ? json("inf") : json(number(r.max_residual))},
                    {"tol", number(r.tol)},
                    {"pass", r.ok()}});
  }
  j["suites"] = list;
  j["pass"] = all;
  return j.dump(2);
}

}  // namespace holevo
