// holevo-lab: command-line front end over the C API.
//
// Exit codes: 0 success, 1 configuration or input error, 2 when a solve
// misses its tolerance or a verify suite fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "holevo/holevo.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every C call goes through here; failures become configuration errors.
void check(hl_status s, const std::string& context) {
  if (s != HL_OK) throw ConfigError(context + ": " + hl_status_string(s) + ": " + hl_last_error());
}

struct Deleter {
  void operator()(hl_channel* p) const { hl_channel_free(p); }
  void operator()(hl_state* p) const { hl_state_free(p); }
  void operator()(hl_constraint* p) const { hl_constraint_free(p); }
  void operator()(hl_result* p) const { hl_result_free(p); }
  void operator()(char* p) const { hl_string_free(p); }
};
template <class T>
using Owned = std::unique_ptr<T, Deleter>;

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A spec is inline JSON or a path to a JSON file. Paths inside a config
// file are resolved against the config's directory.
std::string spec_text(const json& spec, const fs::path& base) {
  if (!spec.is_string()) return spec.dump();
  const std::string s = spec.get<std::string>();
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (s[first] == '{' || s[first] == '[' || s[first] == '"')) return s;
  if (s == "unconstrained") return "\"unconstrained\"";
  fs::path p(s);
  if (p.is_relative()) p = base / p;
  if (!fs::exists(p)) throw ConfigError("file not found: " + p.string());
  return read_file(p);
}

Owned<hl_channel> load_channel(const json& spec, const fs::path& base) {
  hl_channel* out = nullptr;
  check(hl_channel_from_json(spec_text(spec, base).c_str(), &out), "channel");
  return Owned<hl_channel>(out);
}

Owned<hl_state> load_state(const json& spec, const fs::path& base) {
  hl_state* out = nullptr;
  check(hl_state_from_json(spec_text(spec, base).c_str(), &out), "state");
  return Owned<hl_state>(out);
}

Owned<hl_constraint> load_constraint(const json& spec, const fs::path& base) {
  hl_constraint* out = nullptr;
  check(hl_constraint_from_json(spec_text(spec, base).c_str(), &out), "constraint");
  return Owned<hl_constraint>(out);
}

template <class T>
T setting(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field \"") + key + "\" has the wrong type");
  }
}

const json& required(const json& cfg, const char* key) {
  if (!cfg.contains(key)) throw ConfigError(std::string("missing \"") + key + "\"");
  return cfg.at(key);
}

struct Run {
  json cfg;
  fs::path base;
  hl_options opts{};
  hl_format fmt{};

  void prepare() {
    hl_options_default(&opts);
    opts.tol = setting(cfg, "tol", opts.tol);
    opts.max_iter = setting(cfg, "max_iter", opts.max_iter);
    opts.seed = setting<std::uint64_t>(cfg, "seed", 42);
    opts.multistart = setting(cfg, "multistart", opts.multistart);
    opts.decomposition_starts = setting(cfg, "decomposition_starts", opts.decomposition_starts);
    if (!(opts.tol > 0.0)) throw ConfigError("tol must be positive");
    if (opts.max_iter <= 0) throw ConfigError("max_iter must be positive");
    hl_format_default(&fmt);
    const std::string format = setting<std::string>(cfg, "format", "json");
    if (format == "csv")
      fmt.kind = HL_FORMAT_CSV;
    else if (format != "json")
      throw ConfigError("format must be json or csv");
    fmt.bits = setting(cfg, "bits", false) ? 1 : 0;
    fmt.timing = setting(cfg, "timing", false) ? 1 : 0;
  }

  void emit(const std::string& text) const {
    const std::string body = !text.empty() && text.back() == '\n' ? text : text + "\n";
    const std::string out = setting<std::string>(cfg, "out", "");
    if (out.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream f(out);
    if (!f) throw ConfigError("cannot write " + out);
    f << body;
  }

  static std::string take(char* s) { return std::string(Owned<char>(s).get()); }

  int capacity() {
    auto phi = load_channel(required(cfg, "channel"), base);
    auto c = load_constraint(cfg.value("constraint", json("unconstrained")), base);
    hl_result* raw = nullptr;
    check(hl_capacity(phi.get(), c.get(), &opts, &raw), "capacity");
    Owned<hl_result> r(raw);
    char* text = nullptr;
    check(hl_result_format(r.get(), &fmt, &text), "format");
    std::string report = take(text);
    if (cfg.contains("resolution")) {
      double lo = 0.0, hi = 0.0;
      check(hl_brute_force(phi.get(), c.get(), setting(cfg, "resolution", 0), &lo, &hi), "oracle");
      const double scale = fmt.bits ? 1.0 / std::log(2.0) : 1.0;
      if (fmt.kind == HL_FORMAT_JSON) {
        json j = json::parse(report);
        j["oracle"] = {{"lower", round12(lo * scale)}, {"upper", round12(hi * scale)}};
        report = j.dump(2);
      } else {
        report += "oracle_lower,oracle_upper\n" + num(lo * scale) + "," + num(hi * scale) + "\n";
      }
    }
    emit(report);
    return hl_result_gap(r.get()) <= opts.tol ? 0 : kExitNotConverged;
  }

  int closure(bool chi) {
    auto phi = load_channel(required(cfg, "channel"), base);
    auto rho = load_state(required(cfg, "state"), base);
    double value = 0.0;
    char* text = nullptr;
    check(chi ? hl_chi_function(phi.get(), rho.get(), &opts, &fmt, &value, &text)
              : hl_hhat(phi.get(), rho.get(), &opts, &fmt, &value, &text),
          chi ? "chi" : "hhat");
    emit(take(text));
    return 0;
  }

  int additivity() {
    const json& chans = required(cfg, "channels");
    if (!chans.is_array() || chans.size() != 2) throw ConfigError("additivity needs exactly two channels");
    json cons = cfg.value("constraints", json::array({"unconstrained", "unconstrained"}));
    if (!cons.is_array() || cons.size() != 2) throw ConfigError("additivity needs zero or two constraints");
    auto phi = load_channel(chans[0], base), psi = load_channel(chans[1], base);
    auto a = load_constraint(cons[0], base), b = load_constraint(cons[1], base);
    double gap = 0.0;
    int converged = 0;
    char* text = nullptr;
    check(hl_additivity(phi.get(), a.get(), psi.get(), b.get(), &opts, &fmt, &gap, &converged, &text), "additivity");
    emit(take(text));
    return converged ? 0 : kExitNotConverged;
  }

  int discontinuity() {
    const std::vector<int> ns = setting(cfg, "n", std::vector<int>{1, 3, 7, 15, 31});
    const double target = setting(cfg, "c_target", 0.3);
    if (!(target > 0.0)) throw ConfigError("c_target must be positive");
    int converged = 0;
    char* text = nullptr;
    check(hl_discontinuity(ns.data(), ns.size(), target, &opts, &fmt, &converged, &text), "discontinuity");
    emit(take(text));
    return converged ? 0 : kExitNotConverged;
  }

  int verify() {
    const std::string suite = setting<std::string>(cfg, "suite", "all");
    int passed = 0;
    char* text = nullptr;
    check(hl_verify(suite.c_str(), opts.seed, setting(cfg, "cases", 1000), &fmt, &passed, &text), "verify");
    emit(take(text));
    return passed ? 0 : kExitNotConverged;
  }

  int dispatch(const std::string& command) {
    prepare();
    if (command == "capacity") return capacity();
    if (command == "chi") return closure(true);
    if (command == "hhat") return closure(false);
    if (command == "additivity") return additivity();
    if (command == "discontinuity") return discontinuity();
    if (command == "verify") return verify();
    throw ConfigError("unknown command \"" + command + "\"");
  }

  static double round12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
  }
  static std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }
};

// Flags given on the command line override the config file.
struct Flags {
  std::string config;
  std::vector<std::string> channels, constraints;
  std::string state, out, format, suite;
  double tol = 0.0, c_target = 0.0;
  int max_iter = 0, resolution = 0, cases = 0;
  std::uint64_t seed = 0;
  std::vector<int> n;
  bool bits = false, timing = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON experiment config");
  sub->add_option("--tol", f.tol, "target certificate gap (nats)");
  sub->add_option("--max-iter", f.max_iter, "iteration cap");
  sub->add_option("--seed", f.seed, "random seed (default 42)");
  sub->add_option("--out", f.out, "output file (default stdout)");
  sub->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--bits", f.bits, "report entropic quantities in bits");
  sub->add_flag("--timing", f.timing, "include wall-clock time");
}

json overlay(const CLI::App* sub, const Flags& f) {
  json cfg = json::object();
  auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
  if (given("--tol")) cfg["tol"] = f.tol;
  if (given("--max-iter")) cfg["max_iter"] = f.max_iter;
  if (given("--seed")) cfg["seed"] = f.seed;
  if (given("--out")) cfg["out"] = f.out;
  if (given("--format")) cfg["format"] = f.format;
  if (f.bits) cfg["bits"] = true;
  if (f.timing) cfg["timing"] = true;
  if (given("--resolution")) cfg["resolution"] = f.resolution;
  if (given("--state")) cfg["state"] = f.state;
  if (given("--suite")) cfg["suite"] = f.suite;
  if (given("--cases")) cfg["cases"] = f.cases;
  if (given("--n")) cfg["n"] = f.n;
  if (given("--c-target")) cfg["c_target"] = f.c_target;
  if (given("--channel")) {
    if (f.channels.size() == 1)
      cfg["channel"] = f.channels[0];
    else
      cfg["channels"] = f.channels;
  }
  if (given("--constraint")) {
    if (f.constraints.size() == 1)
      cfg["constraint"] = f.constraints[0];
    else
      cfg["constraints"] = f.constraints;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holevo capacity lab"};
  app.require_subcommand(0, 1);
  Flags f;
  std::string top_config;
  app.add_option("--config", top_config, "JSON experiment config naming its command");

  auto* cap = app.add_subcommand("capacity", "constrained chi-capacity with two-sided bounds");
  add_common(cap, f);
  cap->add_option("--channel", f.channels, "channel JSON or file")->expected(1);
  cap->add_option("--constraint", f.constraints, "constraint JSON or file")->expected(1);
  cap->add_option("--resolution", f.resolution, "also run the qubit grid oracle at this resolution");

  auto* chi = app.add_subcommand("chi", "chi-function at a state");
  auto* hhat = app.add_subcommand("hhat", "convex closure of the output entropy at a state");
  for (auto* sub : {chi, hhat}) {
    add_common(sub, f);
    sub->add_option("--channel", f.channels, "channel JSON or file")->expected(1);
    sub->add_option("--state", f.state, "state JSON or file");
  }

  auto* add = app.add_subcommand("additivity", "compare joint and single-channel capacities");
  add_common(add, f);
  add->add_option("--channel", f.channels, "two channels (repeat the flag)")->expected(2);
  add->add_option("--constraint", f.constraints, "two constraints (repeat the flag)")->expected(2);

  auto* disc = app.add_subcommand("discontinuity", "capacity of the classical channel family at q(n) = C/log(n+1)");
  add_common(disc, f);
  disc->add_option("--n", f.n, "values of n")->delimiter(',');
  disc->add_option("--c-target", f.c_target, "target capacity C (nats)");

  auto* ver = app.add_subcommand("verify", "run the invariant suites");
  add_common(ver, f);
  ver->add_option("--suite", f.suite, "suite name or all");
  ver->add_option("--cases", f.cases, "random cases per suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    Run run;
    std::string command;
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    std::string config_path = top_config;
    if (sub != nullptr) {
      command = sub->get_name();
      if (!f.config.empty()) config_path = f.config;
    }
    if (!config_path.empty()) {
      try {
        run.cfg = json::parse(read_file(config_path));
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      if (!run.cfg.is_object()) throw ConfigError("config must be a JSON object");
      run.base = fs::path(config_path).parent_path();
      if (command.empty()) command = setting<std::string>(run.cfg, "command", "");
    }
    if (command.empty()) {
      std::cerr << app.help();
      return kExitConfig;
    }
    if (sub != nullptr) run.cfg.update(overlay(sub, f));
    if (run.base.empty()) run.base = fs::current_path();
    return run.dispatch(command);
  } catch (const ConfigError& e) {
    std::cerr << "holevo-lab: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "holevo-lab: " << e.what() << '\n';
    return kExitConfig;
  }
}
