#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(HOLEVO_LAB_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  Outcome o;
  if (!p) return o;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) o.out.append(buf, n);
  const int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("holevo_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
    return p;
  }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
};

const char* kQubit = R"('{"kind":"depolarizing","d":2,"p":0.5}')";

}  // namespace

TEST(Cli, CapacityJson) {
  const Outcome o = run(std::string("capacity --channel ") + kQubit);
  ASSERT_EQ(o.code, 0);
  const json j = json::parse(o.out);
  EXPECT_NEAR(j["value"].get<double>(), 0.130812035941, 1e-9);
  EXPECT_EQ(j["units"], "nats");
  EXPECT_FALSE(j.contains("wall_time_s"));
}

TEST(Cli, OutputIsByteStable) {
  const std::string args = R"(capacity --channel '{"kind":"random","d_in":3,"d_out":3,"rank":2,"seed":5}')";
  const Outcome a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const Outcome t = run(args + " --seed 42");
  EXPECT_EQ(a.out, t.out);
}

TEST(Cli, BitsTimingAndCsv) {
  const Outcome bits = run(R"(capacity --channel '{"kind":"noiseless","d":2}' --bits --timing)");
  ASSERT_EQ(bits.code, 0);
  const json j = json::parse(bits.out);
  EXPECT_NEAR(j["value"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(j["units"], "bits");
  EXPECT_TRUE(j.contains("wall_time_s"));

  const Outcome csv = run(R"(capacity --channel '{"kind":"noiseless","d":2}' --format csv)");
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("value,lower_bound,upper_bound,gap,certified,converged,iterations\n", 0), 0u);
}

TEST(Cli, OracleBracketIsAttached) {
  const Outcome o = run(std::string("capacity --channel ") + kQubit + " --resolution 16");
  ASSERT_EQ(o.code, 0);
  const json j = json::parse(o.out);
  EXPECT_LE(j["oracle"]["lower"].get<double>(), j["value"].get<double>() + 1e-9);
  EXPECT_GE(j["oracle"]["upper"].get<double>(), j["value"].get<double>() - 1e-9);
}

TEST(Cli, ConstrainedCapacity) {
  const Outcome o = run(R"(capacity --channel '{"kind":"noiseless","d":2}' )"
                        R"(--constraint '{"kind":"expectation","observable":[[0,0],[0,1]],"bound":0.25}')");
  ASSERT_EQ(o.code, 0);
  // h₂(0.25).
  EXPECT_NEAR(json::parse(o.out)["value"].get<double>(), 0.562335144619, 1e-6);
}

TEST(Cli, ChiAndHhat) {
  const Outcome chi = run(std::string("chi --channel ") + kQubit + R"( --state '{"kind":"maximally_mixed","d":2}')");
  const Outcome hhat = run(std::string("hhat --channel ") + kQubit + R"( --state '{"kind":"maximally_mixed","d":2}')");
  ASSERT_EQ(chi.code, 0);
  ASSERT_EQ(hhat.code, 0);
  EXPECT_NEAR(json::parse(chi.out)["value"].get<double>() + json::parse(hhat.out)["value"].get<double>(),
              std::log(2.0), 1e-8);
}

TEST(Cli, AdditivityDiscontinuityVerify) {
  const Outcome add = run(R"(additivity --channel '{"kind":"noiseless","d":2}' --channel )" + std::string(kQubit));
  ASSERT_EQ(add.code, 0);
  EXPECT_LE(std::abs(json::parse(add.out)["additivity_gap"].get<double>()), 2e-3);

  const Outcome disc = run("discontinuity --n 1,3 --format csv");
  ASSERT_EQ(disc.code, 0);
  EXPECT_EQ(disc.out.rfind("n,q,norm_distance,norm_bound,capacity,gap\n1,", 0), 0u);

  const Outcome ver = run("verify --suite pinsker --cases 20");
  ASSERT_EQ(ver.code, 0);
  EXPECT_EQ(json::parse(ver.out)["pass"], true);
}

TEST(Cli, ConfigFileWithRelativePaths) {
  Scratch s;
  s.write("chan/dep.json", R"({"kind":"depolarizing","d":2,"p":0.5})");
  const fs::path cfg = s.write("run.json", R"({"command":"capacity","channel":"chan/dep.json","format":"csv"})");
  const Outcome o = run("--config " + cfg.string());
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(o.out.rfind("value,", 0), 0u);
  // Flags override the file.
  const Outcome j = run("capacity --config " + cfg.string() + " --format json");
  ASSERT_EQ(j.code, 0);
  EXPECT_NEAR(json::parse(j.out)["value"].get<double>(), 0.130812035941, 1e-9);
}

TEST(Cli, OutFlagWritesFile) {
  Scratch s;
  const fs::path out = s.dir() / "result.json";
  const Outcome o = run(std::string("capacity --channel ") + kQubit + " --out " + out.string());
  ASSERT_EQ(o.code, 0);
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(out);
  json j;
  in >> j;
  EXPECT_TRUE(j.contains("value"));
}

TEST(Cli, ConfigurationErrorsExitOne) {
  Scratch s;
  EXPECT_EQ(run("capacity --channel /nonexistent/channel.json").code, 1);
  EXPECT_EQ(run("capacity --channel '{broken'").code, 1);
  EXPECT_EQ(run("capacity").code, 1);
  EXPECT_EQ(run("--config " + (s.dir() / "missing.json").string()).code, 1);
  EXPECT_EQ(run("--config " + s.write("bad.json", "{").string()).code, 1);
  EXPECT_EQ(run("--config " + s.write("nocmd.json", "{}").string()).code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run(std::string("capacity --channel ") + kQubit + " --format xml").code, 1);
  EXPECT_EQ(run(std::string("capacity --channel ") + kQubit + " --tol -1").code, 1);
  EXPECT_EQ(run("verify --suite nonsense --cases 5").code, 1);
  EXPECT_EQ(run("discontinuity --n 1 --c-target 5").code, 1);
}

TEST(Cli, MissedToleranceExitsTwo) {
  const Outcome o = run(R"(capacity --channel '{"kind":"random","d_in":3,"d_out":3,"rank":2,"seed":5}' --max-iter 1)");
  EXPECT_EQ(o.code, 2);
  const json j = json::parse(o.out);
  EXPECT_EQ(j["converged"], false);
  EXPECT_GT(j["gap"].get<double>(), 1e-6);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").code, 0); }
