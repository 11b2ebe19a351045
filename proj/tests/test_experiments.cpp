#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "holevo/experiments.hpp"

using namespace holevo;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST(Discontinuity, CapacityStaysAtTargetWhileDistanceShrinks) {
  const std::vector<DiscontinuityRow> rows = discontinuity_rows({1, 3, 7}, 0.3);
  ASSERT_EQ(rows.size(), 3u);
  double prev = std::numeric_limits<double>::infinity();
  for (const DiscontinuityRow& r : rows) {
    EXPECT_NEAR(r.q, 0.3 / std::log(r.n + 1.0), 1e-15);
    EXPECT_NEAR(r.capacity, 0.3, 1e-4);
    EXPECT_LE(r.gap, 1e-6);
    EXPECT_NEAR(r.norm_distance, 2.0 * r.q, 1e-12);
    EXPECT_DOUBLE_EQ(r.norm_bound, 3.0 * r.q);
    EXPECT_LE(r.norm_distance, r.norm_bound);
    EXPECT_LT(r.norm_distance, prev);
    prev = r.norm_distance;
  }
}

TEST(Discontinuity, RejectsBadTargets) {
  EXPECT_EQ(code_of([] { discontinuity_rows({1}, 0.0); }), ErrorCode::kInvalidArgument);
  // q = 1/log 2 > 1.
  EXPECT_EQ(code_of([] { discontinuity_rows({1}, 1.0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { discontinuity_rows({0}, 0.3); }), ErrorCode::kInvalidArgument);
}

TEST(Discontinuity, Csv) {
  const std::string csv = discontinuity_csv(discontinuity_rows({1, 3}, 0.3));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,q,norm_distance,norm_bound,capacity,gap");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("1,", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line.rfind("3,", 0), 0u);
  EXPECT_FALSE(std::getline(in, line));
}

TEST(Verify, SuiteNames) {
  const auto names = verify_suite_names();
  ASSERT_FALSE(names.empty());
  EXPECT_EQ(names.back(), "all");
  for (const char* s : {"pinsker", "donald", "lemma1", "chain", "strong_concavity", "concavity", "transport",
                        "transport_sweep"})
    EXPECT_NE(std::find(names.begin(), names.end(), s), names.end()) << s;
}

TEST(Verify, EverySuitePassesOnASmallRun) {
  const std::vector<SuiteResult> all = run_verify("all", 7, 25);
  EXPECT_EQ(all.size(), verify_suite_names().size() - 1);
  for (const SuiteResult& s : all) {
    EXPECT_EQ(s.cases, 25) << s.name;
    EXPECT_TRUE(s.ok()) << s.name << " max residual " << s.max_residual;
    EXPECT_LE(s.max_residual, s.tol) << s.name;
  }
}

TEST(Verify, SameSeedSameResiduals) {
  const auto a = run_verify("lemma1", 11, 30);
  const auto b = run_verify("lemma1", 11, 30);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].max_residual, b[0].max_residual);
  EXPECT_EQ(a[0].passed, b[0].passed);
}

TEST(Verify, UnknownSuiteAndBadCaseCount) {
  EXPECT_EQ(code_of([] { run_verify("nonsense", 1, 10); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { run_verify("pinsker", 1, 0); }), ErrorCode::kInvalidArgument);
}
