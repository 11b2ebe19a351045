#include <gtest/gtest.h>

#include <cmath>
#include "json.hpp"

#include "holevo/io.hpp"
#include "holevo/random.hpp"

using namespace holevo;
using nlohmann::json;

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

TEST(ChannelJson, NamedKinds) {
  EXPECT_TRUE(same_action(channel_from_json(R"({"kind":"noiseless","d":3})"), noiseless(3)));
  EXPECT_TRUE(same_action(channel_from_json(R"({"kind":"depolarizing","d":2,"p":0.25})"), depolarizing(2, 0.25)));
  EXPECT_TRUE(same_action(channel_from_json(R"({"kind":"completely_depolarizing","d":2})"), completely_depolarizing(2)));
  EXPECT_TRUE(same_action(channel_from_json(R"({"kind":"example2","n":2,"q":0.3,"N":4})"),
                          example2_channel({2, 0.3, 4})));
  EXPECT_TRUE(same_action(channel_from_json(R"({"kind":"example2_limit","N":4})"), example2_limit(4)));
  const Channel t = channel_from_json(
      R"({"kind":"tensor","left":{"kind":"noiseless","d":2},"right":{"kind":"depolarizing","d":2,"p":0.5}})");
  EXPECT_EQ(t.d_in(), 4);
  EXPECT_TRUE(same_action(t, tensor_channel(noiseless(2), depolarizing(2, 0.5))));
  const Channel c = channel_from_json(
      R"({"kind":"compose","outer":{"kind":"depolarizing","d":2,"p":0.5},"inner":{"kind":"depolarizing","d":2,"p":0.5}})");
  EXPECT_TRUE(same_action(c, depolarizing(2, 0.75)));
  const Channel tr = channel_from_json(R"({"kind":"truncate","n":2,"channel":{"kind":"noiseless","d":4}})");
  EXPECT_EQ(tr.d_out(), 3);
  const Channel dsm = channel_from_json(R"({"kind":"direct_sum_mixture","q":0.5,"channel":{"kind":"noiseless","d":2}})");
  EXPECT_EQ(dsm.d_out(), 4);
}

TEST(ChannelJson, MeasurePrepare) {
  const Channel mp = channel_from_json(R"({"kind":"measure_prepare",
    "povm":[[[1,0],[0,0]],[[0,0],[0,1]]],
    "states":[{"kind":"basis","d":2,"i":1},{"kind":"basis","d":2,"i":0}]})");
  const Matrix out = mp.apply(DensityOperator::basis(2, 0).matrix());
  EXPECT_NEAR(out(1, 1).real(), 1.0, 1e-14);
  EXPECT_TRUE(mp.has_tag(ChannelTag::kEntanglementBreaking));
}

TEST(ChannelJson, RandomIsSeeded) {
  const char* spec = R"({"kind":"random","d_in":2,"d_out":3,"rank":2,"seed":9})";
  EXPECT_TRUE(same_action(channel_from_json(spec), channel_from_json(spec), 0.0));
  EXPECT_FALSE(same_action(channel_from_json(spec),
                           channel_from_json(R"({"kind":"random","d_in":2,"d_out":3,"rank":2,"seed":10})")));
}

TEST(ChannelJson, RoundTripThroughRawKraus) {
  Rng rng(61);
  const Channel phi = random_channel(2, 3, 2, rng);
  const Channel back = channel_from_json(channel_to_json(phi));
  EXPECT_EQ(back.d_in(), 2);
  EXPECT_EQ(back.d_out(), 3);
  EXPECT_TRUE(same_action(phi, back, 1e-10));
  const Channel tagged = channel_from_json(channel_to_json(depolarizing(2, 0.9)));
  EXPECT_EQ(tagged.tags(), depolarizing(2, 0.9).tags());
}

TEST(ChannelJson, ComplexEntries) {
  // Kraus operator diag(1, i) is a unitary.
  const Channel u = channel_from_json(R"({"d_in":2,"d_out":2,"kraus":[[[1,0],[0,[0,1]]]]})");
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(u.apply_pure(plus)(0, 1).imag(), -0.5, 1e-14);
}

TEST(ChannelJson, Errors) {
  EXPECT_EQ(code_of([] { channel_from_json("{not json"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { channel_from_json(R"({"kind":"warp"})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { channel_from_json(R"({"kind":"depolarizing","d":2})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { channel_from_json(R"({"kind":"depolarizing","d":"two","p":0.1})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { channel_from_json(R"({"d_in":2,"d_out":2,"kraus":[[[1,0],[0]]]})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { channel_from_json(R"({"d_in":2,"d_out":2,"kraus":[[[1,0],[0,"x"]]]})"); }), ErrorCode::kParse);
  // Well-formed but not trace preserving.
  EXPECT_EQ(code_of([] { channel_from_json(R"({"d_in":2,"d_out":2,"kraus":[[[1,0],[0,0.5]]]})"); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { channel_from_json(R"({"kind":"depolarizing","d":2,"p":1.5})"); }),
            ErrorCode::kInvalidArgument);
}

TEST(StateJson, Forms) {
  EXPECT_EQ(state_from_json(R"({"kind":"maximally_mixed","d":3})").dim(), 3);
  EXPECT_NEAR(state_from_json(R"({"kind":"basis","d":2,"i":1})").matrix()(1, 1).real(), 1.0, 0.0);
  const DensityOperator p = state_from_json(R"({"kind":"pure","vector":[1,[0,1]]})");
  EXPECT_NEAR(p.matrix()(0, 1).imag(), -0.5, 1e-14);
  const DensityOperator m = state_from_json("[[0.75,0],[0,0.25]]");
  EXPECT_NEAR(entropy(m), 0.562335144618808, 1e-12);
  EXPECT_EQ(code_of([] { state_from_json("[[1,0],[0,1]]"); }), ErrorCode::kInvalidOperand);
  EXPECT_EQ(code_of([] { state_from_json(R"({"kind":"basis","d":2})"); }), ErrorCode::kParse);
}

TEST(EnsembleJson, RoundTrip) {
  Rng rng(62);
  const Ensemble e = random_ensemble(2, 3, rng);
  const Ensemble back = ensemble_from_json(ensemble_to_json(e));
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(back[i].weight, e[i].weight, 1e-11);
    EXPECT_LE((back[i].state.matrix() - e[i].state.matrix()).cwiseAbs().maxCoeff(), 1e-11);
  }
  EXPECT_EQ(code_of([] { ensemble_from_json(R"({"items":[{"weight":0.5,"state":[[1,0],[0,0]]}]})"); }),
            ErrorCode::kInvalidArgument);
}

TEST(ConstraintJson, Forms) {
  EXPECT_EQ(constraint_from_json(R"("unconstrained")").kind(), ConstraintSet::Kind::kUnconstrained);
  EXPECT_EQ(constraint_from_json(R"({"kind":"unconstrained"})").kind(), ConstraintSet::Kind::kUnconstrained);
  const ConstraintSet s = constraint_from_json(R"({"kind":"singleton","state":{"kind":"maximally_mixed","d":2}})");
  EXPECT_EQ(s.kind(), ConstraintSet::Kind::kSingleton);
  const ConstraintSet e = constraint_from_json(R"({"kind":"expectation","observable":[[0,0],[0,1]],"bound":0.3})");
  EXPECT_EQ(e.kind(), ConstraintSet::Kind::kExpectationBound);
  EXPECT_DOUBLE_EQ(e.bound(), 0.3);
  EXPECT_EQ(code_of([] { constraint_from_json(R"({"kind":"expectation","observable":[[0,0],[0,1]],"bound":-1})"); }),
            ErrorCode::kInfeasible);
  EXPECT_EQ(code_of([] { constraint_from_json(R"({"kind":"expectation","observable":[[0,1],[0,1]],"bound":1})"); }),
            ErrorCode::kInvalidOperand);
  EXPECT_EQ(code_of([] { constraint_from_json(R"("sometimes")"); }), ErrorCode::kParse);
}

TEST(ResultJson, CapacityFieldsUnitsAndRounding) {
  const CapacityResult r = chi_capacity(depolarizing(2, 0.5), ConstraintSet::unconstrained());
  const json nats = json::parse(to_json(r));
  EXPECT_EQ(nats["units"], "nats");
  EXPECT_FALSE(nats.contains("wall_time_s"));
  for (const char* key : {"value", "lower_bound", "upper_bound", "gap", "certified", "converged", "iterations",
                          "witness", "omega"})
    EXPECT_TRUE(nats.contains(key)) << key;
  EXPECT_DOUBLE_EQ(nats["value"].get<double>(), round12(r.value));

  OutputFormat f;
  f.bits = true;
  f.wall_time = 0.25;
  const json bits = json::parse(to_json(r, f));
  EXPECT_EQ(bits["units"], "bits");
  EXPECT_DOUBLE_EQ(bits["wall_time_s"].get<double>(), 0.25);
  EXPECT_NEAR(bits["value"].get<double>(), r.value / std::log(2.0), 1e-11);
  // Same input, same bytes.
  EXPECT_EQ(to_json(r), to_json(chi_capacity(depolarizing(2, 0.5), ConstraintSet::unconstrained())));
}

TEST(ResultJson, InfiniteUpperBoundIsAString) {
  CapacityResult r = chi_capacity(noiseless(2), ConstraintSet::unconstrained());
  r.upper_bound = std::numeric_limits<double>::infinity();
  r.gap = r.upper_bound;
  const json j = json::parse(to_json(r));
  EXPECT_EQ(j["upper_bound"], "inf");
  EXPECT_EQ(j["gap"], "inf");
}

TEST(ResultJson, SuitesAndRows) {
  std::vector<SuiteResult> suites{{"pinsker", 10, 10, 0.0, 1e-9}, {"donald", 10, 9, 2e-9, 1e-9}};
  const json j = json::parse(to_json(suites));
  EXPECT_EQ(j["suites"].size(), 2u);
  EXPECT_EQ(j["pass"], false);
  EXPECT_EQ(j["suites"][0]["pass"], true);

  std::vector<DiscontinuityRow> rows{{1, 0.5, 1.0, 1.5, 0.3, 1e-8}};
  const json d = json::parse(to_json(rows));
  EXPECT_EQ(d["rows"][0]["n"], 1);
  EXPECT_DOUBLE_EQ(d["rows"][0]["norm_bound"].get<double>(), 1.5);
}

TEST(Round12, TwelveSignificantDigits) {
  EXPECT_DOUBLE_EQ(round12(0.1234567890123456), 0.123456789012);
  EXPECT_DOUBLE_EQ(round12(123456.7890123456), 123456.789012);
  EXPECT_DOUBLE_EQ(round12(0.0), 0.0);
  EXPECT_DOUBLE_EQ(round12(-2.5e-20), -2.5e-20);
}
