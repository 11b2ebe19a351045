#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "holevo/additivity.hpp"
#include "holevo/random.hpp"
#include "oracles.hpp"

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

Channel eb_channel() {
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  std::vector<HermitianOperator> povm{HermitianOperator(p0), HermitianOperator(p1)};
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  std::vector<DensityOperator> states{DensityOperator::basis(2, 0), DensityOperator::pure(plus)};
  return measure_prepare(povm, states);
}

HermitianOperator number_operator() {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = 1.0;
  return HermitianOperator(h);
}

Vector bell() {
  Vector v = Vector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace

TEST(Additivity, KnownAdditiveInstances) {
  struct Case {
    Channel phi, psi;
  };
  const Case cases[] = {
      {noiseless(2), depolarizing(2, 0.3)},
      {eb_channel(), depolarizing(2, 0.3)},
      {direct_sum_mixture(0.5, eb_channel()), noiseless(2)},
  };
  for (const Case& c : cases) {
    AdditivityReport r = additivity_report(c.phi, ConstraintSet::unconstrained(), c.psi, ConstraintSet::unconstrained());
    EXPECT_LE(std::abs(r.gap), 2e-3);
    EXPECT_LE(r.rhs_left.gap, 1e-4);
    EXPECT_LE(r.rhs_right.gap, 1e-4);
    EXPECT_LE(r.omega_product_residual, r.cauchy_bound + 1e-9);
    EXPECT_NEAR(r.gap, r.lhs.value - r.rhs_left.value - r.rhs_right.value, 1e-12);
  }
}

TEST(Additivity, NoiselessPairIsLogOfProductDimension) {
  AdditivityReport r = additivity_report(noiseless(2), ConstraintSet::unconstrained(), noiseless(3),
                                         ConstraintSet::unconstrained(), {}, "pair");
  EXPECT_EQ(r.label, "pair");
  EXPECT_NEAR(r.lhs.value, std::log(6.0), 1e-6);
  EXPECT_NEAR(r.gap, 0.0, 1e-6);
}

TEST(Additivity, EnergyConstrainedFactorsAddUp) {
  const ConstraintSet a = ConstraintSet::expectation_bound(number_operator(), 0.25);
  const ConstraintSet b = ConstraintSet::expectation_bound(number_operator(), 0.1);
  CapacityResult joint = joint_capacity(noiseless(2), noiseless(2), {a, b});
  EXPECT_NEAR(joint.value, oracle::h2(0.25) + oracle::h2(0.1), 1e-5);
  EXPECT_LE(joint.gap, 1e-5);
  const ProductConstraint pc{a, b};
  EXPECT_TRUE(pc.contains(average_state(joint.witness), 2, 2, 1e-7));

  AdditivityReport r = additivity_report(eb_channel(), a, depolarizing(2, 0.2), b);
  EXPECT_LE(std::abs(r.gap), 2e-3);
}

TEST(Additivity, ProductConstraintMembership) {
  const ProductConstraint pc{ConstraintSet::expectation_bound(number_operator(), 0.2), ConstraintSet::unconstrained()};
  EXPECT_TRUE(pc.contains(tensor(DensityOperator::basis(2, 0), DensityOperator::basis(2, 1)), 2, 2));
  EXPECT_FALSE(pc.contains(tensor(DensityOperator::basis(2, 1), DensityOperator::basis(2, 0)), 2, 2));
  EXPECT_FALSE(pc.contains(DensityOperator::maximally_mixed(3), 2, 2));
}

TEST(Additivity, SingletonFactorsAreUnsupported) {
  const ProductConstraint pc{ConstraintSet::singleton(DensityOperator::maximally_mixed(2)),
                             ConstraintSet::unconstrained()};
  EXPECT_EQ(code_of([&] { joint_capacity(noiseless(2), noiseless(2), pc); }), ErrorCode::kUnsupported);
}

TEST(Subadditivity, EntanglementBreakingFactor) {
  // Product states: the two sides coincide.
  Rng rng(51);
  DensityOperator a = random_density(2, rng), b = random_density(2, rng);
  EXPECT_NEAR(subadditivity_gap(eb_channel(), depolarizing(2, 0.3), tensor(a, b)), 0.0, 1e-6);
  // Entangled states: χ of the product channel does not exceed the sum.
  DensityOperator ent = DensityOperator::trusted(0.7 * DensityOperator::pure(bell()).matrix() +
                                                 0.3 * random_density(4, rng).matrix());
  EXPECT_GE(subadditivity_gap(eb_channel(), depolarizing(2, 0.3), ent), -1e-6);
}

TEST(Subadditivity, HhatGapOnEntanglementBreakingPairs) {
  Rng rng(52);
  for (int i = 0; i < 3; ++i) {
    DensityOperator w = random_density(4, rng, 2);
    HhatGap g = superadditivity_gap_hhat(eb_channel(), depolarizing(2, 0.4), w);
    EXPECT_GE(g.gap, -1e-6);
    EXPECT_NE(g.evidence, Evidence::kViolates);
  }
  EXPECT_EQ(to_string(Evidence::kSupports), "supports");
  EXPECT_EQ(to_string(Evidence::kInconclusive), "inconclusive");
  EXPECT_EQ(to_string(Evidence::kViolates), "violates");
}

TEST(MinOutputEntropy, DepolarizingPairIsAdditive) {
  const Channel d = depolarizing(2, 0.3);
  MinOutputEntropy single = min_output_entropy(d);
  EXPECT_NEAR(single.value, oracle::h2(0.15), 1e-8);
  const double gap = moe_additivity_gap(d, depolarizing(2, 0.5));
  EXPECT_GE(gap, -1e-8);
  EXPECT_LE(gap, 1e-6);
}

TEST(MinOutputEntropy, NoiselessIsZero) {
  EXPECT_NEAR(min_output_entropy(noiseless(3)).value, 0.0, 1e-10);
  EXPECT_NEAR(min_output_entropy(completely_depolarizing(3)).value, std::log(3.0), 1e-10);
}

TEST(OmegaProduct, ResidualWithinCauchyBound) {
  OmegaProductCheck c = remark3_product_omega_check(eb_channel(), ConstraintSet::unconstrained(), depolarizing(2, 0.3),
                                                    ConstraintSet::unconstrained());
  EXPECT_LE(c.residual, c.cauchy_bound + 1e-9);
  EXPECT_LE(c.residual, 1e-2);
}

TEST(AdditivityCsv, HeaderRowsAndTimingColumn) {
  AdditivityReport r = additivity_report(noiseless(2), ConstraintSet::unconstrained(), noiseless(2),
                                         ConstraintSet::unconstrained(), {}, "nn");
  r.runtime_seconds = 1.5;
  const std::string plain = additivity_csv({r, r}, false);
  std::istringstream in(plain);
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header,
            "instance,lhs_value,lhs_lower,lhs_upper,lhs_gap,rhs_left_value,rhs_left_gap,rhs_right_value,"
            "rhs_right_gap,additivity_gap,omega_residual,cauchy_bound,runtime_s");
  int rows = 0;
  while (std::getline(in, row)) {
    ++rows;
    EXPECT_EQ(row.rfind("nn,", 0), 0u);
    EXPECT_EQ(row.back(), ',');
  }
  EXPECT_EQ(rows, 2);
  const std::string timed = additivity_csv({r}, true);
  EXPECT_NE(timed.find(",1.5\n"), std::string::npos);
}
