#include <cmath>

#include <gtest/gtest.h>

#include "stoken/binomial.hpp"
#include "stoken/bounds.hpp"
#include "stoken/errors.hpp"

using namespace stoken;

namespace {

SchemeParams paper() {
  SchemeParams p;
  p.N = p.n = 10048;
  p.gamma_err = 0.094;
  p.nu_cor = 0.457643134;
  p.nu_unf = 0.037547677;
  p.E = 0.062550;
  p.beta_pb = 0.001360;
  p.beta_ps = 0.001120;
  p.p_noqub = 4.9e-5;
  p.p_theta = 0.027;
  p.theta = 5.115515 * M_PI / 180;
  return p;
}

std::array<DensityMatrix2, 4> ideal_states() {
  std::array<DensityMatrix2, 4> s;
  for (int i = 0; i < 4; ++i) s[i] = bb84_state({i / 2, i % 2});
  return s;
}

std::string precondition_message(const SchemeParams& p, double p_bound) {
  try {
    epsilon_unf(p, p_bound);
  } catch (const PreconditionError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(EpsilonPriv, Identity) {
  EXPECT_EQ(epsilon_priv(1e-5), 1e-5);
  EXPECT_EQ(epsilon_priv(0.0), 0.0);
  EXPECT_THROW(epsilon_priv(0.5), std::invalid_argument);
}

TEST(XorCompositeBias, SingleBitAndPairs) {
  EXPECT_NEAR(xor_composite_bias(0.1, 1), 0.1, 1e-15);
  // Pr[a xor b = 0] - 1/2 for two bits at 1/2 + 0.1
  EXPECT_NEAR(xor_composite_bias(0.1, 2), 0.6 * 0.6 + 0.4 * 0.4 - 0.5, 1e-15);
}

TEST(EpsilonRob, NoLossModeIsZero) { EXPECT_EQ(epsilon_rob(paper()), 0.0); }

TEST(EpsilonRob, DominatesExactBinomial) {
  SchemeParams p = paper();
  p.N = 100;
  p.p_det = 0.9;
  p.gamma_det = 0.5;
  const double exact = binomial_cdf(100, 49, 0.9);
  EXPECT_GE(epsilon_rob(p), exact);
  p.gamma_det = 0.95;
  EXPECT_THROW(epsilon_rob(p), PreconditionError);
}

TEST(EpsilonCor, PublishedTerms) {
  const TwoTerm t = epsilon_cor(paper());
  EXPECT_NEAR(t.term1, 2.05304e-15, 2.05304e-18);
  EXPECT_NEAR(t.term2, 1.89154e-15, 1.89154e-18);
  EXPECT_NEAR(t.total, 3.94458e-15, 3.94458e-18);
}

TEST(EpsilonCor, ErrorRateNearThresholdDegrades) {
  SchemeParams p = paper();
  p.N = 50;
  p.E = 0.999 * p.gamma_err;
  EXPECT_GT(epsilon_cor(p).term2, 0.9);
}

TEST(EpsilonCor, PreconditionsNamed) {
  SchemeParams p = paper();
  p.E = 0.1;
  try {
    epsilon_cor(p);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("E < gamma_err"), std::string::npos);
  }
  p = paper();
  p.nu_cor = 0.5;
  EXPECT_THROW(epsilon_cor(p), PreconditionError);
}

TEST(PNoqubTheta, Values) {
  EXPECT_EQ(p_noqub_theta(0, 0), 0.0);
  EXPECT_NEAR(p_noqub_theta(4.9e-5, 0.027), 0.027047677, 1e-12);
  EXPECT_EQ(p_noqub_theta(1, 0.3), 1.0);
}

TEST(EpsilonUnf, PublishedTerms) {
  const TwoTerm t = epsilon_unf(paper(), 0.884130);
  EXPECT_NEAR(t.term1, 3.72375e-10, 3.72375e-12);
  EXPECT_NEAR(t.term2, 5.11874e-9, 5.11874e-11);
  EXPECT_NEAR(t.total, 5.49112e-9, 5.49112e-11);
}

TEST(EpsilonUnf, FirstTermVanishesWithoutImperfections) {
  SchemeParams p = paper();
  p.p_noqub = p.p_theta = 0.0;
  EXPECT_EQ(epsilon_unf(p, 0.884130).term1, 0.0);
}

TEST(EpsilonUnf, PreconditionsNamed) {
  SchemeParams p = paper();
  p.nu_unf = 0.5;
  EXPECT_EQ(precondition_message(p, 0.884130), "unforgeability requires nu_unf < gamma_det(1 - gamma_err/(1 - P_bound))");
  p.nu_unf = 0.01;
  EXPECT_EQ(precondition_message(p, 0.884130), "unforgeability requires P_noqub,theta < nu_unf");
  EXPECT_EQ(precondition_message(paper(), 1.0), "unforgeability requires 0 < P_bound < 1");
}

TEST(BestNuUnf, NoWorseThanPublishedChoice) {
  const auto best = best_nu_unf(paper(), 0.884130);
  ASSERT_TRUE(best.has_value());
  EXPECT_LE(best->eps.total, 5.49112e-9 * 1.01);
  SchemeParams p = paper();
  p.gamma_err = 0.2;
  EXPECT_FALSE(best_nu_unf(p, 0.884130).has_value());
}

TEST(AdjustConfidence, ZeroWrongProbabilityIsIdentity) {
  EXPECT_EQ(adjust_confidence(3.3e-9, 6, 0.0), 3.3e-9);
}

TEST(AdjustConfidence, MatchesLongDoubleAlgebra) {
  for (int k : {1, 6, 7, 20}) {
    for (double pw : {2.6e-12, 1e-6, 0.01}) {
      const long double keep = std::pow(1.0L - pw, static_cast<long double>(k));
      const long double want = 1.0L - keep + 5e-9L * keep;
      EXPECT_NEAR(adjust_confidence(5e-9, k, pw), static_cast<double>(want), 1e-6 * static_cast<double>(want));
    }
  }
}

TEST(MultiNode, SingleNodeReduces) {
  const MultiNode m = multi_node(1, 1e-5, 2e-11, 5e-9);
  EXPECT_NEAR(m.eps_priv, 1e-5, 1e-20);
  EXPECT_EQ(m.eps_cor, 2e-11);
  EXPECT_EQ(m.forge_bound, 5e-9);
}

TEST(MultiNode, SevenNodes) {
  const MultiNode m = multi_node(7, 0.0, 2.1e-11, 5.52e-9);
  EXPECT_NEAR(m.eps_cor, 1.47e-10, 1e-15);
  EXPECT_NEAR(m.forge_bound, 64.0 * 127.0 * 5.52e-9, 1e-15);
  EXPECT_NEAR(m.forge_bound, 4.5e-5, 0.05e-5);
}

TEST(Ensemble, IdealUniformIsMaximallyMixed) {
  const Ensemble e = build_ensemble(ideal_states(), {0.25, 0.25, 0.25, 0.25});
  for (double r : e.r) EXPECT_NEAR(r, 0.25, 1e-15);
  EXPECT_LE(e.rho.matrix().max_abs_diff(Mat2::identity() * 0.5), 1e-15);
}

TEST(Ensemble, CyclicPairing) {
  const std::array<double, 4> q = priors_from_bias(0.6, 0.3);
  const Ensemble e = build_ensemble(ideal_states(), q);
  EXPECT_NEAR(e.r[3], 0.5 * (q[3] + q[0]), 1e-15);
  const Mat2 chi3 = (ideal_states()[3].matrix() * q[3] + ideal_states()[0].matrix() * q[0]) * (1.0 / (q[3] + q[0]));
  EXPECT_LE(e.chi[3].matrix().max_abs_diff(chi3), 1e-15);
}

TEST(Ensemble, DegeneratePriorsRejected) {
  EXPECT_THROW(build_ensemble(ideal_states(), {0.5, 0.0, 0.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(build_ensemble(ideal_states(), {0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
}

TEST(PBound, IdealClosedForm) {
  EXPECT_NEAR(p_bound_ideal(), std::pow(std::cos(M_PI / 8), 2), 1e-12);
  EXPECT_NEAR(p_bound_optimize(0.0, 0.0, 0.0), std::pow(std::cos(M_PI / 8), 2), 1e-6);
}

TEST(PBound, PaperImperfections) {
  const double v = p_bound_optimize(5.115515 * M_PI / 180, 0.001360, 0.001120);
  EXPECT_GE(v, 0.881);
  EXPECT_LE(v, 0.887);
}

TEST(PBound, GrowsWithDeviation) {
  double prev = p_bound_optimize(0.0, 0.0, 0.0);
  for (double deg : {2.0, 5.0, 10.0}) {
    const double v = p_bound_optimize(deg * M_PI / 180, 0.0, 0.0);
    EXPECT_GE(v, prev - 1e-9);
    prev = v;
  }
}

TEST(PBound, SearchIsSeedDeterministic) {
  const PBoundResult a = p_bound_search(0.05, 0.001, 0.001);
  const PBoundResult b = p_bound_search(0.05, 0.001, 0.001);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.evaluations, b.evaluations);
  EXPECT_NEAR(forging_objective(a.polar, a.azimuth, a.bias_pb, a.bias_ps), a.maximum, 1e-12);
}

TEST(PBound, MarginAddsToValue) {
  PBoundOptions o;
  o.safety_margin = 1e-4;
  EXPECT_NEAR(p_bound_optimize(0.0, 0.0, 0.0, o), p_bound_ideal() + 1e-4, 1e-6);
}

TEST(ComputeBounds, PinnedPaperTuple) {
  const BoundReport r = compute_bounds(paper(), ConfidenceParams{}, 0.884130, PBoundOptions{}, 7);
  EXPECT_TRUE(r.p_bound_pinned);
  EXPECT_NEAR(r.eps_cor.total, 3.94458e-15, 3.94458e-18);
  EXPECT_NEAR(r.eps_unf.total, 5.49112e-9, 5.49112e-11);
  EXPECT_NEAR(r.multi.eps_cor, 7 * r.eps_cor_prime, 1e-25);
}
