#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "stoken/errors.hpp"
#include "stoken/estimation.hpp"
#include "stoken/source_model.hpp"

using namespace stoken;

namespace {

CountRecord paper_counts() {
  CountRecord c;
  c.t_exp = 331465;
  c.f_sys = 5e5;
  c.n_b = 11467415;
  c.n_u0 = 5737415;
  c.n_t0 = 5732749;
  c.n_tu = {1508557, 1507895, 1358476, 1356953};
  c.n_err_tu = {89317, 92020, 82505, 82923};
  c.n0 = 1348725;
  c.n1 = 10118574;
  c.n2 = 116;
  return c;
}

const DarkRecord kDark{75906, 17111, 12985, 13354};
const CoincidenceRecord kCoinc{12021392, 11467415, 10118690};

double central(const std::function<double(double)>& f, double x) {
  const double h = 1e-4 * std::abs(x);
  return (f(x + h) - f(x - h)) / (2 * h);
}

void expect_rel(double got, double want, double tol) { EXPECT_NEAR(got, want, tol * std::abs(want)); }

}  // namespace

TEST(Biases, PublishedBounds) {
  const BiasEstimates b = estimate_biases(paper_counts());
  EXPECT_NEAR(b.beta_pb.value, 0.000324, 1e-12);
  EXPECT_NEAR(b.beta_pb.bound7, 0.001360, 1e-12);
  EXPECT_NEAR(b.beta_ps.bound7, 0.001120, 1e-12);
  EXPECT_NEAR(b.beta_pb.sigma, 0.000148, 1e-12);
}

TEST(Biases, BalancedCountsGiveZeroMean) {
  CountRecord c = paper_counts();
  c.n_b = 1000;
  c.n_u0 = 500;
  EXPECT_EQ(estimate_biases(c).beta_pb.value, 0.0);
}

TEST(ErrorRates, PublishedRow11) {
  const ErrorRateTable t = estimate_error_rates(paper_counts());
  EXPECT_NEAR(100 * t.rows[3].value, 6.1109707, 5e-8);
  EXPECT_NEAR(100 * t.rows[3].bound7, 6.2549096, 5e-8);
  EXPECT_NEAR(t.E, 0.062550, 1e-12);
}

TEST(ErrorRates, ZeroErrorsGiveZeroSigma) {
  CountRecord c = paper_counts();
  c.n_err_tu = {0, 0, 0, 0};
  const ErrorRateTable t = estimate_error_rates(c);
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.sigma, 0.0);
  }
  c.n_tu[1] = 0;
  EXPECT_THROW(estimate_error_rates(c), std::invalid_argument);
}

TEST(ErrorRates, BoundMonotoneInErrorCount) {
  CountRecord c = paper_counts();
  double prev = estimate_error_rates(c).rows[0].bound7;
  for (int step = 0; step < 5; ++step) {
    c.n_err_tu[0] += 1000;
    const double now = estimate_error_rates(c).rows[0].bound7;
    EXPECT_GT(now, prev);
    prev = now;
  }
}

TEST(DarkCounts, PublishedValues) {
  const DarkEstimates d = estimate_dark(kDark, 5e5);
  expect_rel(d.d_a0.value, 3.42134e-7, 5e-6);
  expect_rel(d.d_a0.sigma, 3.00244e-9, 5e-6);
  expect_rel(d.d_a.value, 6.93990e-7, 5e-6);
  expect_rel(d.d_a.sigma, 4.27615e-9, 5e-6);
}

TEST(DarkCounts, AllZero) {
  const DarkEstimates d = estimate_dark(DarkRecord{10, 0, 0, 0}, 5e5);
  EXPECT_EQ(d.d_a.value, 0.0);
  EXPECT_EQ(d.d_a.sigma, 0.0);
  EXPECT_EQ(d.d_b.bound7, 0.0);
}

TEST(DarkCounts, BoundMonotoneInCounts) {
  DarkRecord r = kDark;
  const double before = estimate_dark(r, 5e5).d_a.bound7;
  r.n_da1 += 100;
  EXPECT_GT(estimate_dark(r, 5e5).d_a.bound7, before);
}

TEST(Detection, PublishedValues) {
  const DetectionEstimates d = estimate_detection(kCoinc, 331465, 5e5);
  expect_rel(d.p_a.value, 7.25349e-5, 5e-6);
  expect_rel(d.p_a.sigma, 2.09204e-8, 5e-6);
  expect_rel(d.p_b.value, 6.91923e-5, 5e-6);
  EXPECT_EQ(estimate_detection(CoincidenceRecord{5, 5, 0}, 1, 1e6).p_c.value, 0.0);
}

TEST(Noqub, PublishedChain) {
  const DarkEstimates d = estimate_dark(kDark, 5e5);
  const NoqubReport r = derive_noqub_bound(d, estimate_detection(kCoinc, 331465, 5e5));
  expect_rel(r.mu_u.value, 8.30097e-5, 5e-6);
  expect_rel(r.mu_u.sigma, 4.51565e-8, 5e-6);
  EXPECT_NEAR(r.p_noqub_max.bound7, 4.9e-5, 1e-12);
  const EtaBounds e = eta_lower_bounds(r.x_a, r.x_b, r.mu_u);
  EXPECT_NEAR(e.eta_a_l.value, 0.865369, 5e-7);
  EXPECT_NEAR(e.eta_b_l.value, 0.828142, 5e-7);
}

TEST(Noqub, AssumptionViolationNamed) {
  DarkEstimates d = estimate_dark(kDark, 5e5);
  DetectionEstimates det = estimate_detection(kCoinc, 331465, 5e5);
  det.p_c.value = 0.0;
  try {
    derive_noqub_bound(d, det);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_STREQ(e.what(), "mu bound derivation inapplicable; check mu < 0.005 assumption");
  }
}

TEST(Eta, AlgebraicInversion) {
  const double mu = 3e-4, eta_a = 0.7, eta_b = 0.6;
  EXPECT_NEAR(chain::eta_a_l(mu * (eta_a + mu), mu), eta_a, 1e-12);
  EXPECT_NEAR(chain::eta_b_l(mu * eta_b, mu), eta_b, 1e-12);
}

TEST(MuAssumption, Thresholds) {
  const DarkEstimates d = estimate_dark(kDark, 5e5);
  const NoqubReport r = derive_noqub_bound(d, estimate_detection(kCoinc, 331465, 5e5));
  EstimateWithSigma x = r.x_b;
  x.value = 6.87e-5;
  EXPECT_TRUE(check_mu_assumption(x));
  x.value = 1e-3;
  EXPECT_FALSE(check_mu_assumption(x));
  EXPECT_TRUE(check_mu_assumption(EstimateWithSigma{}));
}

TEST(ErrorPropagation, DarkSigmaMatchesDerivative) {
  const DarkEstimates d = estimate_dark(kDark, 5e5);
  const double g0 = central([&](double v) { return chain::d_a(v, d.d_a1.value); }, d.d_a0.value);
  const double g1 = central([&](double v) { return chain::d_a(d.d_a0.value, v); }, d.d_a1.value);
  expect_rel(d.d_a.sigma, std::hypot(g0 * d.d_a0.sigma, g1 * d.d_a1.sigma), 1e-6);
}

TEST(ErrorPropagation, ChainSigmasMatchDerivatives) {
  const DarkEstimates d = estimate_dark(kDark, 5e5);
  const DetectionEstimates det = estimate_detection(kCoinc, 331465, 5e5);
  const NoqubReport r = derive_noqub_bound(d, det);
  const double da = d.d_a.value, db = d.d_b.value;
  const double pa = det.p_a.value, pb = det.p_b.value, pc = det.p_c.value;

  expect_rel(r.x_a.sigma,
             std::hypot(central([&](double v) { return chain::x_a(v, da); }, pa) * det.p_a.sigma,
                        central([&](double v) { return chain::x_a(pa, v); }, da) * d.d_a.sigma),
             1e-6);
  expect_rel(r.x_b.sigma,
             std::hypot(central([&](double v) { return chain::x_b(v, db); }, pb) * det.p_b.sigma,
                        central([&](double v) { return chain::x_b(pb, v); }, db) * d.d_b.sigma),
             1e-6);
  const double c1 = central([&](double v) { return chain::x_c(v, da, db); }, pc) * det.p_c.sigma;
  const double c2 = central([&](double v) { return chain::x_c(pc, v, db); }, da) * d.d_a.sigma;
  const double c3 = central([&](double v) { return chain::x_c(pc, da, v); }, db) * d.d_b.sigma;
  expect_rel(r.x_c.sigma, std::sqrt(c1 * c1 + c2 * c2 + c3 * c3), 1e-6);

  const double xa = r.x_a.value, xb = r.x_b.value, xc = r.x_c.value;
  const double m1 = central([&](double v) { return chain::mu_u(v, xb, xc); }, xa) * r.x_a.sigma;
  const double m2 = central([&](double v) { return chain::mu_u(xa, v, xc); }, xb) * r.x_b.sigma;
  const double m3 = central([&](double v) { return chain::mu_u(xa, xb, v); }, xc) * r.x_c.sigma;
  expect_rel(r.mu_u.sigma, std::sqrt(m1 * m1 + m2 * m2 + m3 * m3), 1e-6);

  const double mu = r.mu_u.value;
  const double p1 = central([&](double v) { return chain::p_noqub_u(v, xb, db); }, mu) * r.mu_u.sigma;
  const double p2 = central([&](double v) { return chain::p_noqub_u(mu, v, db); }, xb) * r.x_b.sigma;
  const double p3 = central([&](double v) { return chain::p_noqub_u(mu, xb, v); }, db) * d.d_b.sigma;
  expect_rel(r.p_noqub_max.sigma, std::sqrt(p1 * p1 + p2 * p2 + p3 * p3), 1e-6);

  const EtaBounds e = eta_lower_bounds(r.x_a, r.x_b, r.mu_u);
  expect_rel(e.eta_a_l.sigma,
             std::hypot(central([&](double v) { return chain::eta_a_l(v, mu); }, xa) * r.x_a.sigma,
                        central([&](double v) { return chain::eta_a_l(xa, v); }, mu) * r.mu_u.sigma),
             1e-6);
  expect_rel(e.eta_b_l.sigma,
             std::hypot(central([&](double v) { return chain::eta_b_l(v, mu); }, xb) * r.x_b.sigma,
                        central([&](double v) { return chain::eta_b_l(xb, v); }, mu) * r.mu_u.sigma),
             1e-6);
}

TEST(RoundTrip, SimulatedCountsYieldValidUpperBounds) {
  PoissonSourceParams p;
  p.mu = 0.004;
  p.eta_a0 = p.eta_a1 = p.eta_b = 0.5;
  p.d_a0 = 3e-7;
  p.d_a1 = 3.5e-7;
  p.d_b = 4.5e-7;
  const double truth = multiphoton_given_herald(p);
  const std::uint64_t pulses = 100000000;
  const double dark_pulses = 2e10;  // t_d = 4e4 s at 500 kHz
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng = make_rng(2024, seed);
    const DetectionCounts c = simulate_detection_counts(p, pulses, rng);
    std::poisson_distribution<std::int64_t> da0(p.d_a0 * dark_pulses), da1(p.d_a1 * dark_pulses),
        db(p.d_b * dark_pulses);
    const DarkRecord dark{dark_pulses / p.f_sys, db(rng), da0(rng), da1(rng)};
    const double t_exp = static_cast<double>(pulses) / p.f_sys;
    const CoincidenceRecord co{static_cast<std::int64_t>(c.n_a), static_cast<std::int64_t>(c.n_b),
                               static_cast<std::int64_t>(c.n_c)};
    const NoqubReport r = derive_noqub_bound(estimate_dark(dark, p.f_sys), estimate_detection(co, t_exp, p.f_sys));
    ok += r.mu_u.bound7 >= p.mu && r.p_noqub_max.bound7 >= truth;
  }
  EXPECT_GE(ok, 50 * 99 / 100);
}

TEST(Records, Validation) {
  CountRecord c = paper_counts();
  c.n2 += 1;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW((DarkRecord{0, 1, 1, 1}).validate(), ConfigError);
  EXPECT_THROW((CoincidenceRecord{5, 10, 6}).validate(), ConfigError);
}
