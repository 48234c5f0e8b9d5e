#include <cmath>
#include <variant>

#include <gtest/gtest.h>

#include "stoken/bounds.hpp"
#include "stoken/protocol.hpp"

using namespace stoken;

namespace {

SourceParams paper_source() {
  SourceParams s;
  s.beta_pb = 0.001360;
  s.beta_ps = 0.001120;
  s.theta = 5.115515 * M_PI / 180;
  s.p_theta = 0.027;
  s.p_noqub = 4.9e-5;
  s.error_rates = {0.059207, 0.061025, 0.060734, 0.061110};
  return s;
}

MeasurementPolicy paper_policy() {
  MeasurementPolicy p;
  p.detector = paper_detector_model();
  return p;
}

TokenRecord ideal_record(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  auto r = quantum_phase(n, SourceParams{}, MeasurementPolicy{}, rng);
  return std::get<TokenRecord>(r);
}

Bits complement(Bits b) {
  for (auto& v : b) v ^= 1;
  return b;
}

}  // namespace

TEST(Validate, HonestTokenAcceptedWithoutErrors) {
  const TokenRecord rec = ideal_record(400, 1);
  for (int d = 0; d < 2; ++d) {
    const ValidationResult v = validate(rec.t, rec, d, 0.094);
    EXPECT_TRUE(v.accepted);
    EXPECT_EQ(v.n_errors, 0u);
    EXPECT_GT(v.n_i, 0u);
  }
}

TEST(Validate, ComplementRejectedAtFullErrorRate) {
  const TokenRecord rec = ideal_record(400, 2);
  const ValidationResult v = validate(complement(rec.t), rec, 0, 0.094);
  EXPECT_FALSE(v.accepted);
  EXPECT_DOUBLE_EQ(v.error_rate, 1.0);
}

TEST(Validate, DummyTokenNearHalfErrors) {
  Rng rng(3);
  auto r = quantum_phase(10048, paper_source(), paper_policy(), rng);
  const TokenRecord& rec = std::get<TokenRecord>(r);
  const int z = rec.z[0];
  const ValidationResult v = validate(rec.x_dummy, rec, z ^ 1, 0.094);
  EXPECT_FALSE(v.accepted);
  EXPECT_NEAR(v.error_rate, 0.5, 5 * 0.5 / std::sqrt(static_cast<double>(v.n_i)));
}

TEST(Validate, EmptyMatchedSetRejected) {
  TokenRecord rec;
  rec.t = {0, 1};
  rec.u = {0, 0};
  rec.z = {0};
  rec.x = {0, 1};
  rec.x_dummy = {0, 1};
  rec.lambda = {0, 1};
  try {
    validate(rec.t, rec, 1, 0.094);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "no matched-basis positions");
  }
}

TEST(Transaction, IdealRecordAcceptsOnlyAtB) {
  const TokenRecord rec = ideal_record(500, 4);
  for (int b = 0; b < 2; ++b) {
    const TransactionResult t = run_token_transaction(rec, b, 0.094);
    EXPECT_EQ(t.choice.b, b);
    EXPECT_TRUE(t.at_b.accepted);
    EXPECT_FALSE(t.at_other.accepted);
  }
}

TEST(Transaction, PaperParametersTwentySeeds) {
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng = make_rng(99, s);
    auto r = quantum_phase(10048, paper_source(), paper_policy(), rng);
    const TokenRecord& rec = std::get<TokenRecord>(r);
    EXPECT_EQ(rec.lambda.size(), 10048u);
    const TransactionResult t = run_token_transaction(rec, random_bit(rng), 0.094);
    EXPECT_TRUE(t.at_b.accepted);
    EXPECT_LE(t.at_b.error_rate, 0.094);
    EXPECT_GE(t.at_b.error_rate, 0.052);
    EXPECT_LE(t.at_b.error_rate, 0.068);
    sum += t.at_b.error_rate;
  }
  EXPECT_NEAR(sum / 20, 0.060, 0.005);
}

TEST(Transaction, Qt1SelectorPerPulse) {
  MeasurementPolicy pol;
  pol.scheme = Scheme::QT1;
  Rng rng(5);
  const TokenRecord rec = std::get<TokenRecord>(quantum_phase(800, SourceParams{}, pol, rng));
  ASSERT_EQ(rec.z.size(), 800u);
  for (int b = 0; b < 2; ++b) {
    const TransactionResult t = run_token_transaction(rec, b, 0.094);
    ASSERT_EQ(t.choice.c.size(), 800u);
    for (std::size_t k = 0; k < 800; ++k) EXPECT_EQ(t.choice.c[k], b ^ rec.z[k]);
    EXPECT_TRUE(t.at_b.accepted);
    EXPECT_FALSE(t.at_other.accepted);
  }
}

TEST(Transaction, PresentationBitIndependentOfLocation) {
  // c = b xor z with z uniform: the 2x2 table of (b, c) must be flat.
  int table[2][2] = {};
  Rng choose(6);
  for (std::uint64_t s = 0; s < 4000; ++s) {
    Rng rng = make_rng(7, s);
    const TokenRecord rec = std::get<TokenRecord>(quantum_phase(16, SourceParams{}, MeasurementPolicy{}, rng));
    const int b = random_bit(choose);
    ++table[b][make_presentation(rec, b).c[0]];
  }
  double chi2 = 0.0;
  const int rows[2] = {table[0][0] + table[0][1], table[1][0] + table[1][1]};
  const int cols[2] = {table[0][0] + table[1][0], table[0][1] + table[1][1]};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double e = rows[i] * static_cast<double>(cols[j]) / 4000.0;
      chi2 += (table[i][j] - e) * (table[i][j] - e) / e;
    }
  }
  EXPECT_LT(chi2, 10.83);  // 1 dof, p = 0.001
}

TEST(Transaction, HonestRejectionBelowCorrectnessBound) {
  SchemeParams p;
  p.N = p.n = 500;
  p.E = 0.07;
  p.gamma_err = 0.094;
  p.nu_cor = 0.3;
  const double bound = epsilon_cor(p).total;
  SourceParams src;
  src.error_rates = {0.07, 0.07, 0.07, 0.07};
  const int trials = 3000;
  int rejected = 0;
  for (int s = 0; s < trials; ++s) {
    Rng rng = make_rng(8, s);
    const TokenRecord rec = std::get<TokenRecord>(quantum_phase(500, src, MeasurementPolicy{}, rng));
    rejected += !run_token_transaction(rec, s % 2, p.gamma_err).at_b.accepted;
  }
  EXPECT_LE(static_cast<double>(rejected) / trials, bound);
}

TEST(QuantumPhase, AbortWhenLossesExceedThreshold) {
  MeasurementPolicy pol;
  pol.report_losses = true;
  pol.gamma_det = 0.5;
  pol.detector = {1.0, 0.0};
  Rng rng(9);
  const auto r = quantum_phase(100, SourceParams{}, pol, rng);
  ASSERT_TRUE(std::holds_alternative<Abort>(r));
  EXPECT_EQ(std::get<Abort>(r).reported, 0u);
  EXPECT_DOUBLE_EQ(std::get<Abort>(r).required, 50.0);
}

TEST(QuantumPhase, ZeroSizeRejected) {
  Rng rng(10);
  EXPECT_THROW(quantum_phase(0, SourceParams{}, MeasurementPolicy{}, rng), std::invalid_argument);
}

TEST(Crosscheck, HonestValidatesOnlyAtB) {
  CrosscheckSetup setup;
  setup.topology.l_fibre_m = setup.topology.d_direct_m = 2766;
  for (int b = 0; b < 2; ++b) {
    Rng rng(11);
    const CrosscheckTranscript t = run_crosscheck_protocol(setup, b, rng);
    EXPECT_TRUE(t.validated[b]);
    EXPECT_FALSE(t.validated[b ^ 1]);
    EXPECT_EQ(t.r_seen[b], 0);
  }
}

TEST(Crosscheck, DoubleSpendBlocked) {
  CrosscheckSetup setup;
  setup.topology.l_fibre_m = setup.topology.d_direct_m = 2766;
  setup.present_at_both = true;
  Rng rng(12);
  const CrosscheckTranscript t = run_crosscheck_protocol(setup, 0, rng);
  EXPECT_FALSE(t.validated[0]);
  EXPECT_FALSE(t.validated[1]);
  EXPECT_EQ(t.r_seen[0], 1);
  EXPECT_EQ(t.r_seen[1], 1);
}

TEST(Crosscheck, TransactionTimeIsTwiceCommunication) {
  CrosscheckSetup setup;
  setup.topology.l_fibre_m = setup.topology.d_direct_m = 2766;
  Rng rng(13);
  const CrosscheckTranscript t = run_crosscheck_protocol(setup, 1, rng);
  EXPECT_EQ(t.dt_tran, 2 * setup.topology.comm_ns());
  EXPECT_EQ(t.dt_tran, classical_times(setup.topology).dt_tran_c);
}

TEST(Crosscheck, FreeSpaceLinkUsesDirectDistance) {
  CrosscheckSetup setup;
  setup.topology.l_fibre_m = 60540;
  setup.topology.d_direct_m = 51600;
  setup.free_space = true;
  Rng rng(14);
  EXPECT_EQ(run_crosscheck_protocol(setup, 0, rng).dt_tran, 344000);
}

TEST(Crosscheck, MessagesRespectLatency) {
  CrosscheckSetup setup;
  setup.topology.l_fibre_m = setup.topology.d_direct_m = 5000;
  setup.topology.t_bit_gap_s = 1e-6;
  setup.topology.window_s = 2e-6;
  Rng rng(15);
  const CrosscheckTranscript t = run_crosscheck_protocol(setup, 0, rng);
  for (const MessageLog& m : t.messages) {
    EXPECT_EQ(m.delivered_ns - m.sent_ns, m.latency_ns);
    EXPECT_GE(m.latency_ns, 0);
    if (m.from[0] == 'B' && m.to[0] == 'B') EXPECT_EQ(m.latency_ns, setup.topology.comm_ns());
  }
  for (std::size_t i = 1; i < t.events.size(); ++i) EXPECT_LE(t.events[i - 1].t_ns, t.events[i].t_ns);
}

TEST(Crosscheck, DeterministicTranscriptForSeed) {
  CrosscheckSetup setup;
  setup.topology.l_fibre_m = setup.topology.d_direct_m = 2766;
  Rng a(16), b(16);
  const CrosscheckTranscript x = run_crosscheck_protocol(setup, 1, a);
  const CrosscheckTranscript y = run_crosscheck_protocol(setup, 1, b);
  ASSERT_EQ(x.events.size(), y.events.size());
  for (std::size_t i = 0; i < x.events.size(); ++i) {
    EXPECT_EQ(x.events[i].name, y.events[i].name);
    EXPECT_EQ(x.events[i].t_ns, y.events[i].t_ns);
    EXPECT_EQ(x.events[i].digest, y.events[i].digest);
  }
}

TEST(TokenRecord, InconsistentSizesDetected) {
  TokenRecord rec = ideal_record(10, 17);
  rec.x.pop_back();
  EXPECT_THROW(rec.check(), std::logic_error);
}
