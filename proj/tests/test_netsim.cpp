#include <gtest/gtest.h>

#include "stoken/errors.hpp"
#include "stoken/netsim.hpp"

using namespace stoken;

namespace {

TimingTopology jinan() {
  TimingTopology t;
  t.l_fibre_m = t.d_direct_m = 2766;
  t.dt_proc_s = 1.506e-6;
  return t;
}

TimingTopology intercity() {
  TimingTopology t;
  t.l_fibre_m = 60540;
  t.d_direct_m = 51600;
  t.dt_proc_s = 1.5e-6;
  return t;
}

}  // namespace

TEST(EventLoop, TiesRunInSchedulingOrder) {
  EventLoop loop;
  std::vector<int> order;
  loop.schedule(5, [&] { order.push_back(1); });
  loop.schedule(5, [&] { order.push_back(2); });
  loop.schedule(3, [&] { order.push_back(0); });
  loop.run();
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(loop.now(), 5);
}

TEST(EventLoop, SendLogsLatencyAndDelivers) {
  EventLoop loop;
  SimTime at = -1;
  loop.schedule(10, [&] { loop.send("X", "Y", 7, [&] { at = loop.now(); }); });
  loop.run();
  EXPECT_EQ(at, 17);
  ASSERT_EQ(loop.messages().size(), 1u);
  EXPECT_EQ(loop.messages()[0].sent_ns, 10);
  EXPECT_EQ(loop.messages()[0].latency_ns, 7);
}

TEST(EventLoop, PastTimesClampToNow) {
  EventLoop loop;
  SimTime at = -1;
  loop.schedule(10, [&] { loop.schedule(5, [&] { at = loop.now(); }); });
  loop.run();
  EXPECT_EQ(at, 10);
}

TEST(FibreTransaction, JinanTime) { EXPECT_EQ(simulate_transaction(jinan()).dt_tran, 15336); }

TEST(FibreTransaction, ZeroFibreGivesProcessingTime) {
  TimingTopology t;
  t.dt_proc_s = 1.5e-6;
  EXPECT_EQ(simulate_transaction(t).dt_tran, 1500);
}

TEST(FibreTransaction, IntercityTime) { EXPECT_EQ(simulate_transaction(intercity()).dt_tran, 304200); }

TEST(FibreTransaction, CausalOrderOfTrace) {
  const TransactionTiming t = simulate_transaction(jinan());
  for (std::size_t i = 1; i < t.trace.size(); ++i) EXPECT_LE(t.trace[i - 1].t_ns, t.trace[i].t_ns);
  EXPECT_EQ(t.t_arrive - t.t_bit, jinan().comm_ns());
  for (const MessageLog& m : t.messages) EXPECT_EQ(m.delivered_ns, m.sent_ns + m.latency_ns);
}

TEST(FibreTransaction, BitGapShiftsEndTime) {
  TimingTopology t = jinan();
  t.t_bit_gap_s = 2e-6;
  EXPECT_EQ(simulate_transaction(t).dt_tran, 15336 + 2000);
}

TEST(ClassicalTimes, PublishedValues) {
  EXPECT_EQ(classical_times(jinan()).dt_tran_c, 27660);
  EXPECT_EQ(classical_times(intercity()).dt_tran_cf, 344000);
}

TEST(ClassicalTimes, EqualSpeedsGiveEqualTimes) {
  TimingTopology t;
  t.l_fibre_m = t.d_direct_m = 1000;
  t.c_fibre = t.c_vac = 2.5e8;
  const ClassicalTimes c = classical_times(t);
  EXPECT_EQ(c.dt_tran_c, c.dt_tran_cf);
}

TEST(Advantage, JinanQuantumAdvantage) { EXPECT_EQ(advantage(jinan()).qa, 12324); }

TEST(Advantage, IntercityComparativeAdvantage) {
  // 344 - 304.2 with the published processing delay of 1.5 us.
  EXPECT_EQ(advantage(intercity()).ca, 39800);
  TimingTopology t = intercity();
  t.dt_proc_s = 1.502e-6;
  EXPECT_EQ(advantage(t).ca, 39798);
}

TEST(Advantage, Thresholds) {
  EXPECT_NEAR(qa_threshold_length_m(1.5e-6, 2e8), 300.0, 1e-9);
  EXPECT_NEAR(ca_threshold_distance_m(1.5e-6, 2e8, 3e8), 900.0, 1e-9);
  TimingTopology t;
  t.l_fibre_m = t.d_direct_m = 300.0;
  EXPECT_EQ(advantage(t).qa, 0);
  t.l_fibre_m = t.d_direct_m = 900.0;
  EXPECT_EQ(advantage(t).ca, 0);
}

TEST(TimingTopology, Validation) {
  TimingTopology t = jinan();
  t.l_fibre_m = 100;
  EXPECT_THROW(t.validate(), ConfigError);
  t = jinan();
  t.c_fibre = 4e8;
  EXPECT_THROW(t.validate(), ConfigError);
  t = jinan();
  t.dt_proc_s = -1;
  EXPECT_THROW(t.validate(), ConfigError);
}
