#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

namespace stoken {

using SimTime = std::int64_t;  // nanoseconds

SimTime seconds_to_ns(double seconds);
double ns_to_seconds(SimTime ns);

std::uint64_t fnv1a(std::string_view bytes);

struct TraceEvent {
  std::string name;
  std::string agent;
  SimTime t_ns = 0;
  std::uint64_t digest = 0;
};

struct MessageLog {
  std::string from;
  std::string to;
  SimTime sent_ns = 0;
  SimTime delivered_ns = 0;
  SimTime latency_ns = 0;
};

// Single-threaded event loop. Ties run in scheduling order.
class EventLoop {
 public:
  SimTime now() const { return now_; }
  void schedule(SimTime at, std::function<void()> fn);
  // Delivers fn after the channel latency and logs the message.
  void send(const std::string& from, const std::string& to, SimTime latency,
            std::function<void()> on_delivery);
  void record(std::string name, std::string agent, std::string_view payload = {});
  void run();

  const std::vector<TraceEvent>& trace() const { return trace_; }
  const std::vector<MessageLog>& messages() const { return messages_; }

 private:
  struct Pending {
    SimTime at;
    std::uint64_t seq;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  std::uint64_t seq_ = 0;
  SimTime now_ = 0;
  std::vector<TraceEvent> trace_;
  std::vector<MessageLog> messages_;
};

struct TimingTopology {
  double l_fibre_m = 0.0;
  double d_direct_m = 0.0;
  double c_fibre = 2e8;  // m/s
  double c_vac = 3e8;    // m/s
  double dt_proc_s = 1.5e-6;
  double t_bit_gap_s = 0.0;  // T_bit - T_begin
  double window_s = 0.0;     // presentation window length

  SimTime comm_ns() const { return seconds_to_ns(l_fibre_m / c_fibre); }
  SimTime free_space_ns() const { return seconds_to_ns(d_direct_m / c_vac); }
  SimTime proc_ns() const { return seconds_to_ns(dt_proc_s); }
  void validate() const;  // throws ConfigError
};

struct TransactionTiming {
  SimTime t_begin = 0;
  SimTime t_bit = 0;
  SimTime t_arrive = 0;
  SimTime t_end = 0;
  SimTime dt_tran = 0;
  std::vector<TraceEvent> trace;
  std::vector<MessageLog> messages;
};

// Steps 3-6 of the token transaction over the fibre link.
TransactionTiming simulate_transaction(const TimingTopology& topology);

struct ClassicalTimes {
  SimTime dt_tran_c = 0;
  SimTime dt_tran_cf = 0;
};

ClassicalTimes classical_times(const TimingTopology& topology);

struct AdvantageReport {
  SimTime dt_tran = 0;
  SimTime dt_tran_c = 0;
  SimTime dt_tran_cf = 0;
  SimTime qa = 0;
  SimTime ca = 0;
};

AdvantageReport advantage(const TimingTopology& topology);

// Fibre length where QA vanishes.
double qa_threshold_length_m(double dt_proc_s, double c_fibre);
// Distance where CA vanishes when the fibre runs straight (L = D).
double ca_threshold_distance_m(double dt_proc_s, double c_fibre, double c_vac);

}  // namespace stoken
