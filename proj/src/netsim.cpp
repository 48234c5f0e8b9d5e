#include "stoken/netsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

#include "stoken/errors.hpp"

namespace stoken {

SimTime seconds_to_ns(double seconds) { return std::llround(seconds * 1e9); }

double ns_to_seconds(SimTime ns) { return static_cast<double>(ns) * 1e-9; }

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void EventLoop::schedule(SimTime at, std::function<void()> fn) {
  if (at < now_) at = now_;
  queue_.push(Pending{at, seq_++, std::move(fn)});
}

void EventLoop::send(const std::string& from, const std::string& to, SimTime latency,
                     std::function<void()> on_delivery) {
  const SimTime sent = now_;
  const SimTime due = now_ + latency;
  schedule(due, [this, from, to, sent, due, latency, fn = std::move(on_delivery)] {
    messages_.push_back(MessageLog{from, to, sent, due, latency});
    fn();
  });
}

void EventLoop::record(std::string name, std::string agent, std::string_view payload) {
  trace_.push_back(TraceEvent{std::move(name), std::move(agent), now_, fnv1a(payload)});
}

void EventLoop::run() {
  while (!queue_.empty()) {
    Pending p = queue_.top();
    queue_.pop();
    now_ = p.at;
    p.fn();
  }
}

void TimingTopology::validate() const {
  if (!(d_direct_m > 0.0)) throw ConfigError("d_direct_m must be positive");
  if (l_fibre_m < d_direct_m) throw ConfigError("l_fibre_m must be >= d_direct_m");
  if (!(c_fibre > 0.0 && c_vac > 0.0)) throw ConfigError("signal speeds must be positive");
  if (!(c_fibre < c_vac)) throw ConfigError("c_fibre must be below c_vac");
  if (dt_proc_s < 0.0 || t_bit_gap_s < 0.0 || window_s < 0.0) {
    throw ConfigError("processing time, bit gap and window must be nonnegative");
  }
}

TransactionTiming simulate_transaction(const TimingTopology& topo) {
  EventLoop loop;
  const SimTime comm = topo.comm_ns();
  const SimTime proc = topo.proc_ns();
  const SimTime gap = seconds_to_ns(topo.t_bit_gap_s);

  struct Validator {
    bool have_c = false;
    bool have_token = false;
    SimTime done = -1;
  };
  auto v = std::make_shared<std::array<Validator, 2>>();
  TransactionTiming out;

  auto try_validate = [&loop, v, proc](int i) {
    Validator& b = (*v)[i];
    if (!b.have_c || !b.have_token) return;
    const std::string agent = i == 0 ? "B0" : "B1";
    loop.schedule(loop.now() + proc, [&loop, v, i, agent] {
      (*v)[i].done = loop.now();
      loop.record("validation_complete", agent);
    });
  };

  loop.schedule(0, [&] {
    out.t_begin = loop.now();
    loop.record("obtain_b", "A0");
    loop.send("A0", "A1", comm, [&loop] { loop.record("receive_b", "A1"); });
  });
  loop.schedule(gap, [&] {
    out.t_bit = loop.now();
    loop.record("send_c", "A0");
    loop.send("A0", "B0", 0, [&] {
      loop.record("receive_c", "B0");
      (*v)[0].have_c = true;
      try_validate(0);
      loop.send("B0", "B1", comm, [&] {
        loop.record("receive_c", "B1");
        (*v)[1].have_c = true;
        try_validate(1);
      });
    });
    const SimTime t_present = loop.now() + comm;
    out.t_arrive = t_present;
    for (int i = 0; i < 2; ++i) {
      loop.schedule(t_present, [&, i] {
        const std::string agent = i == 0 ? "A0" : "A1";
        loop.record("present_token", agent);
        loop.send(agent, i == 0 ? "B0" : "B1", 0, [&, i] {
          (*v)[i].have_token = true;
          try_validate(i);
        });
      });
    }
  });
  loop.run();

  out.t_end = std::max((*v)[0].done, (*v)[1].done);
  out.dt_tran = out.t_end - out.t_begin;
  out.trace = loop.trace();
  out.messages = loop.messages();
  return out;
}

ClassicalTimes classical_times(const TimingTopology& topo) {
  ClassicalTimes c;
  c.dt_tran_c = 2 * topo.comm_ns();
  c.dt_tran_cf = seconds_to_ns(2.0 * topo.d_direct_m / topo.c_vac);
  return c;
}

AdvantageReport advantage(const TimingTopology& topo) {
  AdvantageReport r;
  r.dt_tran = simulate_transaction(topo).dt_tran;
  const ClassicalTimes c = classical_times(topo);
  r.dt_tran_c = c.dt_tran_c;
  r.dt_tran_cf = c.dt_tran_cf;
  r.qa = r.dt_tran_c - r.dt_tran;
  r.ca = r.dt_tran_cf - r.dt_tran;
  return r;
}

double qa_threshold_length_m(double dt_proc_s, double c_fibre) { return dt_proc_s * c_fibre; }

double ca_threshold_distance_m(double dt_proc_s, double c_fibre, double c_vac) {
  return dt_proc_s / (2.0 / c_vac - 1.0 / c_fibre);
}

}  // namespace stoken
