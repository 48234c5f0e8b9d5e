#include "stoken/protocol.hpp"

#include <array>
#include <memory>
#include <stdexcept>

namespace stoken {

std::string bits_to_string(const Bits& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t k = 0; k < bits.size(); ++k) s[k] = bits[k] ? '1' : '0';
  return s;
}

void TokenRecord::check() const {
  const std::size_t n = t.size();
  if (u.size() != n || x.size() != n || x_dummy.size() != n) {
    throw std::logic_error("token record strings differ in length");
  }
  if (z.size() != 1 && z.size() != n) throw std::logic_error("token record basis choice malformed");
  for (std::size_t k : lambda) {
    if (k >= n) throw std::logic_error("loss set index out of range");
  }
}

QuantumPhaseResult quantum_phase(std::size_t n, const SourceParams& source,
                                 const MeasurementPolicy& policy, Rng& rng) {
  if (n == 0) throw std::invalid_argument("token size N must be at least 1");
  std::vector<PreparedPulse> pulses;
  pulses.reserve(n);
  for (std::size_t k = 0; k < n; ++k) pulses.push_back(sample_pulse(source, rng));
  MeasurementOutcome m = run_measurement_phase(pulses, policy, source, rng);
  if (m.abort_eligible) return Abort{m.lambda.size(), policy.gamma_det * static_cast<double>(n)};

  TokenRecord rec;
  rec.scheme = policy.scheme;
  rec.t.resize(n);
  rec.u.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    rec.t[k] = static_cast<std::uint8_t>(pulses[k].label.t);
    rec.u[k] = static_cast<std::uint8_t>(pulses[k].label.u);
  }
  rec.z = std::move(m.bases);
  rec.x = std::move(m.x);
  rec.lambda = std::move(m.lambda);
  rec.x_dummy.resize(n);
  for (auto& bit : rec.x_dummy) bit = static_cast<std::uint8_t>(random_bit(rng));
  return rec;
}

PresentationChoice make_presentation(const TokenRecord& record, int b) {
  PresentationChoice p;
  p.b = b;
  p.c.resize(record.z.size());
  for (std::size_t k = 0; k < record.z.size(); ++k) p.c[k] = static_cast<std::uint8_t>(record.z[k] ^ b);
  return p;
}

ValidationResult validate(const Bits& presented, const TokenRecord& record, const Bits& d_i,
                          double gamma_err) {
  if (presented.size() != record.size()) throw std::invalid_argument("presented token has wrong length");
  if (d_i.size() != 1 && d_i.size() != record.size()) {
    throw std::invalid_argument("basis selector has wrong length");
  }
  ValidationResult r;
  for (std::size_t k : record.lambda) {
    const int d = d_i.size() == 1 ? d_i[0] : d_i[k];
    if (record.u[k] != d) continue;
    ++r.n_i;
    if (presented[k] != record.t[k]) ++r.n_errors;
  }
  if (r.n_i == 0) throw std::invalid_argument("no matched-basis positions");
  r.error_rate = static_cast<double>(r.n_errors) / static_cast<double>(r.n_i);
  r.accepted = static_cast<double>(r.n_errors) <= gamma_err * static_cast<double>(r.n_i);
  return r;
}

ValidationResult validate(const Bits& presented, const TokenRecord& record, int d_i,
                          double gamma_err) {
  if (d_i != 0 && d_i != 1) throw std::invalid_argument("d_i must be a bit");
  return validate(presented, record, Bits{static_cast<std::uint8_t>(d_i)}, gamma_err);
}

TransactionResult run_token_transaction(const TokenRecord& record, int b, double gamma_err) {
  TransactionResult out;
  out.choice = make_presentation(record, b);
  for (int i = 0; i < 2; ++i) {
    Bits d = out.choice.c;
    for (auto& bit : d) bit ^= static_cast<std::uint8_t>(i);
    const ValidationResult r = validate(i == b ? record.x : record.x_dummy, record, d, gamma_err);
    (i == b ? out.at_b : out.at_other) = r;
  }
  return out;
}

CrosscheckTranscript run_crosscheck_protocol(const CrosscheckSetup& setup, int b, Rng& rng) {
  if (setup.password_bits == 0) throw std::invalid_argument("password length must be at least 1");
  const TimingTopology& topo = setup.topology;
  const SimTime link = setup.free_space ? topo.free_space_ns() : topo.comm_ns();
  const SimTime gap = seconds_to_ns(topo.t_bit_gap_s);
  const SimTime window = seconds_to_ns(topo.window_s);

  Bits y(setup.password_bits);
  for (auto& bit : y) bit = static_cast<std::uint8_t>(random_bit(rng));
  const std::string password = bits_to_string(y);

  struct Node {
    std::string received;
    bool got_token = false;
    int r_other = -1;
  };
  auto nodes = std::make_shared<std::array<Node, 2>>();
  EventLoop loop;
  CrosscheckTranscript out;
  const char* bob[2] = {"B0", "B1"};
  const char* alice[2] = {"A0", "A1"};

  // step 1, completed before T_begin,C
  loop.schedule(0, [&] {
    loop.record("password_distribution", "B0", password);
    loop.send("B0", "B1", link, [&] { loop.record("password_received", "B1", password); });
    loop.send("B0", "A0", 0, [&] {
      loop.send("A0", "A1", link, [&] { loop.record("password_received", "A1", password); });
    });
  });
  const SimTime t_begin = link;
  const SimTime t_bit = t_begin + gap;
  const SimTime t_present = t_bit + link;
  loop.schedule(t_begin, [&] {
    out.t_begin = loop.now();
    const std::string payload(1, static_cast<char>('0' + b));
    loop.record("obtain_b", "A0", payload);
    loop.send("A0", "A1", link, [&, payload] { loop.record("receive_b", "A1", payload); });
  });
  loop.schedule(t_bit, [&] {
    loop.record("indicate_t_bit", "A0");
    loop.send("A0", "B0", 0, [&] { loop.record("t_bit_noted", "B0"); });
  });
  for (int i = 0; i < 2; ++i) {
    if (i != b && !setup.present_at_both) continue;
    loop.schedule(t_present, [&, i] {
      // local hand-over at L_i is instantaneous
      loop.record("present_password", alice[i], password);
      (*nodes)[i].received = password;
      (*nodes)[i].got_token = true;
    });
  }
  for (int i = 0; i < 2; ++i) {
    loop.schedule(t_present + window, [&, i] {
      const int r = (*nodes)[i].got_token ? 1 : 0;
      const std::string payload(1, static_cast<char>('0' + r));
      loop.record("send_r", bob[i], payload);
      loop.send(bob[i], bob[i ^ 1], link, [&, i, r] { (*nodes)[i ^ 1].r_other = r; });
    });
  }
  // Armed after both r_i are in flight so the deliveries precede the decisions.
  for (int i = 0; i < 2; ++i) {
    loop.schedule(t_present + window, [&, i] {
      loop.schedule(loop.now() + link, [&, i] {
        Node& n = (*nodes)[i];
        out.r_seen[i] = n.r_other;
        out.validated[i] = n.got_token && n.received == password && n.r_other == 0;
        loop.record(out.validated[i] ? "validate" : "reject", bob[i]);
        out.t_end = loop.now();
      });
    });
  }
  loop.run();
  out.dt_tran = out.t_end - out.t_begin;
  out.events = loop.trace();
  out.messages = loop.messages();
  return out;
}

}  // namespace stoken
