#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "stoken/measurement.hpp"
#include "stoken/netsim.hpp"
#include "stoken/rng.hpp"
#include "stoken/source_model.hpp"

namespace stoken {

using Bits = std::vector<std::uint8_t>;

struct TokenRecord {
  Scheme scheme = Scheme::QT2;
  Bits t;
  Bits u;
  Bits z;  // one bit for QT2, N basis bits for QT1
  Bits x;
  Bits x_dummy;
  std::vector<std::size_t> lambda;

  std::size_t size() const { return t.size(); }
  int z_at(std::size_t k) const { return z.size() == 1 ? z[0] : z[k]; }
  void check() const;  // throws std::logic_error on inconsistent sizes
};

struct Abort {
  std::size_t reported = 0;
  double required = 0.0;
};

using QuantumPhaseResult = std::variant<TokenRecord, Abort>;

QuantumPhaseResult quantum_phase(std::size_t n, const SourceParams& source,
                                 const MeasurementPolicy& policy, Rng& rng);

// c = b xor z; per pulse under QT1.
struct PresentationChoice {
  int b = 0;
  Bits c;
};

PresentationChoice make_presentation(const TokenRecord& record, int b);

struct ValidationResult {
  bool accepted = false;
  std::size_t n_errors = 0;
  std::size_t n_i = 0;
  double error_rate = 0.0;
};

// Delta_i = {k in Lambda | u_k = d_i}; accept iff n_errors <= gamma_err * n_i.
ValidationResult validate(const Bits& presented, const TokenRecord& record, int d_i,
                          double gamma_err);
// Per-pulse selector d_i (QT1); a single-entry selector applies to every pulse.
ValidationResult validate(const Bits& presented, const TokenRecord& record, const Bits& d_i,
                          double gamma_err);

struct TransactionResult {
  PresentationChoice choice;
  ValidationResult at_b;
  ValidationResult at_other;
};

TransactionResult run_token_transaction(const TokenRecord& record, int b, double gamma_err);

struct CrosscheckSetup {
  TimingTopology topology;
  bool free_space = false;  // light-speed straight link instead of the fibre
  std::size_t password_bits = 64;
  bool present_at_both = false;
};

struct CrosscheckTranscript {
  std::vector<TraceEvent> events;
  std::vector<MessageLog> messages;
  bool validated[2] = {false, false};
  int r_seen[2] = {0, 0};  // r_{i xor 1} as received by B_i
  SimTime t_begin = 0;
  SimTime t_end = 0;
  SimTime dt_tran = 0;
};

CrosscheckTranscript run_crosscheck_protocol(const CrosscheckSetup& setup, int b, Rng& rng);

std::string bits_to_string(const Bits& bits);

}  // namespace stoken
