#pragma once

#include <array>
#include <cstdint>

#include "stoken/qubit.hpp"
#include "stoken/rng.hpp"

namespace stoken {

struct SourceParams {
  double beta_pb = 0.0;
  double beta_ps = 0.0;
  int sign_pb = +1;  // Pr[u=0] = 1/2 + sign_pb*beta_pb
  int sign_ps = +1;  // Pr[t=0] = 1/2 + sign_ps*beta_ps
  double theta = 0.0;  // radians
  double p_theta = 0.0;
  double p_noqub = 0.0;
  std::array<double, 4> error_rates{};  // E_tu at index 2t+u

  double max_error() const;
  void validate() const;  // throws ConfigError
};

struct PoissonSourceParams {
  double mu = 0.0;
  double eta_a0 = 1.0;
  double eta_a1 = 1.0;
  double eta_b = 1.0;
  double d_a0 = 0.0;
  double d_a1 = 0.0;
  double d_b = 0.0;
  double q_split = 0.5;
  double f_sys = 5e5;  // Hz

  double eta_a() const { return q_split * eta_a0 + (1.0 - q_split) * eta_a1; }
  void validate() const;
};

struct PreparedPulse {
  BB84Label label;
  DensityMatrix2 state;
  bool is_multiphoton = false;
  bool outside_cone = false;  // drawn from the P_theta tail
  double deviation_angle = 0.0;
};

PreparedPulse sample_pulse(const SourceParams& params, Rng& rng);

struct DetectionEvent {
  bool heralded = false;
  bool alice_click0 = false;
  bool alice_click1 = false;
  int pairs = 0;
};

DetectionEvent sample_detection_event(const PoissonSourceParams& params, Rng& rng);

struct DetectionCounts {
  std::uint64_t pulses = 0;
  std::uint64_t n_a = 0;  // Alice: at least one click
  std::uint64_t n_b = 0;  // Bob herald
  std::uint64_t n_c = 0;  // herald and Alice click
  std::uint64_t n_b_multi = 0;  // heralded with two or more pairs
};

// Same law as repeated sample_detection_event, but skips the empty pulses
// geometrically; suited to 1e8+ pulses.
DetectionCounts simulate_detection_counts(const PoissonSourceParams& params, std::uint64_t pulses,
                                          Rng& rng);

// Pr[two or more pairs | herald], closed form.
double multiphoton_given_herald(const PoissonSourceParams& params);

}  // namespace stoken
