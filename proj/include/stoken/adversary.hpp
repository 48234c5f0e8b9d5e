#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "stoken/bounds.hpp"
#include "stoken/qubit.hpp"
#include "stoken/rng.hpp"
#include "stoken/source_model.hpp"

namespace stoken {

// Guess j claims the pair {j, j+1 mod 4}; its bits per basis follow from that pair.
struct GuessBits {
  int a0 = 0;  // bit claimed for basis 0
  int a1 = 0;  // bit claimed for basis 1
};
GuessBits guess_bits(int guess);

// Four-outcome POVM; element j is the rank-1 max-confidence operator for chi_j,
// scaled by 1/lambda_max(sum Q) and completed by the deficit split in
// proportion to the traces.
struct GuessPovm {
  std::array<Mat2, 4> m;
};
GuessPovm optimal_guess_povm(const Ensemble& e);

// Pr[guess = j] for each j when the received state is `state`.
std::array<double, 4> guess_distribution(const GuessPovm& povm, const DensityMatrix2& state);

// Samples a guess in 0..3 for one received pulse.
int optimal_pulse_guess(const GuessPovm& povm, const DensityMatrix2& received, Rng& rng);

// Exact success sum_i q_i Pr[guess in {i-1, i} | rho_i].
double pulse_success_probability(const GuessPovm& povm, const std::array<DensityMatrix2, 4>& states,
                                 const std::array<double, 4>& q);

enum class StrategyKind { PerPulseMaxConfidence, RandomGuess, MeasureOneBasis };

struct ForgingStrategy {
  StrategyKind kind = StrategyKind::PerPulseMaxConfidence;
  int basis = 0;  // MeasureOneBasis only

  void validate() const;
};

const char* strategy_name(StrategyKind kind);
StrategyKind strategy_from_name(const std::string& name);  // throws ConfigError

struct ForgeTrialResult {
  bool accepted_at_0 = false;
  bool accepted_at_1 = false;
  std::size_t errors_0 = 0;
  std::size_t errors_1 = 0;
  std::size_t n_0 = 0;
  std::size_t n_1 = 0;
};

struct ForgeSetup {
  std::size_t n_pulses = 200;
  double gamma_err = 0.094;
  SourceParams source;  // pulses the adversary receives
};

// One double-presentation attempt with c = 0; the adversary never reports a loss.
// Multiphoton and tail-deviated pulses reveal (t, u) to the adversary.
ForgeTrialResult forge_trial(const ForgeSetup& setup, const ForgingStrategy& strategy,
                             const GuessPovm& povm, Rng& rng);

struct ForgeEstimate {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  double sigma = 0.0;    // binomial standard error
  double ci99_low = 0.0;  // Wilson interval
  double ci99_high = 0.0;
};

ForgeEstimate make_forge_estimate(std::uint64_t successes, std::uint64_t trials);

// Trial k draws from make_rng(seed, k); counts merge independently of `threads`.
ForgeEstimate monte_carlo_forge(const ForgeSetup& setup, const ForgingStrategy& strategy,
                                std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

// Nominal ensemble the adversary assumes: ideal BB84 states with the source's priors.
Ensemble nominal_ensemble(const SourceParams& source);

// Pr[at most n failures] for independent coins with success probabilities probs.
double coin_bound_oracle(std::int64_t n, const std::vector<double>& probs);

// Exact forging probability of the random-guess strategy with c = 0.
double random_guess_forge_probability(std::int64_t n_pulses, double gamma_err, double p_u0);

// Best epsilon_unf over nu_unf with n = N; 1 when no admissible nu_unf exists.
struct TheoremBound {
  double value = 1.0;
  bool capped = true;
  double nu_unf = 0.0;
};
TheoremBound forge_theorem_bound(std::int64_t n_pulses, double gamma_err, double p_bound,
                                 double p_noqub_theta);

}  // namespace stoken
