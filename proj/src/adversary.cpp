#include "stoken/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "stoken/binomial.hpp"
#include "stoken/errors.hpp"

namespace stoken {

GuessBits guess_bits(int guess) {
  static constexpr GuessBits kTable[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  if (guess < 0 || guess > 3) throw std::invalid_argument("guess index must lie in 0..3");
  return kTable[guess];
}

GuessPovm optimal_guess_povm(const Ensemble& e) {
  std::array<Mat2, 4> q;
  Mat2 sum{};
  for (int j = 0; j < 4; ++j) {
    q[j] = max_confidence(e.r[j], e.chi[j], e.rho).q;
    sum = sum + q[j];
  }
  const double scale = to_pauli(sum).lambda_max();
  GuessPovm out;
  double trace_sum = 0.0;
  Mat2 used{};
  for (int j = 0; j < 4; ++j) {
    out.m[j] = q[j] * (1.0 / scale);
    used = used + out.m[j];
    trace_sum += out.m[j].trace().real();
  }
  const Mat2 deficit = Mat2::identity() - used;  // PSD since lambda_max(used) = 1
  for (int j = 0; j < 4; ++j) {
    out.m[j] = out.m[j] + deficit * (out.m[j].trace().real() / trace_sum);
  }
  return out;
}

std::array<double, 4> guess_distribution(const GuessPovm& povm, const DensityMatrix2& state) {
  std::array<double, 4> p{};
  double total = 0.0;
  for (int j = 0; j < 4; ++j) {
    p[j] = std::max(0.0, trace_product(povm.m[j], state.matrix()));
    total += p[j];
  }
  for (double& v : p) v /= total;
  return p;
}

namespace {

int sample_index(const std::array<double, 4>& p, Rng& rng) {
  double u = uniform01(rng);
  for (int j = 0; j < 3; ++j) {
    if (u < p[j]) return j;
    u -= p[j];
  }
  return 3;
}

}  // namespace

int optimal_pulse_guess(const GuessPovm& povm, const DensityMatrix2& received, Rng& rng) {
  return sample_index(guess_distribution(povm, received), rng);
}

double pulse_success_probability(const GuessPovm& povm, const std::array<DensityMatrix2, 4>& states,
                                 const std::array<double, 4>& q) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto p = guess_distribution(povm, states[i]);
    s += q[i] * (p[i] + p[(i + 3) % 4]);
  }
  return s;
}

void ForgingStrategy::validate() const {
  if (kind == StrategyKind::MeasureOneBasis && basis != 0 && basis != 1) {
    throw ConfigError("measure_one_basis needs basis 0 or 1");
  }
}

const char* strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::PerPulseMaxConfidence:
      return "per_pulse_max_confidence";
    case StrategyKind::RandomGuess:
      return "random_guess";
    case StrategyKind::MeasureOneBasis:
      return "measure_one_basis";
  }
  return "?";
}

StrategyKind strategy_from_name(const std::string& name) {
  for (StrategyKind k : {StrategyKind::PerPulseMaxConfidence, StrategyKind::RandomGuess,
                         StrategyKind::MeasureOneBasis}) {
    if (name == strategy_name(k)) return k;
  }
  throw ConfigError("unknown forging strategy '" + name + "'");
}

Ensemble nominal_ensemble(const SourceParams& source) {
  std::array<DensityMatrix2, 4> s;
  for (int i = 0; i < 4; ++i) s[i] = bb84_state(BB84Label{i / 2, i % 2});
  const double p_u0 = 0.5 + source.sign_pb * source.beta_pb;
  const double p_t0 = 0.5 + source.sign_ps * source.beta_ps;
  return build_ensemble(s, priors_from_bias(p_t0, p_u0));
}

ForgeTrialResult forge_trial(const ForgeSetup& setup, const ForgingStrategy& strategy,
                             const GuessPovm& povm, Rng& rng) {
  ForgeTrialResult r;
  for (std::size_t k = 0; k < setup.n_pulses; ++k) {
    const PreparedPulse pulse = sample_pulse(setup.source, rng);
    const bool revealed = pulse.is_multiphoton || pulse.outside_cone;
    int a[2];
    if (revealed) {
      a[0] = a[1] = pulse.label.t;
    } else {
      switch (strategy.kind) {
        case StrategyKind::PerPulseMaxConfidence: {
          const GuessBits g = guess_bits(optimal_pulse_guess(povm, pulse.state, rng));
          a[0] = g.a0;
          a[1] = g.a1;
          break;
        }
        case StrategyKind::RandomGuess:
          a[0] = random_bit(rng);
          a[1] = random_bit(rng);
          break;
        case StrategyKind::MeasureOneBasis: {
          const int w = strategy.basis;
          const int o = bernoulli(rng, measure_prob(pulse.state, w, 1)) ? 1 : 0;
          a[w] = o;
          a[w ^ 1] = random_bit(rng);
          break;
        }
      }
    }
    // With c = 0, B_0 checks u = 0 positions and B_1 checks u = 1 positions.
    const int u = pulse.label.u;
    const bool wrong = a[u] != pulse.label.t;
    if (u == 0) {
      ++r.n_0;
      r.errors_0 += wrong;
    } else {
      ++r.n_1;
      r.errors_1 += wrong;
    }
  }
  auto accept = [&](std::size_t errors, std::size_t n) {
    return n > 0 && static_cast<double>(errors) <= setup.gamma_err * static_cast<double>(n);
  };
  r.accepted_at_0 = accept(r.errors_0, r.n_0);
  r.accepted_at_1 = accept(r.errors_1, r.n_1);
  return r;
}

ForgeEstimate make_forge_estimate(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw ConfigError("at least one trial required");
  ForgeEstimate e;
  e.trials = trials;
  e.successes = successes;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  e.estimate = p;
  e.sigma = std::sqrt(p * (1.0 - p) / n);
  const double z = 2.5758293035489004;  // two-sided 99%
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  e.ci99_low = std::max(0.0, centre - half);
  e.ci99_high = std::min(1.0, centre + half);
  return e;
}

ForgeEstimate monte_carlo_forge(const ForgeSetup& setup, const ForgingStrategy& strategy,
                                std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  if (trials == 0) throw ConfigError("at least one trial required");
  if (setup.n_pulses == 0) throw ConfigError("forging needs at least one pulse");
  strategy.validate();
  setup.source.validate();
  const GuessPovm povm = optimal_guess_povm(nominal_ensemble(setup.source));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

  std::vector<std::uint64_t> wins(threads, 0);
  auto work = [&](unsigned w) {
    for (std::uint64_t k = w; k < trials; k += threads) {
      Rng rng = make_rng(seed, k);
      const ForgeTrialResult r = forge_trial(setup, strategy, povm, rng);
      wins[w] += r.accepted_at_0 && r.accepted_at_1;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  std::uint64_t total = 0;
  for (auto v : wins) total += v;
  return make_forge_estimate(total, trials);
}

double coin_bound_oracle(std::int64_t n, const std::vector<double>& probs) {
  if (probs.size() > 10000) throw std::invalid_argument("coin oracle limited to 1e4 coins");
  if (n < 0) return 0.0;
  const std::size_t cap = std::min<std::size_t>(static_cast<std::size_t>(n), probs.size());
  // f[k] = Pr[exactly k failures so far], truncated at cap.
  // long double keeps the accumulated rounding below 1e-12 at 1e4 coins
  std::vector<long double> f(cap + 1, 0.0L);
  f[0] = 1.0L;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("coin probabilities must lie in [0,1]");
    const long double lp = p, lq = 1.0L - lp;
    for (std::size_t k = cap; k > 0; --k) f[k] = f[k] * lp + f[k - 1] * lq;
    f[0] *= lp;
  }
  long double s = 0.0L;
  for (long double v : f) s += v;
  return std::min(1.0, static_cast<double>(s));
}

double random_guess_forge_probability(std::int64_t n_pulses, double gamma_err, double p_u0) {
  if (n_pulses < 1) throw std::invalid_argument("need at least one pulse");
  auto accept = [&](std::int64_t m) {
    if (m == 0) return 0.0;
    const auto k = static_cast<std::int64_t>(std::floor(gamma_err * static_cast<double>(m) + 1e-12));
    return binomial_cdf(m, std::min(k, m), 0.5);
  };
  double s = 0.0;
  for (std::int64_t m = 1; m < n_pulses; ++m) {
    const double w = std::exp(log_choose(n_pulses, m) + m * std::log(p_u0) +
                              (n_pulses - m) * std::log1p(-p_u0));
    s += w * accept(m) * accept(n_pulses - m);
  }
  return s;
}

TheoremBound forge_theorem_bound(std::int64_t n_pulses, double gamma_err, double p_bound,
                                 double p_noqub_theta_value) {
  TheoremBound out;
  if (!(gamma_err < 1.0) || !(p_bound < 1.0)) return out;
  SchemeParams p;
  p.N = n_pulses;
  p.n = n_pulses;
  p.gamma_err = gamma_err;
  p.gamma_det = 1.0;
  p.p_noqub = p_noqub_theta_value;
  p.p_theta = 0.0;
  const auto best = best_nu_unf(p, p_bound);
  if (!best || !(best->eps.total < 1.0)) return out;
  out.value = best->eps.total;
  out.capped = false;
  out.nu_unf = best->nu_unf;
  return out;
}

}  // namespace stoken
