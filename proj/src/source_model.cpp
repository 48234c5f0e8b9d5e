#include "stoken/source_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stoken/errors.hpp"

namespace stoken {

namespace {

void require_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0,1]");
}

void require_bias(double b, const char* name) {
  if (!(b >= 0.0 && b < 0.5)) throw ConfigError(std::string(name) + " must lie in [0,1/2)");
}

int biased_bit(Rng& rng, double beta, int sign) {
  // returns 0 with probability 1/2 + sign*beta
  return uniform01(rng) < 0.5 + sign * beta ? 0 : 1;
}

// Inverse-CDF Poisson draw restricted to k >= k_min (k_min in {0,1}).
int poisson_from(Rng& rng, double mu, int k_min) {
  const double e = std::exp(-mu);
  double pk = e;
  int k = 0;
  double mass = k_min == 0 ? 1.0 : -std::expm1(-mu);
  double target = uniform01(rng) * mass;
  if (k_min == 1) {
    k = 1;
    pk = e * mu;
  }
  double acc = pk;
  while (target >= acc && k < 1000) {
    ++k;
    pk *= mu / k;
    if (pk == 0.0) break;
    acc += pk;
  }
  return k;
}

struct PhotonClicks {
  bool a0 = false;
  bool a1 = false;
  bool b = false;
};

PhotonClicks detect_pairs(const PoissonSourceParams& p, int pairs, Rng& rng) {
  PhotonClicks c;
  for (int j = 0; j < pairs; ++j) {
    if (!c.b && bernoulli(rng, p.eta_b)) c.b = true;
    if (uniform01(rng) < p.q_split) {
      if (bernoulli(rng, p.eta_a0)) c.a0 = true;
    } else {
      if (bernoulli(rng, p.eta_a1)) c.a1 = true;
    }
  }
  return c;
}

}  // namespace

double SourceParams::max_error() const {
  return *std::max_element(error_rates.begin(), error_rates.end());
}

void SourceParams::validate() const {
  require_bias(beta_pb, "beta_pb");
  require_bias(beta_ps, "beta_ps");
  if (sign_pb != 1 && sign_pb != -1) throw ConfigError("sign_pb must be +1 or -1");
  if (sign_ps != 1 && sign_ps != -1) throw ConfigError("sign_ps must be +1 or -1");
  if (!(theta >= 0.0 && theta <= M_PI / 2)) throw ConfigError("theta must lie in [0, pi/2]");
  require_prob(p_theta, "p_theta");
  require_prob(p_noqub, "p_noqub");
  for (double e : error_rates) require_prob(e, "error rate");
  if (max_error() >= 1.0) throw ConfigError("maximum error rate E must be < 1");
}

void PoissonSourceParams::validate() const {
  if (!(mu > 0.0)) throw ConfigError("mu must be positive");
  require_prob(eta_a0, "eta_a0");
  require_prob(eta_a1, "eta_a1");
  require_prob(eta_b, "eta_b");
  require_prob(d_a0, "d_a0");
  require_prob(d_a1, "d_a1");
  require_prob(d_b, "d_b");
  require_prob(q_split, "q_split");
  if (!(f_sys > 0.0)) throw ConfigError("f_sys must be positive");
}

PreparedPulse sample_pulse(const SourceParams& params, Rng& rng) {
  PreparedPulse pulse;
  pulse.label.u = biased_bit(rng, params.beta_pb, params.sign_pb);
  pulse.label.t = biased_bit(rng, params.beta_ps, params.sign_ps);
  pulse.is_multiphoton = bernoulli(rng, params.p_noqub);
  const DensityMatrix2 ideal = bb84_state(pulse.label);
  pulse.state = ideal;
  if (pulse.is_multiphoton) return pulse;

  const bool tail = bernoulli(rng, params.p_theta);
  const double w = uniform01(rng);
  const double polar = tail ? params.theta * (2.0 - w) : params.theta * w;  // (θ,2θ] or [0,θ)
  const double azimuth = 2.0 * M_PI * uniform01(rng);
  if (polar > 0.0) pulse.state = deviate_on_cone(ideal, polar, azimuth);
  pulse.deviation_angle = polar;
  pulse.outside_cone = tail;
  return pulse;
}

DetectionEvent sample_detection_event(const PoissonSourceParams& params, Rng& rng) {
  DetectionEvent ev;
  ev.pairs = poisson_from(rng, params.mu, 0);
  const PhotonClicks c = detect_pairs(params, ev.pairs, rng);
  const bool dark_a0 = bernoulli(rng, params.d_a0);
  const bool dark_a1 = bernoulli(rng, params.d_a1);
  const bool dark_b = bernoulli(rng, params.d_b);
  ev.heralded = c.b || dark_b;
  ev.alice_click0 = c.a0 || dark_a0;
  ev.alice_click1 = c.a1 || dark_a1;
  return ev;
}

DetectionCounts simulate_detection_counts(const PoissonSourceParams& params, std::uint64_t pulses,
                                          Rng& rng) {
  DetectionCounts out;
  out.pulses = pulses;
  const double no_pair = std::exp(-params.mu);
  const double no_dark = (1.0 - params.d_a0) * (1.0 - params.d_a1) * (1.0 - params.d_b);
  const double with_pairs = -std::expm1(-params.mu);
  const double dark_only = no_pair * (1.0 - no_dark);
  const double p_any = with_pairs + dark_only;
  if (p_any <= 0.0) return out;
  const double log_skip = std::log1p(-p_any);

  std::uint64_t pos = 0;
  while (true) {
    if (p_any < 1.0) {
      const double g = std::floor(std::log1p(-uniform01(rng)) / log_skip);
      if (g >= static_cast<double>(pulses - pos)) break;
      pos += static_cast<std::uint64_t>(g);
    }
    if (pos >= pulses) break;
    ++pos;

    int pairs = 0;
    bool dark_a0 = false, dark_a1 = false, dark_b = false;
    if (uniform01(rng) * p_any < with_pairs) {
      pairs = poisson_from(rng, params.mu, 1);
      dark_a0 = bernoulli(rng, params.d_a0);
      dark_a1 = bernoulli(rng, params.d_a1);
      dark_b = bernoulli(rng, params.d_b);
    } else {
      // at least one dark click, conditioned sequentially
      const double d1 = params.d_a0, d2 = params.d_a1, d3 = params.d_b;
      if (uniform01(rng) * (1.0 - no_dark) < d1) {
        dark_a0 = true;
        dark_a1 = bernoulli(rng, d2);
        dark_b = bernoulli(rng, d3);
      } else if (uniform01(rng) * (1.0 - (1.0 - d2) * (1.0 - d3)) < d2) {
        dark_a1 = true;
        dark_b = bernoulli(rng, d3);
      } else {
        dark_b = true;
      }
    }
    const PhotonClicks c = detect_pairs(params, pairs, rng);
    const bool herald = c.b || dark_b;
    const bool alice = c.a0 || c.a1 || dark_a0 || dark_a1;
    out.n_a += alice;
    out.n_b += herald;
    out.n_c += herald && alice;
    out.n_b_multi += herald && pairs >= 2;
    if (pos >= pulses) break;
  }
  return out;
}

double multiphoton_given_herald(const PoissonSourceParams& p) {
  const double x = p.mu * p.eta_b;
  const double herald = p.d_b + (1.0 - p.d_b) * (-std::expm1(-x));
  const double low = std::exp(-p.mu) * (p.d_b * (1.0 + p.mu) + (1.0 - p.d_b) * x);
  return 1.0 - low / herald;
}

}  // namespace stoken
