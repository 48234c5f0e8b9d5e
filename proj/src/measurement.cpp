#include "stoken/measurement.hpp"

#include <algorithm>
#include <stdexcept>

#include "stoken/errors.hpp"

namespace stoken {

DetectorModel paper_detector_model() {
  constexpr double n_b = 11467415.0;
  return DetectorModel{1348725.0 / n_b, 116.0 / n_b};
}

void MeasurementPolicy::validate() const {
  if (!(beta_e >= 0.0 && beta_e < 0.5)) throw ConfigError("beta_e must lie in [0,1/2)");
  if (sign_e != 1 && sign_e != -1) throw ConfigError("sign_e must be +1 or -1");
  if (!(gamma_det > 0.0 && gamma_det <= 1.0)) throw ConfigError("gamma_det must lie in (0,1]");
  if (!(detector.p_no_click >= 0.0 && detector.p_double_click >= 0.0 && detector.p_fill() <= 1.0)) {
    throw ConfigError("no-click and double-click probabilities must be nonnegative and sum to <= 1");
  }
}

double single_click_error(double e_tu, const DetectorModel& det) {
  const double fill = det.p_fill();
  if (fill >= 1.0) return 0.0;
  return std::clamp((e_tu - 0.5 * fill) / (1.0 - fill), 0.0, 1.0);
}

MeasuredPulse measure_pulse(const PreparedPulse& pulse, int basis, const SourceParams& source,
                            const DetectorModel& det, Rng& rng) {
  MeasuredPulse m;
  const double r = uniform01(rng);
  if (r < det.p_fill()) {
    m.detected = r >= det.p_no_click;  // double clicks count as detected
    m.assigned_random = true;
    m.x = random_bit(rng);
    return m;
  }
  if (basis == pulse.label.u) {
    const double err = single_click_error(source.error_rates[pulse.label.index()], det);
    m.x = bernoulli(rng, err) ? pulse.label.t ^ 1 : pulse.label.t;
    return m;
  }
  // multiphoton pulses already hold the ideal state
  m.x = bernoulli(rng, measure_prob(pulse.state, basis, 0)) ? 0 : 1;
  return m;
}

MeasurementOutcome run_measurement_phase(const std::vector<PreparedPulse>& pulses,
                                         const MeasurementPolicy& policy,
                                         const SourceParams& source, Rng& rng) {
  if (pulses.empty()) throw std::invalid_argument("measurement phase needs at least one pulse");
  const std::size_t n = pulses.size();
  MeasurementOutcome out;
  auto draw_basis = [&] {
    return static_cast<std::uint8_t>(uniform01(rng) < 0.5 + policy.sign_e * policy.beta_e ? 0 : 1);
  };
  if (policy.scheme == Scheme::QT2) out.bases.push_back(draw_basis());
  out.x.resize(n);
  out.detected.resize(n);
  out.assigned_random.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (policy.scheme == Scheme::QT1) out.bases.push_back(draw_basis());
    const MeasuredPulse m = measure_pulse(pulses[k], out.basis_at(k), source, policy.detector, rng);
    out.x[k] = static_cast<std::uint8_t>(m.x);
    out.detected[k] = m.detected;
    out.assigned_random[k] = m.assigned_random;
    if (!policy.report_losses || m.detected) out.lambda.push_back(k);
  }
  if (policy.report_losses) {
    out.abort_eligible = static_cast<double>(out.lambda.size()) < policy.gamma_det * n;
  }
  return out;
}

}  // namespace stoken
