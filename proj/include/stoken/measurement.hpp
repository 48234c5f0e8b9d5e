#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stoken/rng.hpp"
#include "stoken/source_model.hpp"

namespace stoken {

enum class Scheme { QT1, QT2 };

// Probabilities that a heralded pulse fires none / both of Alice's detectors.
struct DetectorModel {
  double p_no_click = 0.0;
  double p_double_click = 0.0;

  double p_fill() const { return p_no_click + p_double_click; }
};

// Measured N0/NB and N2/NB of the heralded run.
DetectorModel paper_detector_model();

struct MeasurementPolicy {
  Scheme scheme = Scheme::QT2;
  double beta_e = 0.0;
  int sign_e = +1;  // Pr[z=0] = 1/2 + sign_e*beta_e
  bool report_losses = false;
  double gamma_det = 1.0;
  DetectorModel detector;

  void validate() const;
};

struct MeasuredPulse {
  int x = 0;
  bool detected = true;
  bool assigned_random = false;
};

// E_tu is the total matched-basis error including fair-coin fill-ins; the
// single-click error is the remainder (E_tu - p_fill/2)/(1 - p_fill), floored at 0.
double single_click_error(double e_tu, const DetectorModel& det);

MeasuredPulse measure_pulse(const PreparedPulse& pulse, int basis, const SourceParams& source,
                            const DetectorModel& det, Rng& rng);

struct MeasurementOutcome {
  std::vector<std::uint8_t> bases;  // one entry for QT2, N for QT1
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> detected;
  std::vector<std::uint8_t> assigned_random;
  std::vector<std::size_t> lambda;
  bool abort_eligible = false;

  int basis_at(std::size_t k) const { return bases.size() == 1 ? bases[0] : bases[k]; }
};

MeasurementOutcome run_measurement_phase(const std::vector<PreparedPulse>& pulses,
                                         const MeasurementPolicy& policy,
                                         const SourceParams& source, Rng& rng);

}  // namespace stoken
