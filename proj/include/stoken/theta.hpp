#pragma once

#include <array>
#include <vector>

namespace stoken {

struct ContrastStats {
  double mean_c = 0.0;  // I_max / I_min
  double sigma_c = 0.0;
  int n_samples = 0;

  double lower7() const { return mean_c - 7.0 * sigma_c; }
};

struct OpticsError {
  double delta_pbs = 0.0;  // degrees
  double beta_01 = 0.0;
  double beta_pm = 0.0;
  double delta_rm = 0.1;
};

// 2 arccos sqrt(1 - 1/(1+C)), degrees.
double angle_from_contrast(double c);

// Largest per-pulse angle of a contrast series.
double alpha_from_contrasts(const std::vector<double>& contrasts);

// (1 - p_alpha)^n
double alpha_confidence(int n, double p_alpha);

struct ThetaResult {
  OpticsError optics;
  std::array<double, 4> theta_per_state{};  // order 0, 1, +, -
  double theta = 0.0;
};

// Outward rounding at the 6th decimal is applied to delta_PBS, beta and theta_i.
ThetaResult compose_theta(const std::array<double, 4>& alphas, const ContrastStats& hwp_01,
                          const ContrastStats& hwp_pm, const ContrastStats& pbs, double delta_rm);

}  // namespace stoken
