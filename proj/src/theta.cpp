#include "stoken/theta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stoken/rounding.hpp"

namespace stoken {

double angle_from_contrast(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("contrast must be positive");
  // arccos sqrt(1 - s) = arcsin sqrt(s), better conditioned for large C
  return 2.0 * std::asin(std::sqrt(1.0 / (1.0 + c))) * 180.0 / M_PI;
}

double alpha_from_contrasts(const std::vector<double>& contrasts) {
  if (contrasts.empty()) throw std::invalid_argument("contrast series is empty");
  double a = 0.0;
  for (double c : contrasts) a = std::max(a, angle_from_contrast(c));
  return a;
}

double alpha_confidence(int n, double p_alpha) {
  if (n < 1) throw std::invalid_argument("alpha confidence needs n >= 1");
  if (!(p_alpha >= 0.0 && p_alpha <= 1.0)) throw std::invalid_argument("P_alpha must lie in [0,1]");
  return std::exp(n * std::log1p(-p_alpha));
}

namespace {

double lower_angle(const ContrastStats& s) {
  if (!(s.lower7() > 0.0)) throw std::invalid_argument("contrast confidence interval crosses zero");
  return angle_from_contrast(s.lower7());
}

}  // namespace

ThetaResult compose_theta(const std::array<double, 4>& alphas, const ContrastStats& hwp_01,
                          const ContrastStats& hwp_pm, const ContrastStats& pbs, double delta_rm) {
  for (double a : alphas) {
    if (!(a >= 0.0)) throw std::invalid_argument("alpha angles must be nonnegative");
  }
  if (!(delta_rm >= 0.0)) throw std::invalid_argument("rotation-mount error must be nonnegative");
  ThetaResult r;
  r.optics.delta_pbs = ceil_decimals(lower_angle(pbs), 6);
  r.optics.beta_01 = ceil_decimals(r.optics.delta_pbs + lower_angle(hwp_01), 6);
  r.optics.beta_pm = ceil_decimals(r.optics.delta_pbs + lower_angle(hwp_pm), 6);
  r.optics.delta_rm = delta_rm;
  for (int i = 0; i < 4; ++i) {
    const double beta = i < 2 ? r.optics.beta_01 : r.optics.beta_pm;
    r.theta_per_state[i] = ceil_decimals(alphas[i] + beta + r.optics.delta_pbs + 6.0 * delta_rm, 6);
  }
  r.theta = *std::max_element(r.theta_per_state.begin(), r.theta_per_state.end());
  return r;
}

}  // namespace stoken
