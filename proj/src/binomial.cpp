#include "stoken/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stoken/errors.hpp"

namespace stoken {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// l*log(q) with the 0*log(0) = 0 convention.
double xlogy(double l, double q) {
  if (l == 0.0) return 0.0;
  return q <= 0.0 ? kNegInf : l * std::log(q);
}

}  // namespace

double log_choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return kNegInf;
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double log_binomial_cdf(std::int64_t n, std::int64_t k, double q) {
  if (n < 0) throw std::invalid_argument("binomial size must be nonnegative");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("binomial probability outside [0,1]");
  if (k < 0) return kNegInf;
  if (k >= n) return 0.0;
  // long double: lgamma near 1e4 would otherwise cost ~1e-12 absolute per term
  const long double lq = q > 0.0 ? std::log(static_cast<long double>(q)) : -INFINITY;
  const long double lr = q < 1.0 ? std::log1p(-static_cast<long double>(q)) : -INFINITY;
  const long double lgn = std::lgamma(static_cast<long double>(n) + 1.0L);
  std::vector<long double> terms;
  terms.reserve(static_cast<std::size_t>(k) + 1);
  long double top = -INFINITY;
  for (std::int64_t l = 0; l <= k; ++l) {
    const auto ll = static_cast<long double>(l), rest = static_cast<long double>(n - l);
    long double t = lgn - std::lgamma(ll + 1.0L) - std::lgamma(rest + 1.0L);
    if (l > 0) t += ll * lq;
    if (n - l > 0) t += rest * lr;
    terms.push_back(t);
    top = std::max(top, t);
  }
  if (std::isinf(top)) return kNegInf;
  long double acc = 0.0L;
  for (long double t : terms) acc += std::exp(t - top);
  return std::min(0.0, static_cast<double>(top + std::log(acc)));
}

double binomial_cdf(std::int64_t n, std::int64_t k, double q) {
  return std::exp(log_binomial_cdf(n, k, q));
}

double chernoff_log(double n, double p, double t) {
  return xlogy(n * t, p / t) + xlogy(n * (1.0 - t), (1.0 - p) / (1.0 - t));
}

double chernoff_low(double n, double p, double t) {
  if (!(t > 0.0)) throw PreconditionError("Chernoff lower tail requires threshold > 0");
  if (!(t < p)) throw PreconditionError("Chernoff lower tail requires threshold < p");
  if (!(p <= 1.0)) throw PreconditionError("Chernoff lower tail requires p <= 1");
  if (p == 1.0) return 0.0;
  return std::exp(chernoff_log(n, p, t));
}

double chernoff_high(double n, double p, double t) {
  if (!(p > 0.0)) throw PreconditionError("Chernoff upper tail requires p > 0");
  if (!(p < t)) throw PreconditionError("Chernoff upper tail requires p < threshold");
  if (!(t < 1.0)) throw PreconditionError("Chernoff upper tail requires threshold < 1");
  return std::exp(chernoff_log(n, p, t));
}

}  // namespace stoken
