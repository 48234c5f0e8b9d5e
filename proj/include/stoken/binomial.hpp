#pragma once

#include <cstdint>

namespace stoken {

double log_choose(std::int64_t n, std::int64_t k);

double log_add_exp(double a, double b);

// log Pr[Binomial(n, q) <= k], summed in the log domain.
double log_binomial_cdf(std::int64_t n, std::int64_t k, double q);

double binomial_cdf(std::int64_t n, std::int64_t k, double q);

// Exponent of (p/t)^{nt} ((1-p)/(1-t))^{n(1-t)}; n may be fractional.
double chernoff_log(double n, double p, double t);

// Bound on Pr[X <= tn] for X ~ Bin(n, p); requires 0 < t < p <= 1.
double chernoff_low(double n, double p, double t);

// Bound on Pr[X >= tn] for X ~ Bin(n, p); requires 0 < p < t < 1.
double chernoff_high(double n, double p, double t);

}  // namespace stoken
