#include "stoken/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stoken/binomial.hpp"
#include "stoken/errors.hpp"

namespace stoken {

namespace {

// Guards floors of products such as N*nu against representation error.
std::int64_t floor_count(double x) { return static_cast<std::int64_t>(std::floor(x + 1e-9)); }

}  // namespace

double epsilon_priv(double beta_e) {
  if (!(beta_e >= 0.0 && beta_e < 0.5)) throw std::invalid_argument("beta_e must lie in [0,1/2)");
  return beta_e;
}

double xor_composite_bias(double beta, int r) {
  if (r < 1) throw std::invalid_argument("xor needs at least one bit");
  return 0.5 * std::pow(2.0 * beta, r);
}

double epsilon_rob(const SchemeParams& p) {
  if (p.p_det == 1.0 && p.gamma_det == 1.0) return 0.0;
  if (!(p.gamma_det > 0.0)) throw PreconditionError("robustness requires 0 < gamma_det");
  if (!(p.gamma_det < p.p_det)) throw PreconditionError("robustness requires gamma_det < P_det");
  if (p.N < 1) throw PreconditionError("robustness requires N >= 1");
  return chernoff_low(static_cast<double>(p.N), p.p_det, p.gamma_det);
}

TwoTerm epsilon_cor(const SchemeParams& p) {
  if (!(p.E > 0.0)) throw PreconditionError("correctness requires 0 < E");
  if (!(p.E < p.gamma_err)) throw PreconditionError("correctness requires E < gamma_err");
  if (!(p.gamma_err < 1.0)) throw PreconditionError("correctness requires gamma_err < 1");
  const double half_rate = 0.5 * p.p_det * (1.0 - 2.0 * p.beta_pb);
  if (!(p.nu_cor > 0.0)) throw PreconditionError("correctness requires 0 < nu_cor");
  if (!(p.nu_cor < half_rate)) throw PreconditionError("correctness requires nu_cor < P_det(1-2 beta_PB)/2");
  if (p.N < 1) throw PreconditionError("correctness requires N >= 1");
  const double n = static_cast<double>(p.N);
  TwoTerm t;
  t.term1 = chernoff_low(n, half_rate, p.nu_cor);
  t.term2 = chernoff_high(n * p.nu_cor, p.E, p.gamma_err);
  t.total = t.term1 + t.term2;
  return t;
}

double p_noqub_theta(double p_noqub, double p_theta) {
  if (!(p_noqub >= 0.0 && p_noqub <= 1.0 && p_theta >= 0.0 && p_theta <= 1.0)) {
    throw std::invalid_argument("P_noqub and P_theta must lie in [0,1]");
  }
  return 1.0 - (1.0 - p_noqub) * (1.0 - p_theta);
}

void check_unforgeability_constraints(const SchemeParams& p, double p_bound) {
  if (!(p_bound > 0.0 && p_bound < 1.0)) throw PreconditionError("unforgeability requires 0 < P_bound < 1");
  if (p.N < 1) throw PreconditionError("unforgeability requires N >= 1");
  if (!(static_cast<double>(p.n) >= p.gamma_det * static_cast<double>(p.N) - 1e-9)) {
    throw PreconditionError("unforgeability requires N gamma_det <= n");
  }
  if (p.n > p.N) throw PreconditionError("unforgeability requires n <= N");
  if (!(p.gamma_err >= 0.0 && p.gamma_err < 1.0)) throw PreconditionError("unforgeability requires 0 <= gamma_err < 1");
  const double pnt = p_noqub_theta(p.p_noqub, p.p_theta);
  if (!(pnt < p.nu_unf)) throw PreconditionError("unforgeability requires P_noqub,theta < nu_unf");
  const double cap = p.gamma_det * (1.0 - p.gamma_err / (1.0 - p_bound));
  if (!(p.nu_unf < cap)) {
    throw PreconditionError("unforgeability requires nu_unf < gamma_det(1 - gamma_err/(1 - P_bound))");
  }
}

TwoTerm epsilon_unf(const SchemeParams& p, double p_bound) {
  check_unforgeability_constraints(p, p_bound);
  const double pnt = p_noqub_theta(p.p_noqub, p.p_theta);
  const double big_n = static_cast<double>(p.N);
  TwoTerm t;
  t.term1 = binomial_cdf(p.N, floor_count(big_n * (1.0 - p.nu_unf)), 1.0 - pnt);
  const std::int64_t m = p.n - floor_count(big_n * p.nu_unf);
  t.term2 = binomial_cdf(m, floor_count(static_cast<double>(p.n) * p.gamma_err), 1.0 - p_bound);
  t.total = t.term1 + t.term2;
  return t;
}

std::optional<NuChoice> best_nu_unf(SchemeParams p, double p_bound, int grid) {
  const double lo = p_noqub_theta(p.p_noqub, p.p_theta);
  const double hi = p.gamma_det * (1.0 - p.gamma_err / (1.0 - p_bound));
  if (!(hi > lo) || !(p_bound < 1.0)) return std::nullopt;
  std::optional<NuChoice> best;
  for (int i = 1; i < grid; ++i) {
    p.nu_unf = lo + (hi - lo) * i / grid;
    try {
      const TwoTerm e = epsilon_unf(p, p_bound);
      if (!best || e.total < best->eps.total) best = NuChoice{p.nu_unf, e};
    } catch (const PreconditionError&) {
    }
  }
  return best;
}

double adjust_confidence(double eps, int k, double p_wrong) {
  if (k < 1) throw std::invalid_argument("confidence adjustment needs k >= 1");
  if (!(p_wrong >= 0.0 && p_wrong <= 1.0)) throw std::invalid_argument("P_wrong must lie in [0,1]");
  const double keep = std::exp(k * std::log1p(-p_wrong));  // (1-P_wrong)^k
  return -std::expm1(k * std::log1p(-p_wrong)) + eps * keep;
}

MultiNode multi_node(int m, double eps_priv, double eps_cor, double eps_unf) {
  if (m < 1) throw std::invalid_argument("multi-node extension needs M >= 1");
  const double two_m = std::ldexp(1.0, m);
  MultiNode out;
  out.eps_priv = std::expm1(m * std::log1p(2.0 * eps_priv)) / two_m;
  out.eps_cor = m * eps_cor;
  out.forge_bound = 0.5 * two_m * (two_m - 1.0) * eps_unf;
  return out;
}

Ensemble build_ensemble(const std::array<DensityMatrix2, 4>& states, const std::array<double, 4>& q) {
  double sum = 0.0;
  for (double v : q) {
    if (!(v >= 0.0)) throw std::invalid_argument("ensemble priors must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("ensemble priors must sum to 1");
  Ensemble e;
  Mat2 rho{};
  for (int i = 0; i < 4; ++i) {
    const int j = (i + 1) % 4;
    const double w = q[i] + q[j];
    if (!(w > 0.0)) throw std::invalid_argument("degenerate ensemble priors");
    e.r[i] = 0.5 * w;
    const Mat2 chi = (states[i].matrix() * q[i] + states[j].matrix() * q[j]) * (1.0 / w);
    e.chi[i] = DensityMatrix2::from_matrix(chi);
    rho = rho + chi * e.r[i];
  }
  e.rho = DensityMatrix2::from_matrix(rho);
  return e;
}

std::array<double, 4> priors_from_bias(double p_t0, double p_u0) {
  return {p_t0 * p_u0, p_t0 * (1.0 - p_u0), (1.0 - p_t0) * p_u0, (1.0 - p_t0) * (1.0 - p_u0)};
}

std::array<double, 4> max_confidence_all(const Ensemble& e) {
  std::array<double, 4> out{};
  for (int j = 0; j < 4; ++j) out[j] = max_confidence_value(e.r[j], e.chi[j], e.rho);
  return out;
}

double p_bound_ideal() {
  std::array<DensityMatrix2, 4> s;
  for (int i = 0; i < 4; ++i) s[i] = bb84_state(BB84Label{i / 2, i % 2});
  const auto pmc = max_confidence_all(build_ensemble(s, {0.25, 0.25, 0.25, 0.25}));
  return 2.0 * *std::max_element(pmc.begin(), pmc.end());
}

BoundReport compute_bounds(const SchemeParams& p, const ConfidenceParams& conf,
                           std::optional<double> pinned_p_bound, const PBoundOptions& opts,
                           std::optional<int> multi_m) {
  BoundReport r;
  r.inputs = p;
  r.confidence = conf;
  r.p_noqub_theta = p_noqub_theta(p.p_noqub, p.p_theta);
  if (pinned_p_bound) {
    r.p_bound = *pinned_p_bound;
    r.p_bound_pinned = true;
  } else {
    r.p_bound = p_bound_optimize(p.theta, p.beta_pb, p.beta_ps, opts);
  }
  r.eps_priv = epsilon_priv(p.beta_e);
  r.eps_rob = epsilon_rob(p);
  r.eps_cor = epsilon_cor(p);
  r.eps_unf = epsilon_unf(p, r.p_bound);
  r.eps_cor_prime = adjust_confidence(r.eps_cor.total, conf.k_cor, conf.p_wrong);
  r.eps_unf_prime = adjust_confidence(r.eps_unf.total, conf.k_unf, conf.p_wrong);
  if (multi_m) {
    r.multi_m = multi_m;
    r.multi = multi_node(*multi_m, r.eps_priv, r.eps_cor_prime, r.eps_unf_prime);
  }
  return r;
}

}  // namespace stoken
