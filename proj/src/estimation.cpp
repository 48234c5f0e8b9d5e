#include "stoken/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stoken/errors.hpp"
#include "stoken/rounding.hpp"

namespace stoken {

namespace {

EstimateWithSigma upper(double value, double sigma) { return {value, sigma, value + 7.0 * sigma}; }
EstimateWithSigma lower(double value, double sigma) { return {value, sigma, value - 7.0 * sigma}; }

double hypot3(double a, double b, double c) { return std::sqrt(a * a + b * b + c * c); }

void require_nonneg(std::int64_t v, const char* what) {
  if (v < 0) throw ConfigError(std::string(what) + " must be nonnegative");
}

}  // namespace

void CountRecord::validate() const {
  require_nonneg(n_b, "n_b");
  require_nonneg(n_u0, "n_u0");
  require_nonneg(n_t0, "n_t0");
  if (n_u0 > n_b || n_t0 > n_b) throw ConfigError("basis/state counts exceed n_b");
  for (int i = 0; i < 4; ++i) {
    require_nonneg(n_tu[i], "n_tu");
    require_nonneg(n_err_tu[i], "n_err_tu");
    if (n_err_tu[i] > n_tu[i]) throw ConfigError("error count exceeds matched-basis count");
  }
  require_nonneg(n0, "n0");
  require_nonneg(n1, "n1");
  require_nonneg(n2, "n2");
  if (n0 + n1 + n2 != n_b) throw ConfigError("n0 + n1 + n2 must equal n_b");
}

void DarkRecord::validate() const {
  if (!(t_d > 0.0)) throw ConfigError("t_d must be positive");
  require_nonneg(n_db, "n_db");
  require_nonneg(n_da0, "n_da0");
  require_nonneg(n_da1, "n_da1");
}

void CoincidenceRecord::validate() const {
  require_nonneg(n_a, "n_a");
  require_nonneg(n_b, "n_b");
  require_nonneg(n_c, "n_c");
  if (n_c > std::min(n_a, n_b)) throw ConfigError("coincidences exceed single counts");
}

namespace chain {

double d_a(double d_a0, double d_a1) { return 1.0 - (1.0 - d_a0) * (1.0 - d_a1); }

double x_a(double p_a, double d_a) { return (p_a - d_a) / (1.0 - d_a); }

double x_b(double p_b, double d_b) { return std::log((1.0 - d_b) / (1.0 - p_b)); }

double x_c(double p_c, double d_a, double d_b) {
  return (p_c - d_a - d_b + d_a * d_b) / ((1.0 - d_a) * (1.0 - d_b));
}

double mu_u(double x_a, double x_b, double x_c) {
  return 100.0 * x_c - std::sqrt(10000.0 * x_c * x_c - 200.0 * x_a * x_b);
}

double p_noqub_u(double mu, double x_b, double d_b) {
  const double den = d_b + (1.0 - d_b) * (-std::expm1(-x_b));
  return 1.0 - std::exp(-mu) * (d_b * (1.0 + mu) + (1.0 - d_b) * x_b) / den;
}

double eta_a_l(double x_a, double mu) { return x_a / mu - mu; }

double eta_b_l(double x_b, double mu) { return x_b / mu; }

}  // namespace chain

BiasEstimates estimate_biases(const CountRecord& rec) {
  if (rec.n_b <= 0) throw std::invalid_argument("bias estimate needs n_b > 0");
  const double nb = static_cast<double>(rec.n_b);
  const double sigma = ceil_decimals(0.5 / std::sqrt(nb), 6);
  auto one = [&](std::int64_t n0) {
    const double mean = ceil_decimals(std::abs(static_cast<double>(n0) / nb - 0.5), 6);
    return upper(mean, sigma);
  };
  return {one(rec.n_u0), one(rec.n_t0)};
}

ErrorRateTable estimate_error_rates(const CountRecord& rec) {
  ErrorRateTable t;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (rec.n_tu[i] <= 0) throw std::invalid_argument("error-rate estimate needs n_tu > 0");
    const double n = static_cast<double>(rec.n_tu[i]);
    const double e = static_cast<double>(rec.n_err_tu[i]) / n;
    t.rows[i] = upper(e, std::sqrt(e * (1.0 - e) / n));
    worst = std::max(worst, t.rows[i].bound7);
  }
  t.E = ceil_decimals(worst, 6);
  return t;
}

DarkEstimates estimate_dark(const DarkRecord& rec, double f_sys) {
  const double nd = rec.t_d * f_sys;
  if (!(nd >= 1.0)) throw std::invalid_argument("dark-count window must hold at least one pulse");
  auto one = [&](std::int64_t n) {
    const double c = static_cast<double>(n);
    return upper(c / nd, std::sqrt(c) / nd);
  };
  DarkEstimates d;
  d.d_a0 = one(rec.n_da0);
  d.d_a1 = one(rec.n_da1);
  d.d_b = one(rec.n_db);
  const double s = std::hypot((1.0 - d.d_a1.value) * d.d_a0.sigma, (1.0 - d.d_a0.value) * d.d_a1.sigma);
  d.d_a = upper(chain::d_a(d.d_a0.value, d.d_a1.value), s);
  return d;
}

DetectionEstimates estimate_detection(const CoincidenceRecord& rec, double t_exp, double f_sys) {
  const double n = t_exp * f_sys;
  if (!(n > 0.0)) throw std::invalid_argument("detection estimate needs t_exp f_sys > 0");
  auto one = [&](std::int64_t k) {
    const double c = static_cast<double>(k);
    return upper(c / n, std::sqrt(c) / n);
  };
  return {one(rec.n_a), one(rec.n_b), one(rec.n_c)};
}

NoqubReport derive_noqub_bound(const DarkEstimates& dark, const DetectionEstimates& det) {
  const double da = dark.d_a.value, db = dark.d_b.value;
  const double sda = dark.d_a.sigma, sdb = dark.d_b.sigma;
  const double pa = det.p_a.value, pb = det.p_b.value, pc = det.p_c.value;

  NoqubReport r;
  const double xa = chain::x_a(pa, da);
  const double xb = chain::x_b(pb, db);
  const double xc = chain::x_c(pc, da, db);
  r.x_a = upper(xa, std::hypot((1.0 - pa) * sda / ((1.0 - da) * (1.0 - da)), det.p_a.sigma / (1.0 - da)));
  r.x_b = upper(xb, std::hypot(sdb / (1.0 - db), det.p_b.sigma / (1.0 - pb)));
  r.x_c = upper(xc, hypot3(det.p_c.sigma / ((1.0 - da) * (1.0 - db)),
                           (pc - 1.0) * sda / ((1.0 - da) * (1.0 - da) * (1.0 - db)),
                           (pc - 1.0) * sdb / ((1.0 - da) * (1.0 - db) * (1.0 - db))));

  const double disc = 10000.0 * xc * xc - 200.0 * xa * xb;
  if (!(disc >= 0.0) || !(100.0 * xc + std::sqrt(disc) >= 0.005)) {
    throw PreconditionError("mu bound derivation inapplicable; check mu < 0.005 assumption");
  }
  const double root = std::sqrt(disc);
  const double mu = chain::mu_u(xa, xb, xc);
  const double dmu_dxa = 100.0 * xb / root;
  const double dmu_dxb = 100.0 * xa / root;
  const double dmu_dxc = 100.0 - 10000.0 * xc / root;
  r.mu_u = upper(mu, hypot3(dmu_dxa * r.x_a.sigma, dmu_dxb * r.x_b.sigma, dmu_dxc * r.x_c.sigma));

  const double em = std::exp(-mu);
  const double ex = std::exp(-xb);
  const double den = db + (1.0 - db) * (1.0 - ex);
  const double dp_dmu = em * (db * mu + (1.0 - db) * xb) / den;
  const double dp_dxb = -em * (1.0 - db) * (1.0 - ex * (1.0 + db * mu + (1.0 - db) * xb)) / (den * den);
  const double dp_ddb = -em * (1.0 + mu - xb - ex * (1.0 + mu)) / (den * den);
  const double p = chain::p_noqub_u(mu, xb, db);
  const double sp = hypot3(dp_dmu * r.mu_u.sigma, dp_dxb * r.x_b.sigma, dp_ddb * sdb);
  r.p_noqub_max = {p, sp, ceil_decimals(p + 7.0 * sp, 6)};
  return r;
}

EtaBounds eta_lower_bounds(const EstimateWithSigma& x_a, const EstimateWithSigma& x_b,
                           const EstimateWithSigma& mu_u) {
  const double mu = mu_u.value;
  if (!(mu > 0.0)) throw std::invalid_argument("eta bounds need mu_U > 0");
  EtaBounds e;
  e.eta_a_l = lower(chain::eta_a_l(x_a.value, mu),
                    std::hypot(x_a.sigma / mu, (x_a.value / (mu * mu) + 1.0) * mu_u.sigma));
  e.eta_b_l = lower(chain::eta_b_l(x_b.value, mu),
                    std::hypot(x_b.sigma / mu, x_b.value * mu_u.sigma / (mu * mu)));
  return e;
}

bool check_mu_assumption(const EstimateWithSigma& x_b) {
  return 50.0 * (x_b.value + 7.0 * x_b.sigma) < 0.005;
}

}  // namespace stoken
