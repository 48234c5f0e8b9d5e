#pragma once

#include <array>
#include <cstdint>

namespace stoken {

struct EstimateWithSigma {
  double value = 0.0;
  double sigma = 0.0;
  double bound7 = 0.0;
};

struct CountRecord {
  double t_exp = 0.0;  // s
  double f_sys = 0.0;  // Hz
  std::int64_t n_b = 0;
  std::int64_t n_u0 = 0;
  std::int64_t n_t0 = 0;
  std::array<std::int64_t, 4> n_tu{};      // index 2t+u
  std::array<std::int64_t, 4> n_err_tu{};  // index 2t+u
  std::int64_t n0 = 0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;

  void validate() const;  // throws ConfigError
};

struct DarkRecord {
  double t_d = 0.0;  // s
  std::int64_t n_db = 0;
  std::int64_t n_da0 = 0;
  std::int64_t n_da1 = 0;

  void validate() const;
};

struct CoincidenceRecord {
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
  std::int64_t n_c = 0;

  void validate() const;
};

// Bias statistics are rounded up at the 6th decimal, then bound7 = value + 7 sigma.
struct BiasEstimates {
  EstimateWithSigma beta_pb;
  EstimateWithSigma beta_ps;
};
BiasEstimates estimate_biases(const CountRecord& rec);

// bound7 = mean + 7 sigma per row; E is the largest bound7 rounded up at the 6th decimal.
struct ErrorRateTable {
  std::array<EstimateWithSigma, 4> rows;
  double E = 0.0;
};
ErrorRateTable estimate_error_rates(const CountRecord& rec);

// bound7 = value + 7 sigma for every dark-count probability.
struct DarkEstimates {
  EstimateWithSigma d_a0;
  EstimateWithSigma d_a1;
  EstimateWithSigma d_a;
  EstimateWithSigma d_b;
};
DarkEstimates estimate_dark(const DarkRecord& rec, double f_sys);

// bound7 = value + 7 sigma.
struct DetectionEstimates {
  EstimateWithSigma p_a;
  EstimateWithSigma p_b;
  EstimateWithSigma p_c;
};
DetectionEstimates estimate_detection(const CoincidenceRecord& rec, double t_exp, double f_sys);

// Upper bounds (value + 7 sigma) except p_noqub_max.bound7, which is additionally
// rounded up at the 6th decimal.
struct NoqubReport {
  EstimateWithSigma x_a;
  EstimateWithSigma x_b;
  EstimateWithSigma x_c;
  EstimateWithSigma mu_u;
  EstimateWithSigma p_noqub_max;
};
NoqubReport derive_noqub_bound(const DarkEstimates& dark, const DetectionEstimates& detect);

// Lower bounds: bound7 = value - 7 sigma.
struct EtaBounds {
  EstimateWithSigma eta_a_l;
  EstimateWithSigma eta_b_l;
};
EtaBounds eta_lower_bounds(const EstimateWithSigma& x_a, const EstimateWithSigma& x_b,
                           const EstimateWithSigma& mu_u);

// Holds iff 50 (x_B + 7 sigma) < 0.005; presumes eta_B > 0.02.
bool check_mu_assumption(const EstimateWithSigma& x_b);

// Value formulas of the chain, exposed for independent differentiation.
namespace chain {
double d_a(double d_a0, double d_a1);
double x_a(double p_a, double d_a);
double x_b(double p_b, double d_b);
double x_c(double p_c, double d_a, double d_b);
double mu_u(double x_a, double x_b, double x_c);
double p_noqub_u(double mu_u, double x_b, double d_b);
double eta_a_l(double x_a, double mu_u);
double eta_b_l(double x_b, double mu_u);
}  // namespace chain

}  // namespace stoken
