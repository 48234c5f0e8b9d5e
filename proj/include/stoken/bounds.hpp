#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "stoken/qubit.hpp"

namespace stoken {

struct SchemeParams {
  std::int64_t N = 0;
  std::int64_t n = 0;  // |Lambda|
  double gamma_err = 0.0;
  double gamma_det = 1.0;
  double nu_cor = 0.0;
  double nu_unf = 0.0;
  double p_det = 1.0;
  double E = 0.0;
  double beta_pb = 0.0;
  double beta_ps = 0.0;
  double beta_e = 0.0;
  double p_noqub = 0.0;
  double p_theta = 0.0;
  double theta = 0.0;  // radians
};

struct TwoTerm {
  double term1 = 0.0;
  double term2 = 0.0;
  double total = 0.0;
};

struct ConfidenceParams {
  double p_wrong = 2.6e-12;
  int k_cor = 7;
  int k_unf = 6;
};

double epsilon_priv(double beta_e);

// Bias of the XOR of r independent bits, each with bias beta.
double xor_composite_bias(double beta, int r);

double epsilon_rob(const SchemeParams& p);

TwoTerm epsilon_cor(const SchemeParams& p);

double p_noqub_theta(double p_noqub, double p_theta);

// Throws PreconditionError naming the first violated inequality.
void check_unforgeability_constraints(const SchemeParams& p, double p_bound);

TwoTerm epsilon_unf(const SchemeParams& p, double p_bound);

// Smallest total over a grid of admissible nu_unf; empty if none exists.
struct NuChoice {
  double nu_unf = 0.0;
  TwoTerm eps;
};
std::optional<NuChoice> best_nu_unf(SchemeParams p, double p_bound, int grid = 400);

double adjust_confidence(double eps, int k, double p_wrong);

struct MultiNode {
  double eps_priv = 0.0;
  double eps_cor = 0.0;
  double forge_bound = 0.0;
};

MultiNode multi_node(int m, double eps_priv, double eps_cor, double eps_unf);

// Index i in 0..3 stands for rho_00, rho_01, rho_10, rho_11; chi_i pairs i with i+1 mod 4.
struct Ensemble {
  std::array<double, 4> r{};
  std::array<DensityMatrix2, 4> chi;
  DensityMatrix2 rho;
};

Ensemble build_ensemble(const std::array<DensityMatrix2, 4>& states, const std::array<double, 4>& q);

// q_{tu} from the per-pulse probabilities of t = 0 and u = 0.
std::array<double, 4> priors_from_bias(double p_t0, double p_u0);

std::array<double, 4> max_confidence_all(const Ensemble& e);

double p_bound_ideal();

struct PBoundOptions {
  int starts = 32;
  std::uint64_t seed = 0x5eed0b0adULL;
  double safety_margin = 0.0;
};

struct PBoundResult {
  double value = 0.0;    // includes the safety margin
  double maximum = 0.0;  // best 2 max_j P_MC found
  std::array<double, 4> polar{};
  std::array<double, 4> azimuth{};
  double bias_pb = 0.0;  // signed offsets of P(u=0), P(t=0) from 1/2
  double bias_ps = 0.0;
  int evaluations = 0;
};

// Objective of the search: 2 max_j P_MC(chi_j) for one deviated configuration.
double forging_objective(const std::array<double, 4>& polar, const std::array<double, 4>& azimuth,
                         double bias_pb, double bias_ps);

PBoundResult p_bound_search(double theta, double beta_pb, double beta_ps,
                            const PBoundOptions& opts = {});

// Throws PreconditionError when the result is not below 1.
double p_bound_optimize(double theta, double beta_pb, double beta_ps,
                        const PBoundOptions& opts = {});

struct BoundReport {
  SchemeParams inputs;
  ConfidenceParams confidence;
  double p_noqub_theta = 0.0;
  double p_bound = 0.0;
  bool p_bound_pinned = false;
  double eps_priv = 0.0;
  double eps_rob = 0.0;
  TwoTerm eps_cor;
  TwoTerm eps_unf;
  double eps_cor_prime = 0.0;
  double eps_unf_prime = 0.0;
  std::optional<int> multi_m;
  MultiNode multi;
};

BoundReport compute_bounds(const SchemeParams& p, const ConfidenceParams& conf,
                           std::optional<double> pinned_p_bound, const PBoundOptions& opts,
                           std::optional<int> multi_m);

}  // namespace stoken
