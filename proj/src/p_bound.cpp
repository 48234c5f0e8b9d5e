#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "stoken/bounds.hpp"
#include "stoken/errors.hpp"
#include "stoken/rng.hpp"

namespace stoken {

namespace {

constexpr int kDim = 10;
using Point = std::array<double, kDim>;

// Unconstrained coordinates: polar_j = theta sin^2(x_j), azimuth_j = x_{4+j},
// bias offsets = beta sin(x_8), beta sin(x_9). Every map is smooth and onto the box.
struct Box {
  double theta;
  double beta_pb;
  double beta_ps;

  void decode(const Point& x, std::array<double, 4>& polar, std::array<double, 4>& az,
              double& b_pb, double& b_ps) const {
    for (int j = 0; j < 4; ++j) {
      const double s = std::sin(x[j]);
      polar[j] = theta * s * s;
      az[j] = x[4 + j];
    }
    b_pb = beta_pb * std::sin(x[8]);
    b_ps = beta_ps * std::sin(x[9]);
  }

  double operator()(const Point& x) const {
    std::array<double, 4> polar, az;
    double b_pb, b_ps;
    decode(x, polar, az, b_pb, b_ps);
    return forging_objective(polar, az, b_pb, b_ps);
  }
};

// Maximizing Nelder-Mead with the standard coefficients.
Point nelder_mead(const Box& f, Point start, double scale, int max_evals, int& evals) {
  std::array<Point, kDim + 1> s;
  std::array<double, kDim + 1> v;
  s[0] = start;
  for (int i = 0; i < kDim; ++i) {
    s[i + 1] = start;
    s[i + 1][i] += scale;
  }
  for (int i = 0; i <= kDim; ++i) v[i] = f(s[i]);
  evals += kDim + 1;

  const int limit = evals + max_evals;
  std::array<int, kDim + 1> order;
  while (evals < limit) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return v[a] > v[b]; });
    const int best = order[0];
    const int worst = order[kDim];
    const int second = order[kDim - 1];
    if (v[best] - v[worst] < 1e-14) break;

    Point c{};
    for (int i = 0; i <= kDim; ++i) {
      if (i == worst) continue;
      for (int d = 0; d < kDim; ++d) c[d] += s[i][d] / kDim;
    }
    auto along = [&](double t) {
      Point p;
      for (int d = 0; d < kDim; ++d) p[d] = c[d] + t * (s[worst][d] - c[d]);
      return p;
    };
    const Point xr = along(-1.0);
    const double fr = f(xr);
    ++evals;
    if (fr > v[best]) {
      const Point xe = along(-2.0);
      const double fe = f(xe);
      ++evals;
      if (fe > fr) {
        s[worst] = xe;
        v[worst] = fe;
      } else {
        s[worst] = xr;
        v[worst] = fr;
      }
    } else if (fr > v[second]) {
      s[worst] = xr;
      v[worst] = fr;
    } else {
      const bool outside = fr > v[worst];
      const Point xc = along(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      ++evals;
      if (fc > std::max(fr, v[worst])) {
        s[worst] = xc;
        v[worst] = fc;
      } else {
        for (int i = 0; i <= kDim; ++i) {
          if (i == best) continue;
          for (int d = 0; d < kDim; ++d) s[i][d] = s[best][d] + 0.5 * (s[i][d] - s[best][d]);
          v[i] = f(s[i]);
          ++evals;
        }
      }
    }
  }
  const int top = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  return s[top];
}

// Per-coordinate pattern search with halving steps.
Point coordinate_descent(const Box& f, Point x, int& evals) {
  double fx = f(x);
  ++evals;
  for (double step = 0.05; step > 1e-9; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int d = 0; d < kDim; ++d) {
        for (double dir : {1.0, -1.0}) {
          Point y = x;
          y[d] += dir * step;
          const double fy = f(y);
          ++evals;
          if (fy > fx + 1e-15) {
            x = y;
            fx = fy;
            moved = true;
          }
        }
      }
    }
  }
  return x;
}

}  // namespace

double forging_objective(const std::array<double, 4>& polar, const std::array<double, 4>& azimuth,
                         double bias_pb, double bias_ps) {
  std::array<DensityMatrix2, 4> states;
  for (int i = 0; i < 4; ++i) {
    const DensityMatrix2 ideal = bb84_state(BB84Label{i / 2, i % 2});
    states[i] = polar[i] > 0.0 ? deviate_on_cone(ideal, polar[i], azimuth[i]) : ideal;
  }
  const Ensemble e = build_ensemble(states, priors_from_bias(0.5 + bias_ps, 0.5 + bias_pb));
  const auto pmc = max_confidence_all(e);
  return 2.0 * *std::max_element(pmc.begin(), pmc.end());
}

PBoundResult p_bound_search(double theta, double beta_pb, double beta_ps, const PBoundOptions& opts) {
  if (!(theta >= 0.0 && theta < M_PI / 4)) throw std::invalid_argument("theta must lie in [0, pi/4)");
  if (!(beta_pb >= 0.0 && beta_pb < 0.5 && beta_ps >= 0.0 && beta_ps < 0.5)) {
    throw std::invalid_argument("biases must lie in [0, 1/2)");
  }
  if (opts.starts < 1) throw std::invalid_argument("optimizer needs at least one start");
  const Box f{theta, beta_pb, beta_ps};
  PBoundResult res;
  Point best_x{};
  double best = -1.0;
  for (int k = 0; k < opts.starts; ++k) {
    Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(k));
    Point x;
    for (double& c : x) c = 2.0 * M_PI * uniform01(rng);
    x = nelder_mead(f, x, 0.6, 6000, res.evaluations);
    x = coordinate_descent(f, x, res.evaluations);
    const double v = f(x);
    ++res.evaluations;
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  f.decode(best_x, res.polar, res.azimuth, res.bias_pb, res.bias_ps);
  res.maximum = best;
  res.value = best + opts.safety_margin;
  return res;
}

double p_bound_optimize(double theta, double beta_pb, double beta_ps, const PBoundOptions& opts) {
  const double v = p_bound_search(theta, beta_pb, beta_ps, opts).value;
  if (!(v < 1.0)) throw PreconditionError("unforgeability precondition violated: P_bound must be < 1");
  return v;
}

}  // namespace stoken
