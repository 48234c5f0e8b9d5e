#include "stoken/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stoken {

namespace {

constexpr double kTol = 1e-12;

}  // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector BlochVector::cross(const BlochVector& o) const {
  return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
}

Mat2 Mat2::from_pauli(double h0, const BlochVector& h) {
  return {cplx(h0 + h.z, 0.0), cplx(h.x, -h.y), cplx(h.x, h.y), cplx(h0 - h.z, 0.0)};
}

Mat2 Mat2::operator+(const Mat2& o) const {
  return {a00 + o.a00, a01 + o.a01, a10 + o.a10, a11 + o.a11};
}

Mat2 Mat2::operator-(const Mat2& o) const {
  return {a00 - o.a00, a01 - o.a01, a10 - o.a10, a11 - o.a11};
}

Mat2 Mat2::operator*(const Mat2& o) const {
  return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11,
          a10 * o.a00 + a11 * o.a10, a10 * o.a01 + a11 * o.a11};
}

Mat2 Mat2::operator*(double s) const { return {a00 * s, a01 * s, a10 * s, a11 * s}; }

Mat2 Mat2::adjoint() const {
  return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)};
}

double Mat2::max_abs_diff(const Mat2& o) const {
  return std::max({std::abs(a00 - o.a00), std::abs(a01 - o.a01), std::abs(a10 - o.a10),
                   std::abs(a11 - o.a11)});
}

PauliForm to_pauli(const Mat2& m) {
  PauliForm p;
  p.h0 = 0.5 * (m.a00.real() + m.a11.real());
  p.h.z = 0.5 * (m.a00.real() - m.a11.real());
  // Average the off-diagonals so tiny anti-Hermitian noise cancels.
  const cplx off = 0.5 * (m.a01 + std::conj(m.a10));
  p.h.x = off.real();
  p.h.y = -off.imag();
  return p;
}

double trace_product(const Mat2& a, const Mat2& b) {
  return (a.a00 * b.a00 + a.a01 * b.a10 + a.a10 * b.a01 + a.a11 * b.a11).real();
}

DensityMatrix2::DensityMatrix2() : m_{1.0, 0.0, 0.0, 0.0} {}

DensityMatrix2 DensityMatrix2::from_matrix(const Mat2& m) {
  if (m.max_abs_diff(m.adjoint()) > kTol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(m.trace() - cplx(1.0)) > kTol) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  if (to_pauli(m).lambda_min() < -kTol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
  return DensityMatrix2(m);
}

DensityMatrix2 DensityMatrix2::from_bloch(const BlochVector& r) {
  if (r.norm() > 1.0 + kTol) throw std::invalid_argument("Bloch vector outside the unit ball");
  return DensityMatrix2(Mat2::from_pauli(0.5, r * 0.5));
}

BlochVector DensityMatrix2::bloch() const { return to_pauli(m_).h * 2.0; }

bool DensityMatrix2::is_pure(double tol) const { return std::abs(bloch().norm() - 1.0) <= tol; }

DensityMatrix2 bb84_state(BB84Label label) {
  const double s = label.t == 0 ? 1.0 : -1.0;
  return DensityMatrix2::from_bloch(label.u == 0 ? BlochVector{0, 0, s} : BlochVector{s, 0, 0});
}

double bloch_angle(const DensityMatrix2& a, const DensityMatrix2& b) {
  const BlochVector ra = a.bloch();
  const BlochVector rb = b.bloch();
  const double na = ra.norm();
  const double nb = rb.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  // atan2 form stays accurate near 0 and pi where acos loses digits.
  return std::atan2(ra.cross(rb).norm(), ra.dot(rb));
}

DensityMatrix2 deviate_on_cone(const DensityMatrix2& state, double polar, double azimuth) {
  if (!state.is_pure()) throw std::invalid_argument("cone deviation defined for pure states only");
  if (!(polar >= 0.0 && polar <= M_PI)) throw std::invalid_argument("cone polar angle outside [0, pi]");
  BlochVector v = state.bloch();
  v = v * (1.0 / v.norm());
  BlochVector ref{0, 0, 1};
  BlochVector e1 = ref - v * v.dot(ref);
  if (e1.norm() < 1e-9) {
    ref = {1, 0, 0};
    e1 = ref - v * v.dot(ref);
  }
  e1 = e1 * (1.0 / e1.norm());
  const BlochVector e2 = v.cross(e1);
  const BlochVector dir = e1 * std::cos(azimuth) + e2 * std::sin(azimuth);
  BlochVector w = v * std::cos(polar) + dir * std::sin(polar);
  w = w * (1.0 / w.norm());
  return DensityMatrix2::from_bloch(w);
}

Mat2 bb84_projector(int basis, int outcome) {
  return bb84_state(BB84Label{outcome, basis}).matrix();
}

double measure_prob(const DensityMatrix2& state, int basis, int outcome) {
  const double p = trace_product(bb84_projector(basis, outcome), state.matrix());
  return std::clamp(p, 0.0, 1.0);
}

MaxConfidence max_confidence(double prior, const DensityMatrix2& target,
                             const DensityMatrix2& mixture) {
  if (to_pauli(mixture.matrix()).lambda_min() <= kRankThreshold) {
    throw std::invalid_argument("singular ensemble mixture");
  }
  const Mat2 r = hermitian_function(mixture.matrix(), [](double l) { return 1.0 / std::sqrt(l); });
  const PauliForm m = to_pauli(r * target.matrix() * r);
  const double len = m.h.norm();
  const BlochVector dir = len > 0.0 ? m.h * (1.0 / len) : BlochVector{0, 0, 1};
  const Mat2 top = Mat2::from_pauli(0.5, dir * 0.5);
  MaxConfidence out;
  out.value = std::clamp(prior * m.lambda_max(), 0.0, 1.0);
  out.q = r * top * r;
  return out;
}

double max_confidence_value(double prior, const DensityMatrix2& target,
                            const DensityMatrix2& mixture) {
  return max_confidence(prior, target, mixture).value;
}

}  // namespace stoken
