#pragma once

#include <array>
#include <complex>

namespace stoken {

using cplx = std::complex<double>;

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector cross(const BlochVector& o) const;
  BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
};

// Plain 2x2 complex matrix, row-major.
struct Mat2 {
  cplx a00{0.0}, a01{0.0}, a10{0.0}, a11{0.0};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  // h0*I + h.x*X + h.y*Y + h.z*Z
  static Mat2 from_pauli(double h0, const BlochVector& h);

  Mat2 operator+(const Mat2& o) const;
  Mat2 operator-(const Mat2& o) const;
  Mat2 operator*(const Mat2& o) const;
  Mat2 operator*(double s) const;
  Mat2 adjoint() const;
  cplx trace() const { return a00 + a11; }
  double max_abs_diff(const Mat2& o) const;
};

// Pauli coordinates of a Hermitian matrix: H = h0*I + h.sigma.
struct PauliForm {
  double h0 = 0.0;
  BlochVector h;

  double lambda_max() const { return h0 + h.norm(); }
  double lambda_min() const { return h0 - h.norm(); }
};

PauliForm to_pauli(const Mat2& hermitian);

// Re Tr[A B]
double trace_product(const Mat2& a, const Mat2& b);

struct BB84Label {
  int t = 0;  // encoded bit
  int u = 0;  // basis

  int index() const { return 2 * t + u; }
  bool operator==(const BB84Label&) const = default;
};

class DensityMatrix2 {
 public:
  DensityMatrix2();  // |0><0|

  // Throws std::invalid_argument unless Hermitian, unit trace and PSD to 1e-12.
  static DensityMatrix2 from_matrix(const Mat2& m);
  static DensityMatrix2 from_bloch(const BlochVector& r);

  const Mat2& matrix() const { return m_; }
  BlochVector bloch() const;
  bool is_pure(double tol = 1e-9) const;

 private:
  explicit DensityMatrix2(const Mat2& m) : m_(m) {}
  Mat2 m_;
};

DensityMatrix2 bb84_state(BB84Label label);

// Angle between the Bloch vectors of two states, in radians.
double bloch_angle(const DensityMatrix2& a, const DensityMatrix2& b);

// Azimuth zero points along +z projected orthogonally to the state's Bloch
// vector; +x replaces +z when the state sits at a pole.
DensityMatrix2 deviate_on_cone(const DensityMatrix2& state, double polar, double azimuth);

double measure_prob(const DensityMatrix2& state, int basis, int outcome);

// Projector of the BB84 measurement element (outcome, basis).
Mat2 bb84_projector(int basis, int outcome);

// Spectral f(H) of a Hermitian matrix.
template <class F>
Mat2 hermitian_function(const Mat2& h, F f) {
  const PauliForm p = to_pauli(h);
  const double r = p.h.norm();
  const double lp = f(p.h0 + r);
  const double lm = f(p.h0 - r);
  if (r == 0.0) return Mat2::identity() * lp;
  return Mat2::from_pauli(0.5 * (lp + lm), p.h * (0.5 * (lp - lm) / r));
}

struct MaxConfidence {
  double value = 0.0;
  Mat2 q;  // rank-1 maximizer, scaled so that Tr[q rho] = 1
};

inline constexpr double kRankThreshold = 1e-14;

MaxConfidence max_confidence(double prior, const DensityMatrix2& target,
                             const DensityMatrix2& mixture);

double max_confidence_value(double prior, const DensityMatrix2& target,
                            const DensityMatrix2& mixture);

}  // namespace stoken
