/**
 * \file group.hpp
 * \brief Elements of SU(2) stored as unit quaternions, the bi-invariant
 * metric, and the (phi, theta, psi) spherical chart.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace su2 {

/// Chart coordinates. theta is the eigen-angle of the parametrized element.
struct SphericalCoords {
  double phi = 0.0;    // [0, pi]
  double theta = 0.0;  // [0, pi]
  double psi = 0.0;    // [0, 2 pi]
};

/**
 * \brief A point of SU(2).
 *
 * The matrix
 *   [  a1 + i a2   b1 + i b2 ]
 *   [ -b1 + i b2   a1 - i a2 ]
 * is stored as the unit 4-vector (a1, a2, b1, b2). Every public construction
 * path checks the unit-norm invariant and renormalizes.
 */
class GroupElement {
 public:
  static constexpr double kNormTolerance = 1e-10;

  constexpr GroupElement() = default;

  GroupElement(double a1, double a2, double b1, double b2) {
    const double n2 = a1 * a1 + a2 * a2 + b1 * b1 + b2 * b2;
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kNormTolerance)
      throw std::invalid_argument("GroupElement: components are not a unit 4-vector");
    const double s = 1.0 / std::sqrt(n2);
    v_ = {a1 * s, a2 * s, b1 * s, b2 * s};
  }

  /// Rescales an arbitrary nonzero 4-vector onto the sphere.
  static GroupElement normalized(double a1, double a2, double b1, double b2) {
    const double n2 = a1 * a1 + a2 * a2 + b1 * b1 + b2 * b2;
    if (!(n2 > 0.0) || !std::isfinite(n2))
      throw std::invalid_argument("GroupElement::normalized: zero or non-finite vector");
    const double s = 1.0 / std::sqrt(n2);
    return GroupElement(Raw{}, a1 * s, a2 * s, b1 * s, b2 * s);
  }

  double a1() const { return v_[0]; }
  double a2() const { return v_[1]; }
  double b1() const { return v_[2]; }
  double b2() const { return v_[3]; }
  const std::array<double, 4>& components() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  struct Raw {};
  GroupElement(Raw, double a1, double a2, double b1, double b2) : v_{a1, a2, b1, b2} {}

  friend GroupElement multiply(const GroupElement&, const GroupElement&);
  friend GroupElement inverse(const GroupElement&);

  std::array<double, 4> v_{1.0, 0.0, 0.0, 0.0};
};

inline GroupElement identity() { return GroupElement{}; }
inline GroupElement negative_identity() { return GroupElement(-1.0, 0.0, 0.0, 0.0); }

/// Matrix product re-read as a 4-vector, renormalized.
inline GroupElement multiply(const GroupElement& x, const GroupElement& y) {
  // x = [[p, q], [-conj(q), conj(p)]], p = a1 + i a2, q = b1 + i b2.
  const double p_re = x.v_[0], p_im = x.v_[1], q_re = x.v_[2], q_im = x.v_[3];
  const double r_re = y.v_[0], r_im = y.v_[1], s_re = y.v_[2], s_im = y.v_[3];
  // top-left  p r - q conj(s)
  const double a1 = p_re * r_re - p_im * r_im - (q_re * s_re + q_im * s_im);
  const double a2 = p_re * r_im + p_im * r_re - (q_im * s_re - q_re * s_im);
  // top-right p s + q conj(r)
  const double b1 = p_re * s_re - p_im * s_im + (q_re * r_re + q_im * r_im);
  const double b2 = p_re * s_im + p_im * s_re + (q_im * r_re - q_re * r_im);
  const double s = 1.0 / std::sqrt(a1 * a1 + a2 * a2 + b1 * b1 + b2 * b2);
  return GroupElement(GroupElement::Raw{}, a1 * s, a2 * s, b1 * s, b2 * s);
}

inline GroupElement operator*(const GroupElement& x, const GroupElement& y) { return multiply(x, y); }

/// Conjugate transpose.
inline GroupElement inverse(const GroupElement& x) {
  return GroupElement(GroupElement::Raw{}, x.v_[0], -x.v_[1], -x.v_[2], -x.v_[3]);
}

/// d(x, y) = sqrt(tr((x - y)(x - y)^*) / 2), the Euclidean chord in R^4.
inline double distance(const GroupElement& x, const GroupElement& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

inline GroupElement from_spherical(const SphericalCoords& c) {
  const double st = std::sin(c.theta), sp = std::sin(c.phi);
  return GroupElement::normalized(std::cos(c.theta), st * std::cos(c.phi), st * sp * std::cos(c.psi),
                                  st * sp * std::sin(c.psi));
}

/// The theta in [0, pi] with x conjugate to diag(e^{i theta}, e^{-i theta}).
/// Equal to arccos(a1) on the sphere; the atan2 form keeps full precision near +-e.
inline double eigen_angle(const GroupElement& x) {
  return std::atan2(std::sqrt(x.a2() * x.a2() + x.b1() * x.b1() + x.b2() * x.b2()), x.a1());
}

/// Chart inverse; at the degenerate loci (theta or phi in {0, pi}) the free
/// angles are reported as 0.
inline SphericalCoords to_spherical(const GroupElement& x) {
  SphericalCoords c;
  c.theta = eigen_angle(x);
  const double rho = std::hypot(x.b1(), x.b2());
  c.phi = std::atan2(rho, x.a2());
  double psi = std::atan2(x.b2(), x.b1());
  if (psi < 0.0) psi += 2.0 * std::numbers::pi;
  c.psi = psi;
  return c;
}

/// diag(e^{i theta}, e^{-i theta}).
inline GroupElement omega(double theta) {
  return GroupElement::normalized(std::cos(theta), std::sin(theta), 0.0, 0.0);
}

/// Haar-uniform sample (normalized Gaussian 4-vector).
template <class Rng>
GroupElement random_element(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    const double a = gauss(rng), b = gauss(rng), c = gauss(rng), d = gauss(rng);
    if (a * a + b * b + c * c + d * d > 1e-12) return GroupElement::normalized(a, b, c, d);
  }
}

}  // namespace su2
