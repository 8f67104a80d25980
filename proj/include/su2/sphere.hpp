/**
 * \file sphere.hpp
 * \brief SU(2) seen as the unit sphere S^3: spherical translation, the
 * integral modulus of continuity, and the almost-everywhere convergence test
 * int_0^1 Omega^2(f, t)/t dt < infinity.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "su2/group.hpp"
#include "su2/quadrature.hpp"
#include "su2/spectral.hpp"

namespace su2 {

/// A point of S^3 in R^4.
struct UnitVec4 {
  std::array<double, 4> v{1.0, 0.0, 0.0, 0.0};

  UnitVec4() = default;
  explicit UnitVec4(const std::array<double, 4>& c) {
    const double n2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3];
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-10)
      throw std::invalid_argument("UnitVec4: not a unit vector");
    const double s = 1.0 / std::sqrt(n2);
    for (std::size_t i = 0; i < 4; ++i) v[i] = c[i] * s;
  }
  double operator[](std::size_t i) const { return v[i]; }
  double dot(const UnitVec4& o) const { return v[0] * o.v[0] + v[1] * o.v[1] + v[2] * o.v[2] + v[3] * o.v[3]; }
};

/// The isometry SU(2) -> S^3: the same four numbers.
inline UnitVec4 eta(const GroupElement& x) { return UnitVec4(x.components()); }

inline GroupElement eta_inverse(const UnitVec4& u) { return GroupElement(u[0], u[1], u[2], u[3]); }

using Matrix4 = std::array<std::array<double, 4>, 4>;

/// Orthogonal frame O with O e_1 = eta(x(phi0, theta0, psi0)).
struct RotationFrame {
  Matrix4 O{};
  SphericalCoords base;

  std::array<double, 4> apply(const std::array<double, 4>& u) const {
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i)
      out[i] = O[i][0] * u[0] + O[i][1] * u[1] + O[i][2] * u[2] + O[i][3] * u[3];
    return out;
  }
  std::array<double, 4> first_column() const { return {O[0][0], O[1][0], O[2][0], O[3][0]}; }
};

inline double orthogonality_defect(const Matrix4& O) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += O[k][i] * O[k][j];
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

inline double determinant(const Matrix4& m) {
  // cofactor expansion along the first row
  auto det3 = [&](std::size_t skip) {
    std::array<std::size_t, 3> c{};
    for (std::size_t j = 0, k = 0; j < 4; ++j)
      if (j != skip) c[k++] = j;
    return m[1][c[0]] * (m[2][c[1]] * m[3][c[2]] - m[2][c[2]] * m[3][c[1]]) -
           m[1][c[1]] * (m[2][c[0]] * m[3][c[2]] - m[2][c[2]] * m[3][c[0]]) +
           m[1][c[2]] * (m[2][c[0]] * m[3][c[1]] - m[2][c[1]] * m[3][c[0]]);
  };
  double d = 0.0;
  for (std::size_t j = 0; j < 4; ++j) d += (j % 2 == 0 ? 1.0 : -1.0) * m[0][j] * det3(j);
  return d;
}

/// O = cos(theta0) diag(1, -1, -1, -1) + sin(theta0) S(phi0, psi0).
inline RotationFrame frame_matrix(const SphericalCoords& x0) {
  const double cp = std::cos(x0.phi), sp = std::sin(x0.phi);
  const double cs = std::cos(x0.psi), ss = std::sin(x0.psi);
  const Matrix4 S{{{0.0, cp, sp * cs, sp * ss},
                   {cp, 0.0, sp * ss, -sp * cs},
                   {sp * cs, -sp * ss, 0.0, cp},
                   {sp * ss, sp * cs, -cp, 0.0}}};
  const double ct = std::cos(x0.theta), st = std::sin(x0.theta);
  RotationFrame f;
  f.base = x0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) f.O[i][j] = (i == j ? (i == 0 ? ct : -ct) : 0.0) + st * S[i][j];
  if (orthogonality_defect(f.O) > 1e-8) throw std::logic_error("frame_matrix: O is not orthogonal");
  const auto x = from_spherical(x0).components();
  const auto col = f.first_column();
  for (std::size_t i = 0; i < 4; ++i)
    if (std::abs(col[i] - x[i]) > 1e-8) throw std::logic_error("frame_matrix: O e1 differs from the base point");
  return f;
}

/**
 * \brief (T_theta F)(x) = 1/(4 pi) int int F(cos(theta) x + sin(theta) O v) sin(phi) dpsi dphi,
 * v = (0, cos phi, sin phi cos psi, sin phi sin psi), x = O e_1.
 */
template <class SphereFn>
double spherical_translate(const SphereFn& F, const RotationFrame& frame, double theta, const SphereRule& rule) {
  const detail::SphereNodes nodes(rule);
  const auto x = frame.first_column();
  const double ct = std::cos(theta), st = std::sin(theta);
  CompensatedSum acc;
  for (std::size_t k = 0; k < nodes.dirs.size(); ++k) {
    const auto& d = nodes.dirs[k];
    const auto ov = frame.apply({0.0, d[0], d[1], d[2]});
    std::array<double, 4> p{};
    for (std::size_t i = 0; i < 4; ++i) p[i] = ct * x[i] + st * ov[i];
    const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
    for (double& c : p) c /= n;
    acc += nodes.weights[k] * F(UnitVec4(p));
  }
  return acc.value() / (4.0 * std::numbers::pi);
}

/// Frame built from the chart coordinates of x.
template <class SphereFn>
double spherical_translate(const SphereFn& F, const UnitVec4& x, double theta, const SphereRule& rule) {
  return spherical_translate(F, frame_matrix(to_spherical(eta_inverse(x))), theta, rule);
}

/// delta_theta f: x -> f(x) - [Q_x f](theta).
inline Field delta_theta(const Field& f, double theta, const SphereRule& rule,
                         ProfileMethod method = ProfileMethod::automatic) {
  if (!(theta > 0.0 && theta < std::numbers::pi)) throw std::invalid_argument("delta_theta: theta must lie in (0, pi)");
  const ProfileMethod m = resolve_method(method, f);
  auto nodes = std::make_shared<const detail::SphereNodes>(rule);
  return Field(
      [f, theta, m, nodes](const GroupElement& x) {
        const double q = m == ProfileMethod::zonal ? zonal_mean(*f.profile(), eigen_angle(x), theta)
                                                   : detail::sphere_mean(f, x, theta, *nodes);
        return f(x) - q;
      },
      "delta(" + f.name() + ")");
}

struct ModulusRules {
  /// Haar rule for the outer L^2 norm.
  HaarRule outer = HaarRule::with_nodes(16, 16, 16);
  /// Sphere rule for Q_x f inside the norm.
  SphereRule inner = SphereRule::with_nodes(16, 16);
  ProfileMethod method = ProfileMethod::automatic;
  /// Smallest theta sampled.
  double floor = 1e-4;
  /// Geometric lattice points per factor of two.
  int per_octave = 4;
};

struct DaiResult {
  double estimate = 0.0;       // int_{t_min}^1 Omega^2/t dt
  double estimate_half = 0.0;  // same with t_min / 2
  bool converged = false;      // relative change below 5%
};

/**
 * \brief Integral modulus Omega(f, t) = sup_{0 < theta <= t} ||delta_theta f||_{L^2}.
 *
 * The supremum runs over the fixed lattice theta_k = 2^{-k/per_octave} inside
 * [floor, pi], so Omega(t) is nondecreasing in t and a lower estimate of the
 * true supremum. Norms are memoized per lattice point.
 */
class ModulusEstimator {
 public:
  explicit ModulusEstimator(Field f, ModulusRules rules = {}) : f_(std::move(f)), rules_(std::move(rules)) {
    if (rules_.per_octave < 1) throw std::invalid_argument("ModulusEstimator: per_octave must be positive");
    if (!(rules_.floor > 0.0)) throw std::invalid_argument("ModulusEstimator: floor must be positive");
  }

  /// ||delta_theta f||_{L^2(SU(2))}.
  double difference_norm(double theta) {
    if (auto it = memo_.find(theta); it != memo_.end()) return it->second;
    const Field d = delta_theta(f_, theta, rules_.inner, rules_.method);
    const double sq = haar_integral(
        [&](const GroupElement& x) {
          const double v = d(x);
          return v * v;
        },
        rules_.outer);
    double norm = std::sqrt(std::max(0.0, sq));
    if (norm <= kRoundoff * field_norm()) norm = 0.0;
    memo_.emplace(theta, norm);
    return norm;
  }

  /// ||f||_{L^2}; difference norms at or below kRoundoff times this are reported as 0.
  double field_norm() {
    if (!field_norm_)
      field_norm_ = std::sqrt(haar_integral(
          [&](const GroupElement& x) {
            const double v = f_(x);
            return v * v;
          },
          rules_.outer));
    return *field_norm_;
  }

  static constexpr double kRoundoff = 1e-13;

  /// Lattice points in [floor, t], ascending.
  std::vector<double> lattice(double t) const {
    std::vector<double> pts;
    const double step = std::pow(2.0, -1.0 / rules_.per_octave);
    const int kmin = -static_cast<int>(std::floor(std::log2(std::numbers::pi) * rules_.per_octave));
    for (int k = kmin;; ++k) {
      const double th = std::pow(step, k);
      if (th < rules_.floor) break;
      if (th <= t && th <= std::numbers::pi) pts.push_back(th);
    }
    std::reverse(pts.begin(), pts.end());
    return pts;
  }

  double modulus(double t) {
    if (!(t > 0.0 && t <= std::numbers::pi)) throw std::invalid_argument("integral_modulus: t must lie in (0, pi]");
    const auto pts = lattice(t);
    if (pts.empty()) return difference_norm(t);
    double best = 0.0;
    for (double th : pts) best = std::max(best, difference_norm(th));
    return best;
  }

  /// int_{t_min}^1 Omega^2(t)/t dt; Omega is a step function on the lattice, so
  /// each segment integrates exactly.
  double dai_integral(double t_min) {
    if (!(t_min > 0.0 && t_min < 1.0)) throw std::invalid_argument("dai_criterion: t_min must lie in (0, 1)");
    std::vector<double> cuts{t_min};
    for (double th : lattice(1.0))
      if (th > t_min && th < 1.0) cuts.push_back(th);
    cuts.push_back(1.0);
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double om = modulus(cuts[i]);
      acc += om * om * std::log(cuts[i + 1] / cuts[i]);
    }
    return acc.value();
  }

  DaiResult dai(double t_min) {
    DaiResult r;
    r.estimate = dai_integral(t_min);
    r.estimate_half = dai_integral(0.5 * t_min);
    r.converged = r.estimate_half == 0.0 || std::abs(r.estimate_half - r.estimate) < 0.05 * r.estimate_half;
    return r;
  }

  /// Least-squares slope of log Omega against log t over lattice points in [lo, hi].
  double loglog_slope(double lo, double hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (double th : lattice(hi)) {
      if (th < lo) continue;
      const double om = modulus(th);
      if (!(om > 0.0)) continue;
      const double x = std::log(th), y = std::log(om);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      ++count;
    }
    if (count < 2) throw std::runtime_error("loglog_slope: fewer than two positive samples");
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
  }

  const Field& field() const { return f_; }

 private:
  Field f_;
  ModulusRules rules_;
  std::map<double, double> memo_;
  std::optional<double> field_norm_;
};

inline double integral_modulus(const Field& f, double t, const ModulusRules& rules = {}) {
  ModulusEstimator est(f, rules);
  return est.modulus(t);
}

inline DaiResult dai_criterion(const Field& f, double t_min, const ModulusRules& rules = {}) {
  ModulusEstimator est(f, rules);
  return est.dai(t_min);
}

}  // namespace su2
