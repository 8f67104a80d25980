/**
 * \file spectral.hpp
 * \brief Characters, Dirichlet kernels, and Fourier partial sums on SU(2).
 *
 * S_N f(x) = (f * D_N)(x) with D_N = sum_{n<=N} (n+1) chi_n is computed by
 * three routes:
 *  - direct: the full 3D Haar convolution;
 *  - reduced: S_N f(x) = -1/pi int_0^pi D'_{N+1}(theta) sin(theta) [Q_x f](theta) dtheta,
 *    one profile Q_x f serving every N at once;
 *  - central: for central f, the Chebyshev-U series of F(cos theta) = f(omega(theta)).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "su2/group.hpp"
#include "su2/parallel.hpp"
#include "su2/quadrature.hpp"

namespace su2 {

/// chi_n(omega(theta)) = sin((n+1) theta) / sin(theta) = U_n(cos theta).
inline double character(int n, double theta) {
  if (n < 0) throw std::invalid_argument("character: negative degree");
  const double s = std::sin(theta);
  if (std::abs(s) < 1e-6) {
    // sum_{k=0}^{n} cos((n - 2k) theta), free of the removable singularity
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) acc += std::cos(static_cast<double>(n - 2 * k) * theta);
    return acc;
  }
  return std::sin(static_cast<double>(n + 1) * theta) / s;
}

/// Classical Dirichlet kernel D_m(t) = 1 + 2 sum_{j=1}^m cos(j t).
inline double dirichlet_scalar(int m, double t) {
  if (m < 0) throw std::invalid_argument("dirichlet_scalar: negative index");
  const double s = std::sin(0.5 * t);
  if (std::abs(s) < 1e-6) {
    double acc = 1.0;
    for (int j = 1; j <= m; ++j) acc += 2.0 * std::cos(static_cast<double>(j) * t);
    return acc;
  }
  return std::sin((static_cast<double>(m) + 0.5) * t) / s;
}

/// D'_m(t) = -2 sum_{j=1}^m j sin(j t).
inline double dirichlet_scalar_deriv(int m, double t) {
  if (m < 0) throw std::invalid_argument("dirichlet_scalar_deriv: negative index");
  CompensatedSum acc;
  for (int j = 1; j <= m; ++j) acc += -2.0 * static_cast<double>(j) * std::sin(static_cast<double>(j) * t);
  return acc.value();
}

/// D_N(omega(theta)) = sum_{n<=N} (n+1) chi_n(omega(theta)).
inline double dirichlet_su2(int N, double theta) {
  if (N < 0) throw std::invalid_argument("dirichlet_su2: negative degree");
  CompensatedSum acc;
  for (int n = 0; n <= N; ++n) acc += static_cast<double>(n + 1) * character(n, theta);
  return acc.value();
}

/// chi_n as a central field.
inline Field character_field(int n) {
  if (n < 0) throw std::invalid_argument("character_field: negative degree");
  return Field::central({[n](double t) { return character(n, t); }, {}, 0}, "character:" + std::to_string(n));
}

/// D_N as a central field.
inline Field kernel_field(int N) {
  if (N < 0) throw std::invalid_argument("kernel_field: negative degree");
  return Field::central({[N](double t) { return dirichlet_su2(N, t); }, {}, 0}, "kernel:" + std::to_string(N));
}

// ---------------------------------------------------------------------------
// Direct route

/// S_N f(x) as the 3D convolution f * D_N. The slow reference path.
template <class F>
double partial_sum_direct(const F& f, int N, const GroupElement& x, const HaarRule& r, Warnings* warnings = nullptr) {
  if (N < 0) throw std::invalid_argument("partial_sum_direct: negative degree");
  if (!r.resolves_degree(N))
    warn(warnings, "partial_sum_direct: Haar rule below the node threshold for N=" + std::to_string(N));
  const Field kernel = kernel_field(N);
  return convolve(f, kernel, r, x);
}

/// S_N f(x) for N = 0..n_max from a single pass over the Haar grid.
template <class F>
std::vector<double> partial_sums_direct(const F& f, int n_max, const GroupElement& x, const HaarRule& r,
                                        Warnings* warnings = nullptr) {
  if (n_max < 0) throw std::invalid_argument("partial_sums_direct: negative degree");
  if (!r.resolves_degree(n_max))
    warn(warnings, "partial_sums_direct: Haar rule below the node threshold for N=" + std::to_string(n_max));
  const detail::SphereNodes sphere(r.sphere());
  const std::size_t K = r.theta.size();
  std::vector<double> slices(K);
  parallel_for(K, [&](std::size_t i) {
    const double t = r.theta.nodes[i];
    const double ct = std::cos(t), st = std::sin(t);
    CompensatedSum inner;
    for (std::size_t k = 0; k < sphere.dirs.size(); ++k)
      inner += sphere.weights[k] * f(x * inverse(detail::chart_point(ct, st, sphere.dirs[k])));
    slices[i] = r.theta.weights[i] * st * st * inner.value();
  });
  std::vector<CompensatedSum> sums(static_cast<std::size_t>(n_max) + 1);
  for (std::size_t i = 0; i < K; ++i) {
    double kernel = 0.0;
    for (int N = 0; N <= n_max; ++N) {
      kernel += static_cast<double>(N + 1) * character(N, r.theta.nodes[i]);
      sums[static_cast<std::size_t>(N)] += kernel * slices[i];
    }
  }
  std::vector<double> out;
  out.reserve(sums.size());
  for (const auto& s : sums) out.push_back(HaarRule::normalization * s.value());
  return out;
}

// ---------------------------------------------------------------------------
// Reduced route

enum class ProfileMethod {
  /// zonal for central fields with a profile, sphere quadrature otherwise
  automatic,
  /// (1/4 pi) double integral over the (phi, psi) sphere
  sphere_quadrature,
  /// 1D spherical mean of a central profile; requires a central field
  zonal,
};

/// Q_x f sampled on a theta grid.
struct QProfile {
  std::vector<double> thetas;
  std::vector<double> values;
  GroupElement point;
};

/**
 * \brief Mean of a central profile over the geodesic sphere of radius theta
 * about a point with eigen-angle theta_x.
 *
 * Points z at angle theta from x have cos(eigen_angle(z)) = cos(theta) cos(theta_x)
 * + sin(theta) sin(theta_x) u with u uniform on [-1, 1], which after the change
 * of variables u -> gamma gives
 *   Q = 1/(2 sin(theta) sin(theta_x)) int_{|theta - theta_x|}^{gamma_max} g(gamma) sin(gamma) dgamma.
 */
inline double zonal_mean(const CentralProfile& profile, double theta_x, double theta, std::size_t order = 16) {
  const double s = std::sin(theta) * std::sin(theta_x);
  const double lo = std::abs(theta - theta_x);
  const double sum = theta + theta_x;
  const double hi = sum <= std::numbers::pi ? sum : 2.0 * std::numbers::pi - sum;
  if (s < 1e-12 || hi - lo < 1e-12) return profile.g(0.5 * (lo + hi));
  PanelOptions opt;
  opt.order = order;
  opt.grading_levels = profile.grading_levels;
  const auto rule = composite_gauss_legendre(lo, hi, profile.kinks, opt);
  CompensatedSum num, den;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double w = rule.weights[i] * std::sin(rule.nodes[i]);
    num += w * profile.g(rule.nodes[i]);
    den += w;
  }
  return num.value() / den.value();
}

inline ProfileMethod resolve_method(ProfileMethod m, const Field& f) {
  if (m == ProfileMethod::automatic) return f.is_central() ? ProfileMethod::zonal : ProfileMethod::sphere_quadrature;
  if (m == ProfileMethod::zonal && !f.is_central())
    throw std::invalid_argument("zonal profile requested for a non-central field");
  return m;
}

namespace detail {
inline double sphere_mean(const Field& f, const GroupElement& x, double theta, const SphereNodes& sphere) {
  const double ct = std::cos(theta), st = std::sin(theta);
  CompensatedSum acc;
  // x y^{-1}(phi, theta, psi) with y^{-1} = (cos theta, -sin theta v)
  for (std::size_t k = 0; k < sphere.dirs.size(); ++k) {
    const auto& v = sphere.dirs[k];
    acc += sphere.weights[k] * f(x * GroupElement::normalized(ct, -st * v[0], -st * v[1], -st * v[2]));
  }
  return acc.value() / (4.0 * std::numbers::pi);
}
}  // namespace detail

/// [Q_x f](theta) = 1/(4 pi) int int f(x y^{-1}(phi, theta, psi)) sin(phi) dpsi dphi.
inline double q_value(const Field& f, const GroupElement& x, double theta, const SphereRule& sphere,
                      ProfileMethod method = ProfileMethod::automatic) {
  if (resolve_method(method, f) == ProfileMethod::zonal) return zonal_mean(*f.profile(), eigen_angle(x), theta);
  return detail::sphere_mean(f, x, theta, detail::SphereNodes(sphere));
}

inline QProfile q_profile(const Field& f, const GroupElement& x, std::span<const double> thetas,
                          const SphereRule& sphere, ProfileMethod method = ProfileMethod::automatic) {
  QProfile out{std::vector<double>(thetas.begin(), thetas.end()), std::vector<double>(thetas.size()), x};
  if (resolve_method(method, f) == ProfileMethod::zonal) {
    const double tx = eigen_angle(x);
    parallel_for(thetas.size(), [&](std::size_t i) { out.values[i] = zonal_mean(*f.profile(), tx, thetas[i]); });
  } else {
    const detail::SphereNodes nodes(sphere);
    parallel_for(thetas.size(), [&](std::size_t i) { out.values[i] = detail::sphere_mean(f, x, thetas[i], nodes); });
  }
  return out;
}

struct ReducedRules {
  QuadratureRule1D theta;
  SphereRule sphere;
  ProfileMethod method = ProfileMethod::automatic;
  /// Panel order for the kink-aligned theta rule used with central profiles.
  std::size_t panel_order = 12;

  /// theta sized for degree N; (phi, psi) sized for the field, independent of N.
  static ReducedRules for_degree(int N) {
    return {gauss_legendre(default_node_count(N), 0.0, std::numbers::pi), SphereRule::standard()};
  }
};

/**
 * \brief The theta rule actually used for f at x.
 *
 * For a central profile with kinks, Q_x f is non-smooth where the sphere of
 * radius theta about x touches a kink kappa of g (or a pole), i.e. at
 * |theta_x - kappa|, theta_x + kappa and 2 pi - kappa - theta_x. Panels are
 * aligned to those angles.
 */
inline QuadratureRule1D reduced_theta_rule(const ReducedRules& rules, const Field& f, const GroupElement& x,
                                           int n_max) {
  if (resolve_method(rules.method, f) != ProfileMethod::zonal || f.profile()->kinks.empty()) return rules.theta;
  const double tx = eigen_angle(x);
  std::vector<double> kappas = f.profile()->kinks;
  kappas.push_back(0.0);
  kappas.push_back(std::numbers::pi);
  std::vector<double> breaks;
  for (double k : kappas) {
    breaks.push_back(std::abs(tx - k));
    breaks.push_back(tx + k);
    breaks.push_back(2.0 * std::numbers::pi - k - tx);
  }
  PanelOptions opt;
  opt.order = rules.panel_order;
  opt.grading_levels = f.profile()->grading_levels;
  opt.max_width = std::numbers::pi / static_cast<double>(std::max(8, n_max + 2));
  return composite_gauss_legendre(0.0, std::numbers::pi, breaks, opt);
}

/// S_N for N = 0..n_max from a profile sampled at the nodes of `theta_rule`.
inline std::vector<double> partial_sums_from_profile(const QProfile& q, const QuadratureRule1D& theta_rule, int n_max) {
  if (q.values.size() != theta_rule.size()) throw std::invalid_argument("partial_sums_from_profile: grid mismatch");
  std::vector<CompensatedSum> sums(static_cast<std::size_t>(n_max) + 1);
  for (std::size_t i = 0; i < theta_rule.size(); ++i) {
    const double t = theta_rule.nodes[i];
    const double base = -theta_rule.weights[i] * std::sin(t) * q.values[i] / std::numbers::pi;
    double dprime = 0.0;  // D'_{N+1}(t), accumulated
    for (int N = 0; N <= n_max; ++N) {
      const double j = static_cast<double>(N + 1);
      if (N == 0) dprime = -2.0 * std::sin(t);
      else dprime += -2.0 * j * std::sin(j * t);
      sums[static_cast<std::size_t>(N)] += base * dprime;
    }
  }
  std::vector<double> out;
  for (const auto& s : sums) out.push_back(s.value());
  return out;
}

/// S_N f(x) for N = 0..n_max through one Q_x f profile.
inline std::vector<double> partial_sums_reduced(const Field& f, int n_max, const GroupElement& x,
                                                const ReducedRules& rules, Warnings* warnings = nullptr) {
  if (n_max < 0) throw std::invalid_argument("partial_sums_reduced: negative degree");
  const QuadratureRule1D theta = reduced_theta_rule(rules, f, x, n_max);
  if (theta.size() < minimum_node_count(n_max))
    warn(warnings, "partial_sums_reduced: theta rule below the node threshold for N=" + std::to_string(n_max));
  const QProfile q = q_profile(f, x, theta.nodes, rules.sphere, rules.method);
  return partial_sums_from_profile(q, theta, n_max);
}

inline double partial_sum_reduced(const Field& f, int N, const GroupElement& x, const ReducedRules& rules,
                                  Warnings* warnings = nullptr) {
  return partial_sums_reduced(f, N, x, rules, warnings).back();
}

// ---------------------------------------------------------------------------
// Central route: Fourier series against U_n with weight sqrt(1 - t^2)

struct ChebyshevSeries {
  std::vector<double> coeffs;
  int max_degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// c_n = 2/pi int_0^pi F(cos theta) U_n(cos theta) sin^2(theta) dtheta.
template <class Fn>
ChebyshevSeries chebyshev_coeffs(const Fn& F, int n_max, const QuadratureRule1D& theta_rule) {
  if (n_max < 0) throw std::invalid_argument("chebyshev_coeffs: negative degree");
  ChebyshevSeries s;
  s.coeffs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  std::vector<double> fw(theta_rule.size());
  for (std::size_t i = 0; i < theta_rule.size(); ++i) {
    const double t = theta_rule.nodes[i], st = std::sin(t);
    fw[i] = theta_rule.weights[i] * F(std::cos(t)) * st * st;
  }
  for (int n = 0; n <= n_max; ++n) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < theta_rule.size(); ++i) acc += fw[i] * character(n, theta_rule.nodes[i]);
    s.coeffs[static_cast<std::size_t>(n)] = 2.0 / std::numbers::pi * acc.value();
  }
  return s;
}

template <class Fn>
ChebyshevSeries chebyshev_coeffs(const Fn& F, int n_max) {
  return chebyshev_coeffs(F, n_max, gauss_legendre(default_node_count(n_max), 0.0, std::numbers::pi));
}

/// Coefficients of a central profile, with panels aligned to its kinks.
inline ChebyshevSeries chebyshev_coeffs(const CentralProfile& p, int n_max) {
  PanelOptions opt;
  opt.order = 16;
  opt.grading_levels = p.grading_levels;
  opt.max_width = std::numbers::pi / static_cast<double>(std::max(8, n_max + 2));
  const auto rule = composite_gauss_legendre(0.0, std::numbers::pi, p.kinks, opt);
  return chebyshev_coeffs([&](double t) { return p.g(std::acos(std::clamp(t, -1.0, 1.0))); }, n_max, rule);
}

/// s_N(F; t) = sum_{n<=N} c_n U_n(t).
inline double chebyshev_partial_sum(const ChebyshevSeries& s, int N, double t) {
  if (N < 0) throw std::invalid_argument("chebyshev_partial_sum: negative degree");
  if (N > s.max_degree()) throw std::out_of_range("chebyshev_partial_sum: N exceeds the series length");
  double u_prev = 1.0, u = 2.0 * t;
  CompensatedSum acc;
  acc += s.coeffs[0];
  for (int n = 1; n <= N; ++n) {
    acc += s.coeffs[static_cast<std::size_t>(n)] * u;
    const double next = 2.0 * t * u - u_prev;
    u_prev = u;
    u = next;
  }
  return acc.value();
}

/**
 * \brief Samples of h -> omega(F, h) log(1/h) for the uniform modulus of
 * continuity on [-1, 1].
 *
 * omega(F, h) is estimated from 2048 equispaced base points and 64 offsets in
 * (0, h] per point, so it is a lower estimate of the true supremum.
 */
template <class Fn>
std::vector<std::pair<double, double>> dini_lipschitz_profile(const Fn& F, std::span<const double> h_grid) {
  constexpr int kBase = 2048, kOffsets = 64;
  std::vector<double> base(kBase);
  for (int i = 0; i < kBase; ++i) base[static_cast<std::size_t>(i)] = F(-1.0 + 2.0 * i / (kBase - 1.0));
  std::vector<std::pair<double, double>> out;
  for (double h : h_grid) {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("dini_lipschitz_profile: h must lie in (0, 1)");
    double modulus = 0.0;
    for (int i = 0; i < kBase; ++i) {
      const double t = -1.0 + 2.0 * i / (kBase - 1.0);
      for (int j = 1; j <= kOffsets; ++j) {
        const double s = t + h * j / static_cast<double>(kOffsets);
        if (s > 1.0) break;
        modulus = std::max(modulus, std::abs(F(s) - base[static_cast<std::size_t>(i)]));
      }
    }
    out.emplace_back(h, modulus * std::log(1.0 / h));
  }
  return out;
}

}  // namespace su2
