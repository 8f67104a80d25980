/**
 * \file witness.hpp
 * \brief Sawtooth divergence witnesses and the growth of S_n f_n(e).
 *
 * g_n is the piecewise linear function on [0, pi] with g_n(2 k pi/(2n+3)) = (-1)^k
 * for 0 <= k <= n+1 and g_n(pi) = 0; f_n(x) = g_n(eigen_angle(x)). At the
 * identity,
 *   Lambda_n(f) = S_n f(e)
 *     = 1/pi int f(omega) cos^2(theta/2) D_{n+1}(theta) dtheta
 *       - (2n+3)/pi int f(omega) cos((n + 3/2) theta) cos(theta/2) dtheta.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "su2/group.hpp"
#include "su2/quadrature.hpp"
#include "su2/spectral.hpp"

namespace su2 {

class SawtoothWitness {
 public:
  explicit SawtoothWitness(int n) : n_(n) {
    if (n < 0) throw std::invalid_argument("SawtoothWitness: negative degree");
    step_ = 2.0 * std::numbers::pi / (2.0 * n + 3.0);
    for (int k = 0; k <= n + 1; ++k) breakpoints_.push_back(step_ * k);
    breakpoints_.push_back(std::numbers::pi);
  }

  int n() const { return n_; }
  /// theta_k = 2 k pi / (2n+3) for k = 0..n+1, followed by pi.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  /// Panel width 2 pi / (2n+3).
  double step() const { return step_; }

  double operator()(double theta) const {
    theta = std::clamp(theta, 0.0, std::numbers::pi);
    const double last = breakpoints_[static_cast<std::size_t>(n_ + 1)];
    const double last_sign = (n_ + 1) % 2 == 0 ? 1.0 : -1.0;
    if (theta >= last) return last_sign * (std::numbers::pi - theta) / (std::numbers::pi - last);
    const int k = std::min(n_, static_cast<int>(theta / step_));
    const double s = (theta - breakpoints_[static_cast<std::size_t>(k)]) / step_;
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    return sign * (1.0 - 2.0 * s);
  }

 private:
  int n_;
  double step_;
  std::vector<double> breakpoints_;
};

inline double sawtooth_eval(const SawtoothWitness& w, double theta) { return w(theta); }

/// f_n as a central field; Lipschitz, hence alpha-Hoelder for every alpha in (0, 1).
inline Field witness_field(int n, double alpha = 0.5) {
  const SawtoothWitness w(n);
  std::vector<double> kinks(w.breakpoints().begin() + 1, w.breakpoints().end() - 1);
  return Field::central({[w](double t) { return w(t); }, std::move(kinks), 0}, "witness:" + std::to_string(n), alpha);
}

inline void check_exponent(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("Hoelder exponent must lie in (0, 1)");
}

/// (pi/2)^alpha (2 pi/(2n+3))^(1-alpha), the seminorm bound as stated in the
/// construction. It is not a valid bound for the sampled quotient; see
/// holder_seminorm_valid_bound.
inline double holder_seminorm_bound(int n, double alpha) {
  check_exponent(alpha);
  if (n < 0) throw std::invalid_argument("holder_seminorm_bound: negative degree");
  return std::pow(std::numbers::pi / 2.0, alpha) * std::pow(2.0 * std::numbers::pi / (2.0 * n + 3.0), 1.0 - alpha);
}

/**
 * \brief A seminorm bound that does hold for f_n.
 *
 * |g(a) - g(b)| <= min(2, L |a - b|) <= 2^(1-alpha) (L |a - b|)^alpha with slope
 * L = (2n+3)/pi, and |eigen_angle(x) - eigen_angle(y)| <= (pi/2) d(x, y), so the
 * quotient is at most 2^(1-alpha) ((2n+3)/2)^alpha.
 */
inline double holder_seminorm_valid_bound(int n, double alpha) {
  check_exponent(alpha);
  if (n < 0) throw std::invalid_argument("holder_seminorm_valid_bound: negative degree");
  return std::pow(2.0, 1.0 - alpha) * std::pow((2.0 * n + 3.0) / 2.0, alpha);
}

/**
 * \brief Largest |f(x) - f(y)| / d(x, y)^alpha over sampled pairs.
 *
 * Half the pairs are independent Haar samples, half are perturbations
 * y = x z with d(z, e) spread log-uniformly over [1e-4, 1].
 */
inline double max_holder_quotient(const Field& f, double alpha, std::size_t pairs, std::uint64_t seed) {
  check_exponent(alpha);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const GroupElement x = random_element(rng);
    GroupElement y;
    if (i % 2 == 0) {
      y = random_element(rng);
    } else {
      const double scale = std::pow(10.0, -4.0 * unit(rng));
      double u1 = gauss(rng), u2 = gauss(rng), u3 = gauss(rng);
      const double n = std::sqrt(u1 * u1 + u2 * u2 + u3 * u3);
      const double s = std::sin(scale) / n;
      y = x * GroupElement::normalized(std::cos(scale), s * u1, s * u2, s * u3);
    }
    const double d = distance(x, y);
    if (d <= 0.0) continue;
    best = std::max(best, std::abs(f(x) - f(y)) / std::pow(d, alpha));
  }
  return best;
}

struct LambdaDecomposition {
  double kernel_term = 0.0;       // 1/pi int f cos^2(theta/2) D_{n+1}
  double oscillation_term = 0.0;  // (2n+3)/pi int f cos((n+3/2) theta) cos(theta/2)
  double value = 0.0;             // kernel_term - oscillation_term
};

struct LambdaRules {
  /// Gauss-Legendre order on each breakpoint panel.
  std::size_t panel_order = 8;
};

/// Lambda_n(f) = S_n f(e) by the two-term decomposition. Requires a central field.
inline LambdaDecomposition lambda_e_terms(const Field& f, int n, const LambdaRules& rules = {},
                                          Warnings* warnings = nullptr) {
  if (!f.is_central()) throw std::invalid_argument("lambda_e_terms: field is not central");
  if (n < 0) throw std::invalid_argument("lambda_e_terms: negative degree");
  if (rules.panel_order < 4)
    warn(warnings, "lambda_e: panel order " + std::to_string(rules.panel_order) +
                       " does not resolve the oscillation n+3/2 for n=" + std::to_string(n));
  const SawtoothWitness w(n);
  std::vector<double> breaks = w.breakpoints();
  breaks.insert(breaks.end(), f.profile()->kinks.begin(), f.profile()->kinks.end());
  PanelOptions opt;
  opt.order = std::max<std::size_t>(1, rules.panel_order);
  opt.grading_levels = f.profile()->grading_levels;
  const auto rule = composite_gauss_legendre(0.0, std::numbers::pi, breaks, opt);
  const double freq = n + 1.5;
  CompensatedSum kernel, osc;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i], wt = rule.weights[i];
    const double g = f.profile()->g(t);
    const double c = std::cos(0.5 * t);
    kernel += wt * g * c * c * dirichlet_scalar(n + 1, t);
    osc += wt * g * std::cos(freq * t) * c;
  }
  LambdaDecomposition out;
  out.kernel_term = kernel.value() / std::numbers::pi;
  out.oscillation_term = (2.0 * n + 3.0) / std::numbers::pi * osc.value();
  out.value = out.kernel_term - out.oscillation_term;
  return out;
}

/// Lambda_n(f) = S_n f(e); non-central fields fall back to the reduced route.
inline double lambda_e(const Field& f, int n, const LambdaRules& rules = {}, Warnings* warnings = nullptr) {
  if (f.is_central()) return lambda_e_terms(f, n, rules, warnings).value;
  return partial_sum_reduced(f, n, identity(), ReducedRules::for_degree(n), warnings);
}

/// (1/pi) int_0^pi |D_m(t)| dt, integrated panel-by-panel between the zeros 2 pi k/(2m+1).
inline double dirichlet_l1(int m, std::size_t order = 16) {
  if (m < 0) throw std::invalid_argument("dirichlet_l1: negative index");
  if (m == 0) return 1.0;
  std::vector<double> zeros;
  for (int k = 1; k <= m; ++k) zeros.push_back(2.0 * std::numbers::pi * k / (2.0 * m + 1.0));
  PanelOptions opt;
  opt.order = order;
  const auto rule = composite_gauss_legendre(0.0, std::numbers::pi, zeros, opt);
  return rule.integrate([m](double t) { return std::abs(dirichlet_scalar(m, t)); }) / std::numbers::pi;
}

/// ||D_N||_{L^1(SU(2))} = 2/pi int_0^pi |D_N(omega(theta))| sin^2(theta) dtheta.
inline double su2_kernel_l1(int N, std::size_t order = 16) {
  if (N < 0) throw std::invalid_argument("su2_kernel_l1: negative degree");
  // D_N(omega) sin = -D'_{N+1}/2; locate sign changes on a fine grid and bisect
  auto h = [N](double t) { return dirichlet_su2(N, t) * std::sin(t); };
  const int grid = 64 * (N + 2);
  std::vector<double> zeros;
  double prev_t = 0.0, prev = h(1e-9);
  for (int i = 1; i <= grid; ++i) {
    const double t = std::numbers::pi * i / grid;
    const double v = h(i == grid ? std::numbers::pi - 1e-9 : t);
    if ((prev < 0.0) != (v < 0.0)) {
      double lo = prev_t, hi = t, flo = prev;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = h(mid);
        if ((fm < 0.0) == (flo < 0.0)) lo = mid, flo = fm;
        else hi = mid;
      }
      zeros.push_back(0.5 * (lo + hi));
    }
    prev_t = t;
    prev = v;
  }
  PanelOptions opt;
  opt.order = order;
  const auto rule = composite_gauss_legendre(0.0, std::numbers::pi, zeros, opt);
  return 2.0 / std::numbers::pi * rule.integrate([N](double t) {
    const double s = std::sin(t);
    return std::abs(dirichlet_su2(N, t)) * s * s;
  });
}

/// (2/3){D_{n+1}(pi/(2n+3)) - 1} - (4/pi^2) log(n+1): the floor as stated.
inline double lambda_lower_bound(int n) {
  if (n < 0) throw std::invalid_argument("lambda_lower_bound: negative degree");
  const double d = dirichlet_scalar(n + 1, std::numbers::pi / (2.0 * n + 3.0));
  return 2.0 / 3.0 * (d - 1.0) - 4.0 / (std::numbers::pi * std::numbers::pi) * std::log(n + 1.0);
}

/// The stated floor after D_{n+1}(pi/(2n+3)) >= 2(2n+3)/pi.
inline double lambda_lower_bound_sine(int n) {
  if (n < 0) throw std::invalid_argument("lambda_lower_bound_sine: negative degree");
  return 2.0 / 3.0 * (2.0 * (2.0 * n + 3.0) / std::numbers::pi - 1.0) -
         4.0 / (std::numbers::pi * std::numbers::pi) * std::log(n + 1.0);
}

/**
 * \brief A floor for |Lambda_n(f_n)| that the interval estimates actually give.
 *
 * sum_{k=1}^{n+1} cos(k pi/(2n+3)) = (D_{n+1}(pi/(2n+3)) - 1)/2, so the
 * oscillation term is at least (1/3){D_{n+1} - 1}; the kernel term is bounded
 * by the exact L^1 norm (1/pi) int |D_{n+1}| instead of its asymptotic form.
 */
inline double lambda_lower_bound_corrected(int n) {
  if (n < 0) throw std::invalid_argument("lambda_lower_bound_corrected: negative degree");
  const double d = dirichlet_scalar(n + 1, std::numbers::pi / (2.0 * n + 3.0));
  return (d - 1.0) / 3.0 - dirichlet_l1(n + 1);
}

/// (L_z f)(y) = f(z y). Not central in general; Hoelder data carries over.
inline Field translate_field(const Field& f, const GroupElement& z) {
  return Field([f, z](const GroupElement& y) { return f(z * y); }, "L(" + f.name() + ")", f.claimed_alpha());
}

struct DivergenceOptions {
  double alpha = 0.5;
  /// Gauss-Legendre order per breakpoint panel.
  std::size_t panel_order = 8;
  /// (phi, psi) nodes for the translated profiles.
  std::size_t sphere_nodes = 16;
};

struct DivergenceRow {
  int n = 0;
  std::size_t point_index = 0;
  GroupElement point;
  double lambda_abs = 0.0;             // |S_n(L_{x^{-1}} f_n)(x)|, reduced route at x
  double lambda_e = 0.0;               // Lambda_n(f_n) by the decomposition
  double lower_bound = 0.0;            // lambda_lower_bound
  double lower_bound_corrected = 0.0;  // lambda_lower_bound_corrected
  double l1_reference = 0.0;           // (1/pi) int |D_{n+1}|
  double kernel_l1 = 0.0;              // ||D_n||_{L^1(SU(2))}
  double lip_norm_bound = 0.0;         // 1 + pi
  double holder_norm_bound = 0.0;      // 1 + holder_seminorm_valid_bound
  double ratio_to_2n3 = 0.0;
  Warnings warnings;
};

/// Growth of the translated witnesses at each requested point, in input order.
inline std::vector<DivergenceRow> divergence_table(std::span<const int> n_list, std::span<const GroupElement> points,
                                                   const DivergenceOptions& opt = {}) {
  std::vector<DivergenceRow> rows;
  for (int n : n_list) {
    if (n < 0) throw std::invalid_argument("divergence_table: negative degree");
    const Field fn = witness_field(n, opt.alpha);
    Warnings shared;
    LambdaRules lr;
    lr.panel_order = opt.panel_order;
    const double lam = lambda_e(fn, n, lr, &shared);
    const double floor = lambda_lower_bound(n);
    const double corrected = lambda_lower_bound_corrected(n);
    const double l1 = dirichlet_l1(n + 1);
    const double kl1 = su2_kernel_l1(n);
    const double holder = 1.0 + holder_seminorm_valid_bound(n, opt.alpha);

    ReducedRules rr;
    PanelOptions po;
    po.order = std::max<std::size_t>(1, opt.panel_order);
    rr.theta = composite_gauss_legendre(0.0, std::numbers::pi, SawtoothWitness(n).breakpoints(), po);
    rr.sphere = SphereRule::with_nodes(opt.sphere_nodes, opt.sphere_nodes);
    rr.method = ProfileMethod::sphere_quadrature;

    for (std::size_t i = 0; i < points.size(); ++i) {
      DivergenceRow row;
      row.n = n;
      row.point_index = i;
      row.point = points[i];
      row.warnings = shared;
      const Field translated = translate_field(fn, inverse(points[i]));
      row.lambda_abs = std::abs(partial_sum_reduced(translated, n, points[i], rr));
      row.lambda_e = lam;
      row.lower_bound = floor;
      row.lower_bound_corrected = corrected;
      row.l1_reference = l1;
      row.kernel_l1 = kl1;
      row.lip_norm_bound = 1.0 + std::numbers::pi;
      row.holder_norm_bound = holder;
      row.ratio_to_2n3 = row.lambda_abs / (2.0 * n + 3.0);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace su2
