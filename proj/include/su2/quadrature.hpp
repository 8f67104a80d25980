/**
 * \file quadrature.hpp
 * \brief Quadrature rules realizing normalized Haar measure on SU(2), the
 * central-function reduction, and convolution.
 *
 * In the chart x(phi, theta, psi),
 *   int f dmu = 1/(2 pi^2) int_0^pi int_0^pi int_0^{2 pi} f sin^2(theta) sin(phi) dpsi dphi dtheta,
 * and for central f the phi, psi integrals collapse to
 *   int f dmu = 2/pi int_0^pi f(omega(theta)) sin^2(theta) dtheta.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "su2/group.hpp"
#include "su2/parallel.hpp"

namespace su2 {

using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
  if (sink) sink->push_back(std::move(message));
}

struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = 0.0;
  double b = 0.0;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    CompensatedSum s;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s.value();
  }
};

namespace detail {

/// Nodes and weights on [-1, 1] by Newton iteration on the three-term recurrence.
inline QuadratureRule1D compute_gauss_legendre(std::size_t K) {
  QuadratureRule1D r;
  r.a = -1.0;
  r.b = 1.0;
  r.nodes.resize(K);
  r.weights.resize(K);
  const std::size_t half = (K + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(K) + 0.5));
    auto legendre = [K](double t) {
      // (P_K(t), P_K'(t))
      double p0 = 1.0, p1 = t;
      for (std::size_t k = 2; k <= K; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * t * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      const double d = K == 1 ? 1.0 : static_cast<double>(K) * (t * p1 - p0) / (t * t - 1.0);
      return std::pair{p1, d};
    };
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, d] = legendre(x);
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[K - 1 - i] = x;
    r.weights[i] = w;
    r.weights[K - 1 - i] = w;
  }
  if (K % 2 == 1) r.nodes[K / 2] = 0.0;
  return r;
}

enum class RuleKind { gauss_legendre, trapezoid };

inline const QuadratureRule1D& cached_rule(RuleKind kind, std::size_t K, double a, double b) {
  static std::mutex mutex;
  static std::map<std::tuple<RuleKind, std::size_t, double, double>, std::unique_ptr<QuadratureRule1D>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{kind, K, a, b}];
  if (!slot) {
    QuadratureRule1D r;
    if (kind == RuleKind::gauss_legendre) {
      r = compute_gauss_legendre(K);
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (std::size_t i = 0; i < K; ++i) {
        r.nodes[i] = mid + half * r.nodes[i];
        r.weights[i] *= half;
      }
    } else {
      const double h = (b - a) / static_cast<double>(K);
      for (std::size_t i = 0; i < K; ++i) {
        r.nodes.push_back(a + h * static_cast<double>(i));
        r.weights.push_back(h);
      }
    }
    r.a = a;
    r.b = b;
    slot = std::make_unique<QuadratureRule1D>(std::move(r));
  }
  return *slot;
}

}  // namespace detail

/// K-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2K-1.
inline QuadratureRule1D gauss_legendre(std::size_t K, double a, double b) {
  if (K == 0) throw std::invalid_argument("gauss_legendre: K must be positive");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: empty interval");
  return detail::cached_rule(detail::RuleKind::gauss_legendre, K, a, b);
}

/// Uniform rule for periodic integrands on [a, b): nodes a + i h, weights h.
inline QuadratureRule1D periodic_trapezoid(std::size_t K, double a, double b) {
  if (K == 0) throw std::invalid_argument("periodic_trapezoid: K must be positive");
  if (!(a < b)) throw std::invalid_argument("periodic_trapezoid: empty interval");
  return detail::cached_rule(detail::RuleKind::trapezoid, K, a, b);
}

struct PanelOptions {
  std::size_t order = 8;
  /// Geometric refinement levels toward every break point (0 = none); for
  /// algebraic singularities such as |t - c|^alpha.
  std::size_t grading_levels = 0;
  double grading_ratio = 0.15;
  /// Panels wider than this are split uniformly.
  double max_width = std::numeric_limits<double>::infinity();
};

/**
 * \brief Piecewise Gauss-Legendre rule with panel boundaries at `breaks`.
 *
 * Break points outside (a, b) are ignored; duplicates are merged.
 */
inline QuadratureRule1D composite_gauss_legendre(double a, double b, std::span<const double> breaks,
                                                 const PanelOptions& opt = {}) {
  if (!(a < b)) throw std::invalid_argument("composite_gauss_legendre: empty interval");
  if (opt.order == 0) throw std::invalid_argument("composite_gauss_legendre: order must be positive");
  const double merge_tol = 1e-14 * (b - a);
  std::vector<double> pts{a, b};
  for (double t : breaks)
    if (t > a + merge_tol && t < b - merge_tol) pts.push_back(t);
  std::sort(pts.begin(), pts.end());
  std::vector<double> uniq;
  for (double t : pts)
    if (uniq.empty() || t - uniq.back() > merge_tol) uniq.push_back(t);
  uniq.back() = b;

  const bool graded = opt.grading_levels > 0;
  std::vector<std::pair<double, double>> panels;
  auto push_split = [&](double l, double r) {
    const double w = r - l;
    const std::size_t pieces =
        std::isfinite(opt.max_width) ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(w / opt.max_width))) : 1;
    for (std::size_t k = 0; k < pieces; ++k)
      panels.emplace_back(l + w * static_cast<double>(k) / static_cast<double>(pieces),
                          k + 1 == pieces ? r : l + w * static_cast<double>(k + 1) / static_cast<double>(pieces));
  };
  auto grade_left = [&](double l, double r) {
    // l is singular: [l, l + w s^L], ..., [l + w s, r]
    const double w = r - l;
    double lo = l;
    for (std::size_t k = opt.grading_levels; k >= 1; --k) {
      const double hi = l + w * std::pow(opt.grading_ratio, static_cast<double>(k));
      panels.emplace_back(lo, hi);
      lo = hi;
    }
    push_split(lo, r);
  };
  auto grade_right = [&](double l, double r) {
    // r is singular: [l, r - w s], [r - w s, r - w s^2], ..., [r - w s^L, r]
    const double w = r - l;
    double lo = r - w * opt.grading_ratio;
    push_split(l, lo);
    for (std::size_t k = 2; k <= opt.grading_levels; ++k) {
      const double hi = r - w * std::pow(opt.grading_ratio, static_cast<double>(k));
      panels.emplace_back(lo, hi);
      lo = hi;
    }
    panels.emplace_back(lo, r);
  };
  for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
    const double l = uniq[i], r = uniq[i + 1];
    if (!graded) {
      push_split(l, r);
    } else {
      const double mid = 0.5 * (l + r);
      grade_left(l, mid);
      grade_right(mid, r);
    }
  }

  const auto& ref = detail::cached_rule(detail::RuleKind::gauss_legendre, opt.order, -1.0, 1.0);
  QuadratureRule1D rule;
  rule.a = a;
  rule.b = b;
  rule.nodes.reserve(panels.size() * opt.order);
  rule.weights.reserve(panels.size() * opt.order);
  for (auto [l, r] : panels) {
    if (!(r > l)) continue;
    const double half = 0.5 * (r - l), mid = 0.5 * (l + r);
    for (std::size_t i = 0; i < opt.order; ++i) {
      rule.nodes.push_back(mid + half * ref.nodes[i]);
      rule.weights.push_back(half * ref.weights[i]);
    }
  }
  return rule;
}

/// Node count needed in each direction to resolve a Dirichlet kernel of degree N.
inline std::size_t default_node_count(int N) { return static_cast<std::size_t>(std::max(64, 4 * (N + 2))); }

/// Smallest node count accepted without a warning for degree N.
inline std::size_t minimum_node_count(int N) { return static_cast<std::size_t>(2 * (std::max(N, 0) + 2)); }

/// The (phi, psi) part of the chart: Gauss-Legendre in phi, periodic trapezoid in psi.
struct SphereRule {
  QuadratureRule1D phi;
  QuadratureRule1D psi;

  static SphereRule with_nodes(std::size_t k_phi, std::size_t k_psi) {
    return {gauss_legendre(k_phi, 0.0, std::numbers::pi), periodic_trapezoid(k_psi, 0.0, 2.0 * std::numbers::pi)};
  }
  static SphereRule standard() { return with_nodes(64, 64); }
  std::size_t size() const { return phi.size() * psi.size(); }
};

/// Product rule for normalized Haar measure.
struct HaarRule {
  QuadratureRule1D theta;
  QuadratureRule1D phi;
  QuadratureRule1D psi;

  static constexpr double normalization = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);

  static HaarRule with_nodes(std::size_t k_theta, std::size_t k_phi, std::size_t k_psi) {
    return {gauss_legendre(k_theta, 0.0, std::numbers::pi), gauss_legendre(k_phi, 0.0, std::numbers::pi),
            periodic_trapezoid(k_psi, 0.0, 2.0 * std::numbers::pi)};
  }
  /// Default rule for a computation of spectral degree N.
  static HaarRule for_degree(int N) {
    const std::size_t K = default_node_count(N);
    return with_nodes(K, K, K);
  }
  SphereRule sphere() const { return {phi, psi}; }
  std::size_t size() const { return theta.size() * phi.size() * psi.size(); }
  bool resolves_degree(int N) const {
    const std::size_t need = minimum_node_count(N);
    return theta.size() >= need && phi.size() >= need / 2 && psi.size() >= need / 2;
  }
};

// ---------------------------------------------------------------------------
// Fields

/// Profile g of a central function f(x) = g(eigen_angle(x)).
struct CentralProfile {
  std::function<double(double)> g;
  /// Angles in (0, pi) where g is not smooth.
  std::vector<double> kinks;
  /// Grading toward kinks for algebraic (cusp) singularities.
  std::size_t grading_levels = 0;
};

/**
 * \brief A real-valued function on SU(2) with metadata.
 *
 * Central fields carry their eigen-angle profile, which the fast paths use
 * directly. Evaluation must be pure and reentrant.
 */
class Field {
 public:
  using Evaluator = std::function<double(const GroupElement&)>;

  Field() : Field([](const GroupElement&) { return 0.0; }, "zero") {}

  explicit Field(Evaluator fn, std::string name = {}, std::optional<double> alpha = {})
      : fn_(std::move(fn)), name_(std::move(name)), alpha_(alpha) {}

  static Field central(CentralProfile profile, std::string name = {}, std::optional<double> alpha = {}) {
    auto shared = std::make_shared<const CentralProfile>(std::move(profile));
    Field f([shared](const GroupElement& x) { return shared->g(eigen_angle(x)); }, std::move(name), alpha);
    f.profile_ = std::move(shared);
    return f;
  }

  double operator()(const GroupElement& x) const { return fn_(x); }

  bool is_central() const { return profile_ != nullptr; }
  const CentralProfile* profile() const { return profile_.get(); }
  std::optional<double> claimed_alpha() const { return alpha_; }
  const std::string& name() const { return name_; }

  /// Same field, but every evaluation (including through the profile) bumps `counter`.
  Field counted(std::shared_ptr<std::atomic<std::uint64_t>> counter) const {
    Field f = *this;
    f.fn_ = [inner = fn_, counter](const GroupElement& x) {
      counter->fetch_add(1, std::memory_order_relaxed);
      return inner(x);
    };
    if (profile_) {
      CentralProfile p = *profile_;
      p.g = [inner = profile_->g, counter](double t) {
        counter->fetch_add(1, std::memory_order_relaxed);
        return inner(t);
      };
      f.profile_ = std::make_shared<const CentralProfile>(std::move(p));
    }
    return f;
  }

 private:
  Evaluator fn_;
  std::shared_ptr<const CentralProfile> profile_;
  std::string name_;
  std::optional<double> alpha_;
};

namespace detail {

/// Precomputed directions v(phi, psi) = (cos phi, sin phi cos psi, sin phi sin psi)
/// with weights w_phi w_psi sin(phi).
struct SphereNodes {
  std::vector<std::array<double, 3>> dirs;
  std::vector<double> weights;

  explicit SphereNodes(const SphereRule& r) {
    dirs.reserve(r.size());
    weights.reserve(r.size());
    for (std::size_t j = 0; j < r.phi.size(); ++j) {
      const double cp = std::cos(r.phi.nodes[j]), sp = std::sin(r.phi.nodes[j]);
      for (std::size_t l = 0; l < r.psi.size(); ++l) {
        dirs.push_back({cp, sp * std::cos(r.psi.nodes[l]), sp * std::sin(r.psi.nodes[l])});
        weights.push_back(r.phi.weights[j] * r.psi.weights[l] * sp);
      }
    }
    // Total weight 4 pi.
    CompensatedSum total;
    for (double w : weights) total += w;
    const double scale = 4.0 * std::numbers::pi / total.value();
    for (double& w : weights) w *= scale;
  }
};

inline GroupElement chart_point(double ct, double st, const std::array<double, 3>& v) {
  return GroupElement::normalized(ct, st * v[0], st * v[1], st * v[2]);
}

}  // namespace detail

/// int f dmu over the product rule. `f` is any callable GroupElement -> double.
template <class Integrand>
double haar_integral(const Integrand& f, const HaarRule& r) {
  const detail::SphereNodes sphere(r.sphere());
  std::vector<double> slices(r.theta.size());
  parallel_for(r.theta.size(), [&](std::size_t i) {
    const double t = r.theta.nodes[i];
    const double ct = std::cos(t), st = std::sin(t);
    CompensatedSum inner;
    for (std::size_t k = 0; k < sphere.dirs.size(); ++k)
      inner += sphere.weights[k] * f(detail::chart_point(ct, st, sphere.dirs[k]));
    slices[i] = r.theta.weights[i] * st * st * inner.value();
  });
  return HaarRule::normalization * compensated_total(slices);
}

/// Gram matrix G[n][m] = int f_n f_m dmu, with one evaluation of each field per node.
inline std::vector<std::vector<double>> haar_gram(std::span<const Field> fields, const HaarRule& r) {
  const std::size_t M = fields.size();
  const detail::SphereNodes sphere(r.sphere());
  std::vector<std::vector<double>> slices(r.theta.size());
  parallel_for(r.theta.size(), [&](std::size_t i) {
    const double t = r.theta.nodes[i];
    const double ct = std::cos(t), st = std::sin(t);
    std::vector<double> acc(M * M, 0.0), vals(M);
    for (std::size_t k = 0; k < sphere.dirs.size(); ++k) {
      const GroupElement y = detail::chart_point(ct, st, sphere.dirs[k]);
      for (std::size_t a = 0; a < M; ++a) vals[a] = fields[a](y);
      const double w = sphere.weights[k];
      for (std::size_t a = 0; a < M; ++a) {
        const double wa = w * vals[a];
        for (std::size_t b = a; b < M; ++b) acc[a * M + b] += wa * vals[b];
      }
    }
    const double wt = r.theta.weights[i] * st * st;
    for (double& v : acc) v *= wt;
    slices[i] = std::move(acc);
  });
  std::vector<std::vector<double>> G(M, std::vector<double>(M, 0.0));
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = a; b < M; ++b) {
      CompensatedSum s;
      for (const auto& sl : slices) s += sl[a * M + b];
      G[a][b] = G[b][a] = HaarRule::normalization * s.value();
    }
  return G;
}

/// 2/pi int_0^pi g(theta) sin^2(theta) dtheta.
template <class Profile>
double central_integral(const Profile& g, const QuadratureRule1D& theta_rule) {
  const double s = theta_rule.integrate([&](double t) {
    const double st = std::sin(t);
    return g(t) * st * st;
  });
  return 2.0 / std::numbers::pi * s;
}

/// (f * g)(x) = int f(x y^{-1}) g(y) dmu(y).
template <class F, class G>
double convolve(const F& f, const G& g, const HaarRule& r, const GroupElement& x) {
  return haar_integral([&](const GroupElement& y) { return f(x * inverse(y)) * g(y); }, r);
}

}  // namespace su2
