/**
 * \file selftest.hpp
 * \brief Invariant suites of every module, printed one line per invariant.
 */
#pragma once

#include <charconv>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "su2/fields.hpp"
#include "su2/group.hpp"
#include "su2/quadrature.hpp"
#include "su2/record.hpp"
#include "su2/sphere.hpp"
#include "su2/spectral.hpp"
#include "su2/witness.hpp"

namespace su2 {

enum class SelftestLevel { quick, full };

struct SelftestOptions {
  /// D'_m used by the kernel checks; replaceable to exercise the harness.
  std::function<double(int, double)> dirichlet_deriv = dirichlet_scalar_deriv;
  std::uint64_t seed = 7;
};

struct InvariantResult {
  std::string name;
  bool passed = false;
  /// Worst observed defect (or the measured quantity).
  double measured = 0.0;
  double tolerance = 0.0;
};

namespace detail {

struct Invariant {
  std::string name;
  bool quick;
  /// Returns the measured defect; passes when measured <= tolerance.
  std::function<double(const SelftestOptions&)> measure;
  double tolerance;
};

inline std::vector<GroupElement> sample_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GroupElement> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(random_element(rng));
  return pts;
}

inline std::vector<Invariant> invariant_suite() {
  using std::abs;
  using std::max;
  constexpr double pi = std::numbers::pi;
  std::vector<Invariant> s;

  s.push_back({"group.closure", true,
               [](const SelftestOptions& o) {
                 const auto p = sample_points(200, o.seed);
                 double worst = 0.0;
                 for (std::size_t i = 0; i + 1 < p.size(); ++i) {
                   const auto z = p[i] * p[i + 1];
                   double n2 = 0.0;
                   for (double c : z.components()) n2 += c * c;
                   worst = max(worst, abs(n2 - 1.0));
                 }
                 return worst;
               },
               1e-12});
  s.push_back({"group.associativity", true,
               [](const SelftestOptions& o) {
                 const auto p = sample_points(150, o.seed + 1);
                 double worst = 0.0;
                 for (std::size_t i = 0; i + 2 < p.size(); i += 3)
                   worst = max(worst, distance((p[i] * p[i + 1]) * p[i + 2], p[i] * (p[i + 1] * p[i + 2])));
                 return worst;
               },
               1e-12});
  s.push_back({"group.inverse", true,
               [](const SelftestOptions& o) {
                 double worst = 0.0;
                 for (const auto& x : sample_points(100, o.seed + 2)) {
                   worst = max(worst, distance(x * inverse(x), identity()));
                   worst = max(worst, distance(inverse(x) * x, identity()));
                 }
                 return worst;
               },
               1e-12});
  s.push_back({"group.bi_invariance", true,
               [](const SelftestOptions& o) {
                 const auto p = sample_points(150, o.seed + 3);
                 double worst = 0.0;
                 for (std::size_t i = 0; i + 2 < p.size(); i += 3) {
                   const double d = distance(p[i], p[i + 1]);
                   worst = max(worst, abs(distance(p[i + 2] * p[i], p[i + 2] * p[i + 1]) - d));
                   worst = max(worst, abs(distance(p[i] * p[i + 2], p[i + 1] * p[i + 2]) - d));
                 }
                 return worst;
               },
               1e-12});
  s.push_back({"group.chart_roundtrip", true,
               [](const SelftestOptions& o) {
                 double worst = 0.0;
                 for (const auto& x : sample_points(100, o.seed + 4))
                   worst = max(worst, distance(from_spherical(to_spherical(x)), x));
                 return worst;
               },
               1e-12});
  s.push_back({"group.conjugation_angle", false,
               [](const SelftestOptions& o) {
                 const auto p = sample_points(100, o.seed + 5);
                 double worst = 0.0;
                 for (std::size_t i = 0; i + 1 < p.size(); i += 2)
                   worst = max(worst, abs(eigen_angle(p[i] * p[i + 1] * inverse(p[i])) - eigen_angle(p[i + 1])));
                 return worst;
               },
               1e-10});

  s.push_back({"quadrature.gauss_legendre_exactness", true,
               [](const SelftestOptions&) {
                 const auto r = gauss_legendre(12, -1.0, 1.0);
                 double worst = 0.0;
                 for (int j = 0; j < 24; ++j) {
                   const double exact = j % 2 ? 0.0 : 2.0 / (j + 1);
                   worst = max(worst, abs(r.integrate([j](double t) { return std::pow(t, j); }) - exact));
                 }
                 return worst;
               },
               1e-13});
  s.push_back({"quadrature.haar_normalization", true,
               [](const SelftestOptions&) {
                 return abs(haar_integral([](const GroupElement&) { return 1.0; }, HaarRule::for_degree(0)) - 1.0);
               },
               1e-13});
  s.push_back({"quadrature.left_invariance", false,
               [](const SelftestOptions& o) {
                 // <y, u>^4 has Haar mean 1/8 for every unit u; so does its translate.
                 const auto p = sample_points(4, o.seed + 6);
                 const auto r = HaarRule::for_degree(8);
                 double worst = 0.0;
                 for (std::size_t i = 0; i + 1 < p.size(); i += 2) {
                   const auto u = p[i].components();
                   const auto z = p[i + 1];
                   auto quartic = [&](const GroupElement& y) {
                     const auto w = (z * y).components();
                     const double d = w[0] * u[0] + w[1] * u[1] + w[2] * u[2] + w[3] * u[3];
                     return d * d * d * d;
                   };
                   worst = max(worst, abs(haar_integral(quartic, r) - 0.125));
                 }
                 return worst;
               },
               1e-12});
  s.push_back({"quadrature.central_reduction", false,
               [](const SelftestOptions&) {
                 auto g = [](double t) { return std::exp(std::cos(t)) * std::cos(3.0 * t); };
                 const double c = central_integral(g, gauss_legendre(64, 0.0, std::numbers::pi));
                 const double h = haar_integral([&](const GroupElement& x) { return g(eigen_angle(x)); },
                                                HaarRule::with_nodes(64, 8, 8));
                 return abs(c - h);
               },
               1e-12});

  s.push_back({"spectral.orthonormality", true,
               [](const SelftestOptions&) {
                 std::vector<Field> chars;
                 for (int n = 0; n <= 8; ++n) chars.push_back(character_field(n));
                 const auto G = haar_gram(chars, HaarRule::for_degree(16));
                 double worst = 0.0;
                 for (std::size_t i = 0; i < G.size(); ++i)
                   for (std::size_t j = 0; j < G.size(); ++j) worst = max(worst, abs(G[i][j] - (i == j ? 1.0 : 0.0)));
                 return worst;
               },
               1e-10});
  s.push_back({"spectral.kernel_identity", true,
               [](const SelftestOptions& o) {
                 double worst = 0.0;
                 for (int N = 0; N <= 24; ++N)
                   for (int k = 0; k <= 40; ++k) {
                     const double t = 0.1 + (pi - 0.2) * k / 40.0;
                     worst = max(worst, abs(dirichlet_su2(N, t) + o.dirichlet_deriv(N + 1, t) / (2.0 * std::sin(t))));
                   }
                 return worst;
               },
               1e-8});
  s.push_back({"spectral.derivative_finite_difference", false,
               [](const SelftestOptions& o) {
                 double worst = 0.0;
                 const double h = 1e-5;
                 for (int m = 1; m <= 12; ++m)
                   for (int k = 1; k < 20; ++k) {
                     const double t = pi * k / 20.0;
                     const double fd = (dirichlet_scalar(m, t + h) - dirichlet_scalar(m, t - h)) / (2.0 * h);
                     worst = max(worst, abs(o.dirichlet_deriv(m, t) - fd) / (1.0 + m * m));
                   }
                 return worst;
               },
               1e-6});
  s.push_back({"spectral.projection_reduced", true,
               [](const SelftestOptions& o) {
                 const auto x = sample_points(1, o.seed + 8).front();
                 ReducedRules rr{gauss_legendre(48, 0.0, std::numbers::pi), SphereRule::with_nodes(24, 24),
                                 ProfileMethod::sphere_quadrature};
                 double worst = 0.0;
                 for (int n = 0; n <= 8; ++n) {
                   const Field chi = character_field(n);
                   const auto sums = partial_sums_reduced(chi, 8, x, rr);
                   for (int N = 0; N <= 8; ++N)
                     worst = max(worst, abs(sums[static_cast<std::size_t>(N)] - (N >= n ? chi(x) : 0.0)));
                 }
                 return worst;
               },
               1e-6});
  s.push_back({"spectral.direct_matches_reduced", false,
               [](const SelftestOptions& o) {
                 const auto x = sample_points(1, o.seed + 9).front();
                 const Field f = smooth_field();
                 const auto direct = partial_sums_direct(f, 6, x, HaarRule::with_nodes(32, 24, 24));
                 ReducedRules rr{gauss_legendre(32, 0.0, std::numbers::pi), SphereRule::with_nodes(24, 24),
                                 ProfileMethod::sphere_quadrature};
                 const auto reduced = partial_sums_reduced(f, 6, x, rr);
                 double worst = 0.0;
                 for (std::size_t N = 0; N < direct.size(); ++N) worst = max(worst, abs(direct[N] - reduced[N]));
                 return worst;
               },
               1e-8});
  s.push_back({"spectral.central_correspondence", false,
               [](const SelftestOptions& o) {
                 const Field f = zonal_holder_field(0.5);
                 const auto series = chebyshev_coeffs(*f.profile(), 12);
                 double worst = 0.0;
                 for (const auto& x : sample_points(3, o.seed + 10)) {
                   const auto sums = partial_sums_reduced(f, 12, x, ReducedRules::for_degree(12));
                   const double t = std::cos(eigen_angle(x));
                   for (int N = 0; N <= 12; ++N)
                     worst = max(worst, abs(chebyshev_partial_sum(series, N, t) - sums[static_cast<std::size_t>(N)]));
                 }
                 return worst;
               },
               1e-7});

  s.push_back({"witness.alternation", true,
               [](const SelftestOptions&) {
                 double worst = 0.0;
                 for (int n : {0, 1, 5, 16, 64}) {
                   const SawtoothWitness w(n);
                   const auto& b = w.breakpoints();
                   for (int k = 0; k <= n; ++k)
                     worst = max(worst, abs(abs(w(b[static_cast<std::size_t>(k)]) - w(b[static_cast<std::size_t>(k + 1)])) - 2.0));
                 }
                 return worst;
               },
               1e-12});
  s.push_back({"witness.sign_alignment", true,
               [](const SelftestOptions&) {
                 double worst = 0.0;
                 for (int n : {0, 3, 8, 32}) {
                   const SawtoothWitness w(n);
                   const auto& b = w.breakpoints();
                   for (std::size_t k = 0; k + 1 < b.size(); ++k)
                     for (int j = 0; j < 16; ++j) {
                       const double t = b[k] + (b[k + 1] - b[k]) * (j + 0.5) / 16.0;
                       worst = max(worst, -w(t) * std::cos((n + 1.5) * t));
                     }
                 }
                 return worst;
               },
               1e-12});
  s.push_back({"witness.growth_corrected_floor", true,
               [](const SelftestOptions&) {
                 // Positive when some |Lambda_n(f_n)| falls below the floor.
                 double worst = -std::numeric_limits<double>::infinity();
                 for (int n : {8, 16, 32}) {
                   const double lam = std::abs(lambda_e(witness_field(n), n));
                   worst = std::max(worst, lambda_lower_bound_corrected(n) - lam);
                 }
                 return worst;
               },
               0.0});
  s.push_back({"witness.route_consistency", false,
               [](const SelftestOptions&) {
                 const int n = 8;
                 const Field f = witness_field(n);
                 const double a = lambda_e(f, n);
                 ReducedRules rr{composite_gauss_legendre(0.0, std::numbers::pi, SawtoothWitness(n).breakpoints(), {}),
                                 SphereRule::with_nodes(16, 16), ProfileMethod::sphere_quadrature};
                 const double b = partial_sum_reduced(f, n, identity(), rr);
                 HaarRule hr{composite_gauss_legendre(0.0, std::numbers::pi, SawtoothWitness(n).breakpoints(), {}),
                             gauss_legendre(16, 0.0, std::numbers::pi), periodic_trapezoid(16, 0.0, 2.0 * std::numbers::pi)};
                 const double c = partial_sum_direct(f, n, identity(), hr);
                 return std::max({std::abs(a - b), std::abs(a - c), std::abs(b - c)});
               },
               1e-6});
  s.push_back({"witness.holder_valid_bound", false,
               [](const SelftestOptions& o) {
                 double worst = -std::numeric_limits<double>::infinity();
                 for (int n : {4, 16}) {
                   const double q = max_holder_quotient(witness_field(n), 0.5, 4000, o.seed + 11);
                   worst = std::max(worst, q - holder_seminorm_valid_bound(n, 0.5));
                 }
                 return worst;
               },
               0.0});

  s.push_back({"sphere.frame_orthogonality", true,
               [](const SelftestOptions& o) {
                 double worst = 0.0;
                 for (const auto& x : sample_points(100, o.seed + 12)) {
                   const auto f = frame_matrix(to_spherical(x));
                   worst = max(worst, orthogonality_defect(f.O));
                   const auto col = f.first_column();
                   for (std::size_t i = 0; i < 4; ++i) worst = max(worst, abs(col[i] - x[i]));
                   worst = max(worst, abs(abs(determinant(f.O)) - 1.0));
                 }
                 return worst;
               },
               1e-10});
  s.push_back({"sphere.translation_identity", true,
               [](const SelftestOptions& o) {
                 const auto p = sample_points(6, o.seed + 13);
                 const SphereRule rule = SphereRule::with_nodes(24, 24);
                 double worst = 0.0;
                 for (std::size_t i = 0; i < p.size(); ++i) {
                   const Field f = i % 2 ? smooth_field(p[(i + 1) % p.size()]) : lip_field(0.5);
                   auto F = [&](const UnitVec4& u) { return f(eta_inverse(u)); };
                   for (double t : {0.3, 1.0, 2.5})
                     worst = max(worst, abs(spherical_translate(F, eta(p[i]), t, rule) -
                                            q_value(f, p[i], t, rule, ProfileMethod::sphere_quadrature)));
                 }
                 return worst;
               },
               1e-8});
  s.push_back({"sphere.zonal_eigenvalue", false,
               [](const SelftestOptions& o) {
                 const SphereRule rule = SphereRule::with_nodes(24, 24);
                 double worst = 0.0;
                 for (const auto& x : sample_points(3, o.seed + 14))
                   for (int n = 0; n <= 8; ++n) {
                     const Field chi = character_field(n);
                     auto F = [&](const UnitVec4& u) { return chi(eta_inverse(u)); };
                     for (double t : {0.4, 1.3, 2.2})
                       worst = max(worst, abs(spherical_translate(F, eta(x), t, rule) - chi(x) * character(n, t) / (n + 1)));
                   }
                 return worst;
               },
               1e-7});
  s.push_back({"sphere.modulus_of_constant", false,
               [](const SelftestOptions&) {
                 ModulusRules mr;
                 mr.outer = HaarRule::with_nodes(8, 8, 8);
                 mr.inner = SphereRule::with_nodes(8, 8);
                 mr.floor = 0.05;
                 ModulusEstimator est(constant_field(2.0), mr);
                 return std::max(est.modulus(1.0), est.dai(0.1).estimate);
               },
               1e-12});
  s.push_back({"sphere.modulus_monotone", false,
               [](const SelftestOptions&) {
                 ModulusRules mr;
                 mr.outer = HaarRule::with_nodes(12, 12, 12);
                 mr.inner = SphereRule::with_nodes(12, 12);
                 mr.floor = 0.02;
                 ModulusEstimator est(zonal_holder_field(0.5), mr);
                 double prev = 0.0, worst = 0.0;
                 for (double t : est.lattice(std::numbers::pi)) {
                   const double om = est.modulus(t);
                   worst = std::max(worst, prev - om);
                   prev = om;
                 }
                 return worst;
               },
               0.0});

  s.push_back({"record.number_roundtrip", true,
               [](const SelftestOptions& o) {
                 std::mt19937_64 rng(o.seed + 15);
                 std::uniform_real_distribution<double> u(-30.0, 30.0);
                 double mismatches = 0.0;
                 for (int i = 0; i < 1000; ++i) {
                   const double v = std::exp(u(rng)) * (i % 2 ? -1.0 : 1.0);
                   const std::string s = format_number(v);
                   double back = 0.0;
                   std::from_chars(s.data(), s.data() + s.size(), back);
                   if (back != v) mismatches += 1.0;
                 }
                 return mismatches;
               },
               0.0});
  return s;
}

}  // namespace detail

/// Runs the invariants of `level` (quick is a subset of full), printing
/// "PASS|FAIL name measured=... tol=..." per invariant. True iff all pass.
inline bool selftest(SelftestLevel level, std::ostream& os, const SelftestOptions& opt = {},
                     std::vector<InvariantResult>* results = nullptr) {
  bool all = true;
  for (const auto& inv : detail::invariant_suite()) {
    if (level == SelftestLevel::quick && !inv.quick) continue;
    InvariantResult r{inv.name, false, 0.0, inv.tolerance};
    try {
      r.measured = inv.measure(opt);
      r.passed = r.measured <= inv.tolerance;
    } catch (const std::exception& e) {
      r.measured = std::nan("");
      os << "ERROR " << inv.name << ": " << e.what() << '\n';
    }
    all = all && r.passed;
    os << (r.passed ? "PASS " : "FAIL ") << r.name << std::setprecision(6) << " measured=" << r.measured
       << " tol=" << r.tolerance << '\n';
    if (results) results->push_back(r);
  }
  return all;
}

}  // namespace su2
