#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

#include "su2/parallel.hpp"
#include "su2/quadrature.hpp"

using namespace su2;

namespace {
constexpr double pi = std::numbers::pi;

double monomial_integral(int j, double a, double b) {
  return (std::pow(b, j + 1) - std::pow(a, j + 1)) / (j + 1);
}
}  // namespace

TEST(GaussLegendre, SolvesTheMomentEquations) {
  for (std::size_t K : {1u, 2u, 3u, 7u, 20u, 64u}) {
    const auto r = gauss_legendre(K, -1.0, 1.0);
    ASSERT_EQ(r.size(), K);
    for (int j = 0; j < static_cast<int>(std::min<std::size_t>(2 * K, 40)); ++j) {
      double q = 0.0;
      for (std::size_t i = 0; i < K; ++i) q += r.weights[i] * std::pow(r.nodes[i], j);
      EXPECT_NEAR(q, monomial_integral(j, -1.0, 1.0), 1e-13) << "K=" << K << " j=" << j;
    }
  }
}

TEST(GaussLegendre, IsNotExactBeyondDegree2KMinus1) {
  const auto r = gauss_legendre(4, -1.0, 1.0);
  EXPECT_GT(std::abs(r.integrate([](double t) { return std::pow(t, 8); }) - 2.0 / 9.0), 1e-4);
}

TEST(GaussLegendre, NodesAndWeightsOnAnInterval) {
  const auto r = gauss_legendre(33, 0.5, 2.5);
  double wsum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_GT(r.weights[i], 0.0);
    EXPECT_GT(r.nodes[i], 0.5);
    EXPECT_LT(r.nodes[i], 2.5);
    EXPECT_NEAR(r.nodes[i] - 1.5, 1.5 - r.nodes[r.size() - 1 - i], 1e-14);
    wsum += r.weights[i];
  }
  EXPECT_NEAR(wsum, 2.0, 1e-14);
  for (int j = 0; j < 66; j += 5) EXPECT_NEAR(r.integrate([j](double t) { return std::pow(t, j); }) /
                                                  monomial_integral(j, 0.5, 2.5), 1.0, 1e-12);
}

TEST(GaussLegendre, RejectsBadArguments) {
  EXPECT_THROW(gauss_legendre(0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(gauss_legendre(4, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(periodic_trapezoid(0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(periodic_trapezoid(4, 2.0, 1.0), std::invalid_argument);
}

TEST(PeriodicTrapezoid, ExactOnTrigonometricPolynomials) {
  const std::size_t K = 16;
  const auto r = periodic_trapezoid(K, 0.0, 2.0 * pi);
  for (int j = 0; j < static_cast<int>(K); ++j) {
    EXPECT_NEAR(r.integrate([j](double t) { return std::cos(j * t); }), j == 0 ? 2.0 * pi : 0.0, 1e-13);
    EXPECT_NEAR(r.integrate([j](double t) { return std::sin(j * t); }), 0.0, 1e-13);
  }
  EXPECT_NEAR(r.integrate([K](double t) { return std::cos(static_cast<double>(K) * t); }), 2.0 * pi, 1e-12);
}

TEST(CompositeRule, IntegratesKinksExactlyWhenAligned) {
  const double breaks[] = {0.3};
  const auto r = composite_gauss_legendre(0.0, 1.0, breaks, {.order = 4});
  EXPECT_NEAR(r.integrate([](double t) { return std::abs(t - 0.3); }), (0.09 + 0.49) / 2.0, 1e-15);
  const auto plain = gauss_legendre(8, 0.0, 1.0);
  EXPECT_GT(std::abs(plain.integrate([](double t) { return std::abs(t - 0.3); }) - 0.29), 1e-5);
}

TEST(CompositeRule, GradingResolvesAlgebraicCusps) {
  const double c = 1.0;
  const double breaks[] = {c};
  const double exact = 2.0 / 1.5;  // int_0^2 |t - 1|^{1/2}
  auto f = [c](double t) { return std::sqrt(std::abs(t - c)); };
  const auto flat = composite_gauss_legendre(0.0, 2.0, breaks, {.order = 12});
  const auto graded = composite_gauss_legendre(0.0, 2.0, breaks, {.order = 12, .grading_levels = 12});
  const double e_flat = std::abs(flat.integrate(f) - exact);
  const double e_graded = std::abs(graded.integrate(f) - exact);
  EXPECT_LT(e_graded, 1e-10);
  EXPECT_LT(e_graded, 1e-3 * e_flat);
}

TEST(CompositeRule, MergesBreaksAndRespectsMaxWidth) {
  const double breaks[] = {0.5, 0.5, -1.0, 3.0, 0.25};
  const auto r = composite_gauss_legendre(0.0, 1.0, breaks, {.order = 2, .max_width = 0.1});
  // [0, .25] -> 3 panels, [.25, .5] -> 3, [.5, 1] -> 5
  EXPECT_EQ(r.size(), 2u * 11u);
  double wsum = 0.0;
  for (double w : r.weights) wsum += w;
  EXPECT_NEAR(wsum, 1.0, 1e-15);
  EXPECT_THROW(composite_gauss_legendre(1.0, 0.0, breaks), std::invalid_argument);
  EXPECT_THROW(composite_gauss_legendre(0.0, 1.0, breaks, {.order = 0}), std::invalid_argument);
}

TEST(HaarRule, Normalization) {
  for (int N : {0, 4, 16})
    EXPECT_NEAR(haar_integral([](const GroupElement&) { return 1.0; }, HaarRule::for_degree(N)), 1.0, 1e-14);
}

TEST(HaarRule, MomentsOfTheUniformSphere) {
  // E[x_i^2] = 1/4, E[x_i^4] = 1/8, E[x_i^2 x_j^2] = 1/24 on S^3.
  const auto r = HaarRule::with_nodes(32, 32, 16);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(haar_integral([i](const GroupElement& x) { return x[i] * x[i]; }, r), 0.25, 1e-14);
    EXPECT_NEAR(haar_integral([i](const GroupElement& x) { return std::pow(x[i], 4); }, r), 0.125, 1e-14);
    EXPECT_NEAR(haar_integral([i](const GroupElement& x) { return x[i]; }, r), 0.0, 1e-15);
  }
  EXPECT_NEAR(haar_integral([](const GroupElement& x) { return x.a1() * x.a1() * x.b2() * x.b2(); }, r), 1.0 / 24.0,
              1e-14);
}

TEST(HaarRule, TranslationInvarianceUnderRefinement) {
  std::mt19937_64 rng(3);
  const GroupElement z = random_element(rng), p = random_element(rng);
  auto f = [&](const GroupElement& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < 4; ++i) d += y[i] * p[i];
    return std::exp(2.0 * d);
  };
  const auto coarse = HaarRule::with_nodes(24, 24, 24);
  const auto fine = HaarRule::with_nodes(40, 40, 40);
  const double ref = haar_integral(f, fine);
  EXPECT_NEAR(haar_integral(f, coarse), ref, 1e-12);
  EXPECT_NEAR(haar_integral([&](const GroupElement& y) { return f(z * y); }, fine), ref, 1e-12);
  EXPECT_NEAR(haar_integral([&](const GroupElement& y) { return f(y * z); }, fine), ref, 1e-12);
  EXPECT_NEAR(haar_integral([&](const GroupElement& y) { return f(inverse(y)); }, fine), ref, 1e-12);
}

TEST(HaarRule, DegreeThresholds) {
  EXPECT_EQ(default_node_count(0), 64u);
  EXPECT_EQ(default_node_count(32), 136u);
  EXPECT_EQ(minimum_node_count(10), 24u);
  EXPECT_TRUE(HaarRule::for_degree(10).resolves_degree(10));
  EXPECT_FALSE(HaarRule::with_nodes(8, 8, 8).resolves_degree(10));
  EXPECT_EQ(HaarRule::with_nodes(3, 4, 5).size(), 60u);
}

TEST(CentralIntegral, MatchesTheFullHaarIntegral) {
  auto g = [](double t) { return std::cos(t) * std::cos(t) + std::sin(3.0 * t); };
  const double c = central_integral(g, gauss_legendre(64, 0.0, pi));
  const double h = haar_integral([&](const GroupElement& x) { return g(eigen_angle(x)); }, HaarRule::with_nodes(64, 24, 6));
  EXPECT_NEAR(c, h, 1e-13);
  // 2/pi int cos^2 sin^2 = 1/4
  EXPECT_NEAR(central_integral([](double t) { return std::cos(t) * std::cos(t); }, gauss_legendre(16, 0.0, pi)), 0.25,
              1e-15);
}

TEST(Convolution, AgainstConstantsIsTheMean) {
  const Field one([](const GroupElement&) { return 1.0; });
  std::mt19937_64 rng(4);
  const auto x = random_element(rng);
  auto g = [](const GroupElement& y) { return y.a1() * y.a1(); };
  EXPECT_NEAR(convolve(one, g, HaarRule::with_nodes(32, 32, 8), x), 0.25, 1e-14);
}

TEST(Field, CountedCountsEveryEvaluation) {
  auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
  const Field f = Field([](const GroupElement& x) { return x.a1(); }, "a1").counted(counter);
  haar_integral(f, HaarRule::with_nodes(3, 4, 5));
  EXPECT_EQ(counter->load(), 60u);
  const Field c = Field::central({[](double t) { return t; }, {}, 0}).counted(counter);
  c(omega(0.3));
  c.profile()->g(0.1);
  EXPECT_EQ(counter->load(), 62u);
  EXPECT_TRUE(c.is_central());
  EXPECT_NEAR(c(omega(0.3)), 0.3, 1e-15);
}

TEST(Warnings, SinkIsOptional) {
  Warnings w;
  warn(&w, "a");
  warn(nullptr, "b");
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0], "a");
}

TEST(Parallel, CompensatedSummation) {
  CompensatedSum s;
  s += 1e16;
  s += 1.0;
  s += -1e16;
  EXPECT_EQ(s.value(), 1.0);
  std::vector<double> xs(100000, 0.1);
  EXPECT_NEAR(compensated_total(xs), 10000.0, 1e-10);
}

TEST(Parallel, ResultsDoNotDependOnThreadCount) {
  std::mt19937_64 rng(5);
  const auto p = random_element(rng);
  auto f = [&](const GroupElement& y) { return std::exp(y.a1() * p.a1() + y.b2() * p.b2()); };
  const auto r = HaarRule::with_nodes(32, 16, 16);
  set_thread_count(1);
  const double one = haar_integral(f, r);
  set_thread_count(4);
  const double four = haar_integral(f, r);
  set_thread_count(1);
  EXPECT_EQ(one, four);
}

TEST(Parallel, PropagatesExceptions) {
  set_thread_count(3);
  EXPECT_THROW(parallel_for(50, [](std::size_t i) {
                 if (i == 17) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  set_thread_count(1);
}
