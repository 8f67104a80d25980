#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "su2/group.hpp"

using namespace su2;

namespace {

using Mat = std::array<std::array<std::complex<double>, 2>, 2>;

Mat as_matrix(const GroupElement& x) {
  using C = std::complex<double>;
  return {{{C(x.a1(), x.a2()), C(x.b1(), x.b2())}, {C(-x.b1(), x.b2()), C(x.a1(), -x.a2())}}};
}

Mat matmul(const Mat& a, const Mat& b) {
  Mat c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

double max_diff(const Mat& a, const Mat& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

std::vector<GroupElement> samples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_element(rng));
  return out;
}

}  // namespace

TEST(Group, MultiplyMatchesComplexMatrixProduct) {
  const auto p = samples(400, 1);
  for (std::size_t i = 0; i + 1 < p.size(); i += 2)
    EXPECT_LT(max_diff(as_matrix(p[i] * p[i + 1]), matmul(as_matrix(p[i]), as_matrix(p[i + 1]))), 1e-14);
}

TEST(Group, InverseIsConjugateTranspose) {
  for (const auto& x : samples(100, 2)) {
    const Mat m = as_matrix(x), mi = as_matrix(inverse(x));
    Mat adj{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) adj[i][j] = std::conj(m[j][i]);
    EXPECT_LT(max_diff(mi, adj), 1e-15);
    EXPECT_LT(distance(x * inverse(x), identity()), 1e-14);
  }
}

TEST(Group, ProductsStayOnTheSphere) {
  const auto p = samples(1000, 3);
  GroupElement acc;
  for (const auto& x : p) {
    acc = acc * x;
    double n2 = 0.0;
    for (double c : acc.components()) n2 += c * c;
    EXPECT_NEAR(n2, 1.0, 1e-14);
  }
}

TEST(Group, Associativity) {
  const auto p = samples(300, 4);
  for (std::size_t i = 0; i + 2 < p.size(); i += 3)
    EXPECT_LT(distance((p[i] * p[i + 1]) * p[i + 2], p[i] * (p[i + 1] * p[i + 2])), 1e-14);
}

TEST(Group, DistanceIsTheHalfTraceNorm) {
  const auto p = samples(200, 5);
  for (std::size_t i = 0; i + 1 < p.size(); i += 2) {
    const Mat a = as_matrix(p[i]), b = as_matrix(p[i + 1]);
    double tr = 0.0;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) tr += std::norm(a[r][c] - b[r][c]);
    EXPECT_NEAR(distance(p[i], p[i + 1]), std::sqrt(tr / 2.0), 1e-14);
  }
  EXPECT_DOUBLE_EQ(distance(identity(), negative_identity()), 2.0);
}

TEST(Group, DistanceIsBiInvariant) {
  const auto p = samples(300, 6);
  for (std::size_t i = 0; i + 2 < p.size(); i += 3) {
    const double d = distance(p[i], p[i + 1]);
    EXPECT_NEAR(distance(p[i + 2] * p[i], p[i + 2] * p[i + 1]), d, 1e-14);
    EXPECT_NEAR(distance(p[i] * p[i + 2], p[i + 1] * p[i + 2]), d, 1e-14);
  }
}

TEST(Group, EigenAngleIsArccosOfHalfTrace) {
  for (const auto& x : samples(200, 7)) {
    const Mat m = as_matrix(x);
    const double half_trace = 0.5 * (m[0][0] + m[1][1]).real();
    EXPECT_NEAR(eigen_angle(x), std::acos(half_trace), 1e-12);
  }
  EXPECT_DOUBLE_EQ(eigen_angle(identity()), 0.0);
  EXPECT_DOUBLE_EQ(eigen_angle(negative_identity()), std::numbers::pi);
}

TEST(Group, EigenAngleKeepsPrecisionNearIdentity) {
  for (double t : {1e-12, 1e-9, 1e-6}) EXPECT_NEAR(eigen_angle(omega(t)) / t, 1.0, 1e-12);
  for (double t : {1e-12, 1e-9, 1e-6})
    EXPECT_NEAR((std::numbers::pi - eigen_angle(omega(std::numbers::pi - t))) / t, 1.0, 1e-3);
}

TEST(Group, EigenAngleIsAClassFunction) {
  const auto p = samples(200, 8);
  for (std::size_t i = 0; i + 1 < p.size(); i += 2)
    EXPECT_NEAR(eigen_angle(p[i] * p[i + 1] * inverse(p[i])), eigen_angle(p[i + 1]), 1e-12);
}

TEST(Group, SphericalChart) {
  const SphericalCoords c{0.4, 1.3, 5.0};
  const auto x = from_spherical(c);
  EXPECT_NEAR(x.a1(), std::cos(1.3), 1e-15);
  EXPECT_NEAR(x.a2(), std::sin(1.3) * std::cos(0.4), 1e-15);
  EXPECT_NEAR(x.b1(), std::sin(1.3) * std::sin(0.4) * std::cos(5.0), 1e-15);
  EXPECT_NEAR(x.b2(), std::sin(1.3) * std::sin(0.4) * std::sin(5.0), 1e-15);
  const auto back = to_spherical(x);
  EXPECT_NEAR(back.phi, c.phi, 1e-14);
  EXPECT_NEAR(back.theta, c.theta, 1e-14);
  EXPECT_NEAR(back.psi, c.psi, 1e-14);
  for (const auto& y : samples(200, 9)) EXPECT_LT(distance(from_spherical(to_spherical(y)), y), 1e-14);
}

TEST(Group, ChartAtDegenerateLoci) {
  EXPECT_EQ(from_spherical({0.0, 0.0, 0.0}), identity());
  const auto c = to_spherical(negative_identity());
  EXPECT_DOUBLE_EQ(c.theta, std::numbers::pi);
  EXPECT_LT(distance(from_spherical(c), negative_identity()), 1e-15);
}

TEST(Group, OmegaIsDiagonal) {
  const Mat m = as_matrix(omega(0.7));
  EXPECT_NEAR(std::abs(m[0][0] - std::polar(1.0, 0.7)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m[1][1] - std::polar(1.0, -0.7)), 0.0, 1e-15);
  EXPECT_EQ(m[0][1], std::complex<double>(0.0, 0.0));
  EXPECT_DOUBLE_EQ(eigen_angle(omega(0.7)), 0.7);
}

TEST(Group, ConstructorRejectsNonUnitVectors) {
  EXPECT_THROW(GroupElement(1.1, 0.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(GroupElement(std::nan(""), 0.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(GroupElement(1.0 + 1e-12, 0.0, 0.0, 0.0));
  EXPECT_THROW(GroupElement::normalized(0.0, 0.0, 0.0, 0.0), std::invalid_argument);
  const auto x = GroupElement::normalized(3.0, 4.0, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(x.a1(), 0.6);
  EXPECT_DOUBLE_EQ(x.a2(), 0.8);
}

TEST(Group, RandomElementsAreHaarDistributed) {
  // Second moments of a uniform point on S^3 are 1/4 each.
  std::mt19937_64 rng(10);
  const int n = 200000;
  std::array<double, 4> m{};
  double tr_mean = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto x = random_element(rng);
    for (std::size_t k = 0; k < 4; ++k) m[k] += x[k] * x[k] / n;
    tr_mean += x.a1() / n;
  }
  for (double v : m) EXPECT_NEAR(v, 0.25, 5e-3);
  EXPECT_NEAR(tr_mean, 0.0, 5e-3);
}
