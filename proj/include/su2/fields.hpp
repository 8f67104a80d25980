/**
 * \file fields.hpp
 * \brief Shipped test fields, field and point descriptors.
 */
#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "su2/group.hpp"
#include "su2/quadrature.hpp"
#include "su2/spectral.hpp"
#include "su2/witness.hpp"

namespace su2 {

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline Field constant_field(double c = 1.0) {
  return Field::central({[c](double) { return c; }, {}, 0}, "constant");
}

/// Base point of the shipped non-central cusp field.
inline GroupElement default_cusp_point() { return from_spherical({0.7, 1.1, 2.3}); }

/// d(x, p)^alpha: alpha-Hoelder with constant 1, non-central, cusp at p.
inline Field lip_field(double alpha, GroupElement p = default_cusp_point()) {
  check_exponent(alpha);
  std::ostringstream name;
  name << "lip:" << alpha;
  return Field([alpha, p](const GroupElement& x) { return std::pow(distance(x, p), alpha); }, name.str(), alpha);
}

/// |theta - pi/3|^alpha as a central field; alpha-Hoelder on SU(2).
inline Field zonal_holder_field(double alpha) {
  check_exponent(alpha);
  const double c = std::numbers::pi / 3.0;
  std::ostringstream name;
  name << "zonal:" << alpha;
  return Field::central({[alpha, c](double t) { return std::pow(std::abs(t - c), alpha); }, {c}, 12}, name.str(),
                        alpha);
}

/// exp(cos theta) = exp(a1); smooth and central.
inline Field expcos_field() {
  return Field::central({[](double t) { return std::exp(std::cos(t)); }, {}, 0}, "expcos");
}

/// exp(<x, p>) for a unit 4-vector p; smooth and non-central.
inline Field smooth_field(GroupElement p = default_cusp_point()) {
  return Field(
      [p](const GroupElement& x) {
        return std::exp(x.a1() * p.a1() + x.a2() * p.a2() + x.b1() * p.b1() + x.b2() * p.b2());
      },
      "smooth");
}

/// Piecewise-linear central profile read from "theta value" lines (comma or
/// whitespace separated, '#' comments). Nodes become kinks.
inline Field profile_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile file '" + path + "'");
  std::vector<double> ts, vs;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream ls(line);
    double t, v;
    if (!(ls >> t)) continue;
    if (!(ls >> v)) throw InputError("profile file '" + path + "': expected two numbers per line");
    if (!ts.empty() && !(t > ts.back())) throw InputError("profile file '" + path + "': angles must increase");
    if (t < 0.0 || t > std::numbers::pi + 1e-12) throw InputError("profile file '" + path + "': angle outside [0, pi]");
    ts.push_back(t);
    vs.push_back(v);
  }
  if (ts.size() < 2) throw InputError("profile file '" + path + "': need at least two samples");
  std::vector<double> kinks(ts.begin(), ts.end());
  auto g = [ts, vs](double t) {
    if (t <= ts.front()) return vs.front();
    if (t >= ts.back()) return vs.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
    const double s = (t - ts[i]) / (ts[i + 1] - ts[i]);
    return vs[i] + s * (vs[i + 1] - vs[i]);
  };
  return Field::central({g, std::move(kinks), 0}, "profile:" + path);
}

namespace detail {
inline double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw InputError("malformed number '" + std::string(s) + "' in " + context);
  return v;
}
inline int parse_int(std::string_view s, const std::string& context) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("malformed integer '" + std::string(s) + "' in " + context);
  return v;
}
}  // namespace detail

/**
 * \brief Field from a descriptor.
 *
 * constant[:c] | character:n | witness:n | lip:alpha | zonal:alpha | expcos |
 * smooth | profile:PATH
 */
inline Field parse_field(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string{} : text.substr(colon + 1);
  const std::string ctx = "field '" + text + "'";
  auto need_arg = [&] {
    if (colon == std::string::npos || arg.empty()) throw InputError(ctx + " needs an argument");
  };
  if (kind == "constant") return constant_field(arg.empty() ? 1.0 : detail::parse_double(arg, ctx));
  if (kind == "expcos" && arg.empty()) return expcos_field();
  if (kind == "smooth" && arg.empty()) return smooth_field();
  if (kind == "character" || kind == "witness") {
    need_arg();
    const int n = detail::parse_int(arg, ctx);
    if (n < 0) throw InputError(ctx + ": degree must be nonnegative");
    return kind == "character" ? character_field(n) : witness_field(n);
  }
  if (kind == "lip" || kind == "zonal") {
    need_arg();
    const double a = detail::parse_double(arg, ctx);
    if (!(a > 0.0 && a < 1.0)) throw InputError(ctx + ": exponent must lie in (0, 1)");
    return kind == "lip" ? lip_field(a) : zonal_holder_field(a);
  }
  if (kind == "profile") {
    need_arg();
    return profile_field(arg);
  }
  throw InputError("unknown " + ctx);
}

/**
 * \brief Points from a descriptor: "phi,theta,psi" triples separated by ';',
 * or "random:K" (Haar samples drawn with `seed`).
 */
inline std::vector<GroupElement> parse_points(const std::string& text, std::uint64_t seed = 0) {
  std::vector<GroupElement> pts;
  const std::string ctx = "points '" + text + "'";
  if (text.rfind("random:", 0) == 0) {
    const int k = detail::parse_int(std::string_view(text).substr(7), ctx);
    if (k <= 0) throw InputError(ctx + ": count must be positive");
    std::mt19937_64 rng(seed);
    for (int i = 0; i < k; ++i) pts.push_back(random_element(rng));
    return pts;
  }
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    std::string_view triple = rest.substr(0, semi);
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    std::vector<double> vals;
    while (true) {
      const auto comma = triple.find(',');
      vals.push_back(detail::parse_double(triple.substr(0, comma), ctx));
      if (comma == std::string_view::npos) break;
      triple = triple.substr(comma + 1);
    }
    if (vals.size() != 3) throw InputError(ctx + ": each point needs exactly three coordinates phi,theta,psi");
    const double pi = std::numbers::pi, tol = 1e-12;
    if (vals[0] < -tol || vals[0] > pi + tol || vals[1] < -tol || vals[1] > pi + tol || vals[2] < -tol ||
        vals[2] > 2.0 * pi + tol)
      throw InputError(ctx + ": coordinates outside [0,pi]x[0,pi]x[0,2pi]");
    pts.push_back(from_spherical({vals[0], vals[1], vals[2]}));
  }
  if (pts.empty()) throw InputError(ctx + ": no points");
  return pts;
}

}  // namespace su2
