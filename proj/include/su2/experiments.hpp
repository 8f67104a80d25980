/**
 * \file experiments.hpp
 * \brief The experiment commands behind the CLI, returning record tables.
 */
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "su2/fields.hpp"
#include "su2/record.hpp"
#include "su2/sphere.hpp"
#include "su2/spectral.hpp"
#include "su2/witness.hpp"

namespace su2 {

struct CommonOptions {
  /// Quadrature override; meaning depends on the command.
  std::optional<std::size_t> nodes;
  std::uint64_t seed = 1;
  bool timings = false;
};

struct CommandResult {
  std::vector<ExperimentRecord> records;
  /// Union of record warnings, deduplicated, in first-seen order.
  Warnings warnings;
};

namespace detail {

inline void point_parameters(ExperimentRecord& r, std::size_t index, const GroupElement& x) {
  const auto c = to_spherical(x);
  r.parameters.emplace_back("point", std::to_string(index));
  r.parameters.emplace_back("phi", format_number(c.phi));
  r.parameters.emplace_back("theta", format_number(c.theta));
  r.parameters.emplace_back("psi", format_number(c.psi));
}

inline void absorb_warnings(CommandResult& out) {
  for (const auto& r : out.records)
    for (const auto& w : r.warnings) {
      bool seen = false;
      for (const auto& e : out.warnings) seen = seen || e == w;
      if (!seen) out.warnings.push_back(w);
    }
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// Witness growth table. `nodes` overrides the per-panel Gauss-Legendre order.
inline CommandResult run_divergence(const std::vector<int>& n_list, const std::vector<GroupElement>& points,
                                    double alpha, const CommonOptions& opt = {}) {
  if (n_list.empty()) throw InputError("divergence: empty degree list");
  if (points.empty()) throw InputError("divergence: no points");
  check_exponent(alpha);
  DivergenceOptions dopt;
  dopt.alpha = alpha;
  if (opt.nodes) dopt.panel_order = *opt.nodes;
  CommandResult out;
  detail::Stopwatch clock;
  for (int n : n_list) {
    if (n < 0) throw InputError("divergence: degrees must be nonnegative");
    const int one[] = {n};
    for (const auto& row : divergence_table(one, points, dopt)) {
      ExperimentRecord r;
      r.experiment = "divergence";
      r.parameters.emplace_back("n", std::to_string(row.n));
      detail::point_parameters(r, row.point_index, row.point);
      r.parameters.emplace_back("alpha", format_number(alpha));
      r.outputs = {{"lambda_abs", row.lambda_abs},
                   {"lower_bound", row.lower_bound},
                   {"l1_reference", row.l1_reference},
                   {"lip_norm_bound", row.lip_norm_bound},
                   {"ratio_to_2n3", row.ratio_to_2n3},
                   {"lambda_e", row.lambda_e},
                   {"lower_bound_corrected", row.lower_bound_corrected},
                   {"kernel_l1", row.kernel_l1},
                   {"holder_norm_bound", row.holder_norm_bound}};
      r.warnings = row.warnings;
      if (opt.timings) r.wall_time = clock.lap();
      out.records.push_back(std::move(r));
    }
  }
  detail::absorb_warnings(out);
  return out;
}

/// (N, point, S_N f, |S_N f - f|) for N = 1..n_max through the reduced route.
/// `nodes` overrides every node count.
inline CommandResult run_converge(const Field& f, int n_max, const std::vector<GroupElement>& points,
                                  const CommonOptions& opt = {}) {
  if (n_max < 1) throw InputError("converge: N_max must be at least 1");
  if (points.empty()) throw InputError("converge: no points");
  ReducedRules rules = ReducedRules::for_degree(n_max);
  if (opt.nodes) {
    rules.theta = gauss_legendre(*opt.nodes, 0.0, std::numbers::pi);
    rules.sphere = SphereRule::with_nodes(*opt.nodes, *opt.nodes);
  }
  CommandResult out;
  detail::Stopwatch clock;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Warnings w;
    const auto sums = partial_sums_reduced(f, n_max, points[i], rules, &w);
    const double value = f(points[i]);
    const double elapsed = clock.lap();
    for (int N = 1; N <= n_max; ++N) {
      ExperimentRecord r;
      r.experiment = "converge";
      r.parameters.emplace_back("field", f.name());
      r.parameters.emplace_back("N", std::to_string(N));
      detail::point_parameters(r, i, points[i]);
      const double s = sums[static_cast<std::size_t>(N)];
      r.outputs = {{"partial_sum", s}, {"value", value}, {"abs_error", std::abs(s - value)}};
      r.warnings = w;
      if (opt.timings) r.wall_time = N == 1 ? elapsed : 0.0;
      out.records.push_back(std::move(r));
    }
  }
  detail::absorb_warnings(out);
  return out;
}

/// Omega(f, t) on the lattice in [t_min, 1], then one criterion row.
/// `nodes` sets the outer Haar rule to K^3 and the inner sphere rule to K^2.
inline CommandResult run_modulus(const Field& f, double t_min, const CommonOptions& opt = {}) {
  if (!(t_min > 0.0 && t_min < 1.0)) throw InputError("modulus: t_min must lie in (0, 1)");
  ModulusRules rules;
  if (opt.nodes) {
    rules.outer = HaarRule::with_nodes(*opt.nodes, *opt.nodes, *opt.nodes);
    rules.inner = SphereRule::with_nodes(*opt.nodes, *opt.nodes);
  }
  ModulusEstimator est(f, rules);
  CommandResult out;
  detail::Stopwatch clock;
  std::vector<double> ts;
  for (double t : est.lattice(1.0))
    if (t >= t_min) ts.push_back(t);
  for (double t : ts) {
    ExperimentRecord r;
    r.experiment = "modulus";
    r.parameters.emplace_back("field", f.name());
    r.outputs = {{"t", t}, {"omega", est.modulus(t)}};
    if (opt.timings) r.wall_time = clock.lap();
    out.records.push_back(std::move(r));
  }
  const DaiResult dai = est.dai(t_min);
  double slope = std::nan("");
  try {
    slope = est.loglog_slope(std::max(t_min, 0.01), 1.0);
  } catch (const std::runtime_error&) {
  }
  ExperimentRecord r;
  r.experiment = "dai_criterion";
  r.parameters.emplace_back("field", f.name());
  r.outputs = {{"t_min", t_min},
               {"estimate", dai.estimate},
               {"estimate_half", dai.estimate_half},
               {"converged", dai.converged ? 1.0 : 0.0},
               {"loglog_slope", slope}};
  if (opt.timings) r.wall_time = clock.lap();
  out.records.push_back(std::move(r));
  return out;
}

}  // namespace su2
