// su2fourier: partial sums, divergence witnesses and integral moduli on SU(2).
//
//   su2fourier divergence --n-list 8,16,32 --points "0.3,1.2,4.0;1,1,1"
//   su2fourier converge --field lip:0.5 --n-max 64 --points random:4
//   su2fourier modulus --field zonal:0.5 --t-min 0.01
//   su2fourier selftest --level full
//
// Exit codes: 0 success, 1 selftest failure or runtime error, 2 malformed
// input, 3 quadrature warnings under --strict.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "su2/experiments.hpp"
#include "su2/fields.hpp"
#include "su2/parallel.hpp"
#include "su2/record.hpp"
#include "su2/selftest.hpp"

namespace {

constexpr int kRuntimeError = 1;
constexpr int kBadInput = 2;
constexpr int kStrictWarnings = 3;

struct Common {
  std::string out;
  std::string format = "csv";
  std::optional<std::size_t> nodes;
  unsigned threads = 1;
  bool strict = false;
  std::uint64_t seed = 1;
  bool timings = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--nodes", c.nodes, "Quadrature node override")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--strict", c.strict, "Fail when any quadrature warning is raised");
  cmd->add_option("--seed", c.seed, "Seed for sampled points and estimators");
  cmd->add_flag("--timings", c.timings, "Add a wall_time column (output is no longer reproducible)");
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(su2::detail::parse_int(item, "degree list '" + s + "'"));
  if (out.empty()) throw su2::InputError("empty degree list");
  return out;
}

int emit(const Common& c, const su2::CommandResult& result) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!c.out.empty()) {
    file.open(c.out, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open '" << c.out << "' for writing\n";
      return kRuntimeError;
    }
    os = &file;
  }
  if (c.format == "json") su2::write_json(*os, result.records);
  else su2::write_csv(*os, result.records);
  os->flush();
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  if (c.strict && !result.warnings.empty()) {
    std::cerr << "error: " << result.warnings.size() << " quadrature warning(s) under --strict\n";
    return kStrictWarnings;
  }
  return 0;
}

su2::CommonOptions to_options(const Common& c) {
  su2::CommonOptions o;
  o.nodes = c.nodes;
  o.seed = c.seed;
  o.timings = c.timings;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier partial sums on SU(2): divergence witnesses, convergence and integral moduli"};
  app.require_subcommand(1);

  Common common;

  auto* div = app.add_subcommand("divergence", "Growth of the sawtooth witnesses at the given points");
  std::string n_list = "8,16,32,64", div_points = "0,0,0";
  double alpha = 0.5;
  div->add_option("--n-list", n_list, "Comma-separated degrees");
  div->add_option("--points", div_points, "\"phi,theta,psi;...\" or random:K");
  div->add_option("--alpha", alpha, "Hoelder exponent of the reported norm bound");
  add_common(div, common);

  auto* conv = app.add_subcommand("converge", "S_N f(x) and |S_N f(x) - f(x)| for N = 1..N_max");
  std::string conv_field = "constant", conv_points = "random:4";
  int n_max = 32;
  conv->add_option("--field", conv_field,
                   "constant[:c] | character:n | witness:n | lip:alpha | zonal:alpha | expcos | smooth | profile:PATH");
  conv->add_option("--n-max", n_max, "Largest degree");
  conv->add_option("--points", conv_points, "\"phi,theta,psi;...\" or random:K");
  add_common(conv, common);

  auto* mod = app.add_subcommand("modulus", "Integral modulus Omega(f, t) and the Dai criterion");
  std::string mod_field = "constant";
  double t_min = 0.01;
  mod->add_option("--field", mod_field, "Field, as for converge");
  mod->add_option("--t-min", t_min, "Lower end of the criterion integral, in (0, 1)");
  add_common(mod, common);

  auto* self = app.add_subcommand("selftest", "Run the invariant suites");
  std::string level = "quick", fault;
  self->add_option("--level", level, "quick | full")->check(CLI::IsMember({"quick", "full"}));
  self->add_option("--inject-fault", fault)->group("")->check(CLI::IsMember({"deriv-sign"}));
  add_common(self, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  su2::set_thread_count(common.threads);
  try {
    if (div->parsed()) {
      const auto pts = su2::parse_points(div_points, common.seed);
      return emit(common, su2::run_divergence(parse_int_list(n_list), pts, alpha, to_options(common)));
    }
    if (conv->parsed()) {
      const auto f = su2::parse_field(conv_field);
      const auto pts = su2::parse_points(conv_points, common.seed);
      return emit(common, su2::run_converge(f, n_max, pts, to_options(common)));
    }
    if (mod->parsed()) {
      const auto f = su2::parse_field(mod_field);
      return emit(common, su2::run_modulus(f, t_min, to_options(common)));
    }
    su2::SelftestOptions so;
    so.seed = common.seed;
    if (fault == "deriv-sign")
      so.dirichlet_deriv = [](int m, double t) { return -su2::dirichlet_scalar_deriv(m, t); };
    const bool ok = su2::selftest(level == "full" ? su2::SelftestLevel::full : su2::SelftestLevel::quick, std::cout, so);
    std::cout << (ok ? "selftest passed" : "selftest FAILED") << '\n';
    return ok ? 0 : kRuntimeError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
