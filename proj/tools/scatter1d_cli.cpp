// scatter1d: figure-ready CSV/JSON for 1D scattering amplitudes, densities of
// states, bound-state counting, box-oracle staircases and the dilute-gas
// pressure correction.
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scatter1d/io.hpp"
#include "scatter1d/scatter1d.hpp"

namespace {

using namespace scatter1d;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string read_potential_arg(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw InvalidArgument("cannot read potential file " + arg.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string::npos) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double to_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse " + what + " from \"" + s + "\"");
  }
}

// min:max:count[:linear|log|mixed]
GridSpec parse_grid(const std::string& text) {
  const auto p = split(text, ":");
  if (p.size() < 3 || p.size() > 4) throw InvalidArgument("--grid expects min:max:count[:log]");
  GridSpec g;
  g.k_min = to_number(p[0], "grid min");
  g.k_max = to_number(p[1], "grid max");
  const double count = to_number(p[2], "grid count");
  if (!(count >= 2.0) || count != std::floor(count)) throw InvalidArgument("--grid count must be an integer >= 2");
  g.count = static_cast<std::size_t>(count);
  if (p.size() == 4) {
    if (p[3] == "log") g.spacing = GridSpacing::Log;
    else if (p[3] == "linear" || p[3] == "lin") g.spacing = GridSpacing::Linear;
    else if (p[3] == "mixed") g.spacing = GridSpacing::Mixed;
    else throw InvalidArgument("--grid spacing must be linear, log or mixed");
  }
  return g;
}

std::vector<double> parse_range(const std::string& text, const std::string& flag) {
  const auto p = split(text, ":,");
  if (p.size() != 3) throw InvalidArgument(flag + " expects min:max:step");
  return sweep_values(to_number(p[0], flag), to_number(p[1], flag), to_number(p[2], flag));
}

std::optional<DensityMethod> parse_method(const std::string& m) {
  if (m.empty()) return std::nullopt;
  if (m == "closed") return DensityMethod::Closed;
  if (m == "direct") return DensityMethod::Direct;
  if (m == "shortcut") return DensityMethod::Shortcut;
  throw InvalidArgument("--method must be closed, direct or shortcut");
}

json complex_json(complex z) { return json::array({z.real(), z.imag()}); }

json report_json(const BoundStateReport& r) {
  json j;
  j["n_b_integrated"] = r.n_b_integrated;
  j["n_b_analytic"] = r.n_b_analytic ? json(*r.n_b_analytic) : json(nullptr);
  j["residual"] = r.residual ? json(*r.residual) : json(nullptr);
  j["quadrature"] = {{"cutoff", r.diagnostics.cutoff},
                     {"tail_correction", r.diagnostics.tail_correction},
                     {"error_estimate", r.diagnostics.error_estimate},
                     {"tail_coefficient", r.diagnostics.tail.coefficient}};
  return j;
}

struct Common {
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "Output path (default: stdout)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file " + c.out);
  f << text;
}

std::string run_rt(const std::string& potential, const std::string& grid, const std::string& format) {
  const auto spec = parse_potential(read_potential_arg(potential));
  const auto ks = make_grid(parse_grid(grid), spec.length_scale());
  std::vector<Amplitudes> amps(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) { amps[i] = amplitudes(ks[i], spec); });
  if (format == "json") {
    json j;
    j["potential"] = to_json(spec);
    j["samples"] = json::array();
    for (const auto& a : amps)
      j["samples"].push_back({{"k", a.k}, {"R", complex_json(a.R)}, {"T", complex_json(a.T)}, {"unitarity", a.unitarity()}});
    return dump_json(j) + "\n";
  }
  std::ostringstream os;
  os << "k,re_R,im_R,re_T,im_T,unitarity\n";
  for (const auto& a : amps)
    os << format_double(a.k) << ',' << format_double(a.R.real()) << ',' << format_double(a.R.imag()) << ','
       << format_double(a.T.real()) << ',' << format_double(a.T.imag()) << ',' << format_double(a.unitarity()) << '\n';
  return os.str();
}

std::string run_dos(const std::string& potential, const std::string& grid, const std::string& method,
                    const std::string& derivative, const std::string& format) {
  const auto spec = parse_potential(read_potential_arg(potential));
  const auto mode = derivative == "numeric" ? DerivativeMode::Numeric : DerivativeMode::Analytic;
  const auto density = sample_density(spec, parse_grid(grid), parse_method(method), mode);
  const char* label = to_string(density.method);
  if (format == "json") {
    json j;
    j["potential"] = to_json(spec);
    j["method"] = label;
    j["delta_weight_at_zero"] = {{"num", density.delta_weight_at_zero.num}, {"den", density.delta_weight_at_zero.den}};
    if (density.grid.back() * density.length_scale >= 50.0) {
      const auto fit = fit_tail(density);
      j["tail_fit"] = {{"coefficient", fit.coefficient}, {"subleading", fit.subleading},
                       {"k_lo", fit.k_lo}, {"k_hi", fit.k_hi}, {"points", fit.points}};
    } else {
      j["tail_fit"] = nullptr;
    }
    j["samples"] = json::array();
    for (std::size_t i = 0; i < density.grid.size(); ++i)
      j["samples"].push_back({{"k", density.grid[i]}, {"delta_rho", density.delta_rho[i]}});
    return dump_json(j) + "\n";
  }
  std::ostringstream os;
  os << "k,delta_rho,method\n";
  for (std::size_t i = 0; i < density.grid.size(); ++i)
    os << format_double(density.grid[i]) << ',' << format_double(density.delta_rho[i]) << ',' << label << '\n';
  return os.str();
}

std::string run_levinson(const std::string& potential, const std::string& sweep, double a, const std::string& method,
                         const std::string& format) {
  LevinsonOptions opt;
  opt.method = parse_method(method);
  if (!sweep.empty()) {
    const auto points = staircase_sweep(parse_range(sweep, "--sweep"), a, opt);
    std::ostringstream os;
    os << "qa,n_b_integrated,n_b_analytic\n";
    for (const auto& p : points)
      os << format_double(p.qa) << ',' << format_double(p.report.n_b_integrated) << ',' << *p.report.n_b_analytic
         << '\n';
    return os.str();
  }
  if (potential.empty()) throw InvalidArgument("levinson needs --potential or --sweep");
  const auto spec = parse_potential(read_potential_arg(potential));
  const auto report = count_bound_states(spec, opt);
  if (format == "csv") {
    std::ostringstream os;
    os << "n_b_integrated,n_b_analytic,residual\n"
       << format_double(report.n_b_integrated) << ','
       << (report.n_b_analytic ? std::to_string(*report.n_b_analytic) : std::string()) << ','
       << (report.residual ? format_double(*report.residual) : std::string()) << '\n';
    return os.str();
  }
  json j = report_json(report);
  j["potential"] = to_json(spec);
  return dump_json(j) + "\n";
}

std::string run_oracle(const std::string& potential, double box, std::size_t n, std::size_t checkpoints,
                       std::optional<double> k_lo, std::optional<double> k_hi, const std::string& format) {
  const auto spec = parse_potential(read_potential_arg(potential));
  const double top = k_hi.value_or(0.95 * resolved_k_max(box, n));
  const auto interacting = discretize_and_solve(spec, box, n, top);
  const auto free = discretize_and_solve(make_free(spec.length_scale()), box, n, top);
  const auto ks = oracle_checkpoints(box, k_lo.value_or(0.1 / spec.length_scale()), top, checkpoints);
  const auto rows = oracle_comparison(interacting, free, spec, ks);
  if (format == "json") {
    json j;
    j["potential"] = to_json(spec);
    j["box_length"] = box;
    j["grid_points"] = n;
    j["bound_energies"] = interacting.bound_energies;
    j["rows"] = json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"k", r.k}, {"staircase_diff", r.staircase_diff},
                           {"cumulative_dos_integral", r.cumulative_dos_integral}});
    return dump_json(j) + "\n";
  }
  std::ostringstream os;
  os << "k,staircase_diff,cumulative_dos_integral\n";
  for (const auto& r : rows)
    os << format_double(r.k) << ',' << format_double(r.staircase_diff) << ',' << format_double(r.cumulative_dos_integral)
       << '\n';
  return os.str();
}

std::string run_thermo(std::optional<double> x, double rho, double kappa, const std::string& sweep,
                       const std::string& format) {
  auto params_for = [&](double xv) {
    if (!(kappa > 0.0)) throw InvalidArgument("--kappa must be > 0");
    return ThermoParams{xv / (kappa * kappa), kappa, rho};
  };
  if (!sweep.empty()) {
    const auto g = parse_grid(sweep);
    std::ostringstream os;
    os << "x,beta,delta_q2_per_com,delta_p_coefficient,delta_p\n";
    for (double xv : make_grid(g)) {
      const auto p = params_for(xv);
      const auto r = thermodynamics(p);
      os << format_double(xv) << ',' << format_double(p.beta) << ',' << format_double(r.delta_q2_per_com) << ','
         << format_double(r.delta_p_coefficient) << ',' << format_double(r.delta_p) << '\n';
    }
    return os.str();
  }
  if (!x) throw InvalidArgument("thermo needs --x or --sweep-x");
  const auto p = params_for(*x);
  const auto r = thermodynamics(p);
  if (format == "csv") {
    std::ostringstream os;
    os << "x,beta,delta_q2_per_com,delta_p_coefficient,delta_p\n"
       << format_double(r.x_used) << ',' << format_double(p.beta) << ',' << format_double(r.delta_q2_per_com) << ','
       << format_double(r.delta_p_coefficient) << ',' << format_double(r.delta_p) << '\n';
    return os.str();
  }
  json j = {{"x", r.x_used},
            {"beta", p.beta},
            {"kappa", p.kappa},
            {"rho_gas", p.rho_gas},
            {"delta_q2_per_com", r.delta_q2_per_com},
            {"delta_p_coefficient", r.delta_p_coefficient},
            {"delta_p", r.delta_p}};
  return dump_json(j) + "\n";
}

std::string run_parity(const std::string& potential, std::optional<double> k, std::optional<double> x,
                       std::size_t samples, std::uint64_t seed) {
  const auto spec = parse_potential(read_potential_arg(potential));
  const double a = spec.half_range();
  std::vector<std::pair<double, double>> points;
  if (k && x) {
    points.emplace_back(*k, *x);
  } else if (!k && !x) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uk(0.01, 10.0), ux(0.0, 20.0), coin(0.0, 1.0);
    const double scale = spec.length_scale();
    for (std::size_t i = 0; i < samples; ++i) {
      const double kk = uk(rng) / scale;
      double xx = a + 1e-3 * scale + ux(rng) * scale;
      if (coin(rng) < 0.5) xx = -xx;
      points.emplace_back(kk, xx);
    }
  } else {
    throw InvalidArgument("parity-check needs both --k and --x, or neither (random samples)");
  }
  std::ostringstream os;
  os << "k,x,re_asymptotic,im_asymptotic,re_parity,im_parity,re_channels,im_channels,max_discrepancy\n";
  for (const auto& [kk, xx] : points) {
    const auto c = parity_decomposition_check(amplitudes(kk, spec), xx, a);
    os << format_double(kk) << ',' << format_double(xx) << ',' << format_double(c.asymptotic.real()) << ','
       << format_double(c.asymptotic.imag()) << ',' << format_double(c.parity_form.real()) << ','
       << format_double(c.parity_form.imag()) << ',' << format_double(c.channel_sum().real()) << ','
       << format_double(c.channel_sum().imag()) << ',' << format_double(c.max_discrepancy()) << '\n';
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D scattering amplitudes, densities of states, Levinson counting and dilute-gas thermodynamics"};
  app.require_subcommand(1);

  std::string potential, grid = "0.01:10:500", method, derivative = "analytic", sweep, sweep_x;
  std::optional<double> opt_x, opt_k, k_lo, k_hi;
  double rho = 1.0, kappa = 1.0, a = 1.0, box = 200.0;
  std::size_t n = 20000, checkpoints = 12, samples = 100;
  std::uint64_t seed = 12345;

  Common c_rt, c_dos, c_lev, c_orc, c_thermo, c_par;

  auto* rt = app.add_subcommand("rt", "Reflection/transmission amplitudes on a k grid");
  rt->add_option("--potential", potential, "Potential JSON or @file")->required();
  rt->add_option("--grid", grid, "min:max:count[:log]");
  add_common(rt, c_rt);

  auto* dos = app.add_subcommand("dos", "Smooth density of states delta_rho(k)");
  dos->add_option("--potential", potential, "Potential JSON or @file")->required();
  dos->add_option("--grid", grid, "min:max:count[:log]");
  dos->add_option("--method", method, "closed | direct | shortcut (default: best available)");
  dos->add_option("--derivative", derivative, "analytic | numeric (shortcut method)")
      ->check(CLI::IsMember({"analytic", "numeric"}));
  add_common(dos, c_dos);

  auto* lev = app.add_subcommand("levinson", "Bound-state count from the integrated loss spectrum");
  lev->add_option("--potential", potential, "Potential JSON or @file");
  lev->add_option("--sweep", sweep, "Square-well staircase qa_min:qa_max:step");
  lev->add_option("--a", a, "Square-well half width for --sweep");
  lev->add_option("--method", method, "closed | direct | shortcut");
  c_lev.format = "json";
  add_common(lev, c_lev);

  auto* orc = app.add_subcommand("oracle", "Finite-box eigenvalue staircase vs cumulative density");
  orc->add_option("--potential", potential, "Potential JSON or @file")->required();
  orc->add_option("--L", box, "Box length");
  orc->add_option("--n", n, "Interior grid points");
  orc->add_option("--checkpoints", checkpoints, "Number of k checkpoints");
  orc->add_option("--k-min", k_lo, "Lowest checkpoint");
  orc->add_option("--k-max", k_hi, "Highest checkpoint (default 0.95 of the resolved range)");
  add_common(orc, c_orc);

  auto* th = app.add_subcommand("thermo", "Second-order virial pressure correction for the attractive delta gas");
  th->add_option("--x", opt_x, "beta * kappa^2");
  th->add_option("--rho", rho, "Gas density (particles per length)");
  th->add_option("--kappa", kappa, "Delta strength kappa (> 0)");
  th->add_option("--sweep-x", sweep_x, "min:max:count[:log] sweep over x (CSV)");
  c_thermo.format = "json";
  add_common(th, c_thermo);

  auto* par = app.add_subcommand("parity-check", "Asymptotic, parity and partial-wave forms of psi_k(x)");
  par->add_option("--potential", potential, "Potential JSON or @file")->required();
  par->add_option("--k", opt_k, "Wavevector");
  par->add_option("--x", opt_x, "Position with |x| > a");
  par->add_option("--samples", samples, "Random (k, x) samples when --k/--x are omitted");
  par->add_option("--seed", seed, "RNG seed for random samples");
  par->add_option("--out", c_par.out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (rt->parsed()) emit(c_rt, run_rt(potential, grid, c_rt.format));
    else if (dos->parsed()) emit(c_dos, run_dos(potential, grid, method, derivative, c_dos.format));
    else if (lev->parsed()) emit(c_lev, run_levinson(potential, sweep, a, method, c_lev.format));
    else if (orc->parsed()) emit(c_orc, run_oracle(potential, box, n, checkpoints, k_lo, k_hi, c_orc.format));
    else if (th->parsed()) emit(c_thermo, run_thermo(opt_x, rho, kappa, sweep_x, c_thermo.format));
    else if (par->parsed()) emit(c_par, run_parity(potential, opt_k, opt_x, samples, seed));
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
