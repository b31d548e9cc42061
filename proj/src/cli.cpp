#include "cycloproj/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cycloproj/io.hpp"
#include "cycloproj/verify.hpp"

namespace cycloproj {
namespace {

struct Config {
  int n = 0;
  double c = 0.0;
  std::string grid;
  std::size_t sweeps = 10;
  std::size_t starts = 0;
  std::uint64_t seed = 42;
  bool with_solver = false;
  std::string system;
  std::string x0;
  std::string out;
  std::string format = "csv";
  std::vector<std::string> only;
  std::string fault;
};

// Writes to --out when given, else to the caller's stream.
void emit(const Config& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw PreconditionError("cannot write " + cfg.out);
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot write " + path);
  f << text;
}

int cmd_solve(const Config& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.format != "json" && cfg.format != "csv") throw PreconditionError("unknown format " + cfg.format);
  const FeasibleSpec spec = FeasibleSpec::make(cfg.n, cfg.c);
  const std::size_t starts = cfg.starts == 0 ? default_starts(cfg.n) : cfg.starts;
  SolveResult r;
  try {
    r = maximize_product(spec, starts, cfg.seed);
  } catch (const NumericalError& e) {
    err << "solver failed: " << e.what() << " (residual " << e.residual() << ")\n";
    return 2;
  }
  if (!r.certified()) err << "warning: certificate gap " << r.certificate_gap << " exceeds " << kCertTol << "\n";
  emit(cfg, out, solve_result_to_json(r).dump(2) + "\n");
  if (!cfg.system.empty()) write_file(cfg.system, system_to_json(subspace_witness(r.optimum, spec).system).dump(2) + "\n");
  return 0;
}

int cmd_table(const Config& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<double> grid = parse_grid(cfg.grid);
  TableOptions opts;
  opts.with_solver = cfg.with_solver;
  opts.starts = cfg.starts;
  opts.seed = cfg.seed;
  std::vector<BoundRow> rows;
  try {
    rows = bounds_table(cfg.n, grid, opts);
  } catch (const NumericalError& e) {
    err << "solver failed: " << e.what() << "\n";
    return 2;
  }
  std::ostringstream os;
  if (cfg.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    auto opt = [](const std::optional<double>& x) { return x ? nlohmann::json(*x) : nlohmann::json(nullptr); };
    for (const BoundRow& b : rows) {
      arr.push_back({{"n", b.n},
                     {"c", b.c},
                     {"f_closed", opt(b.f_closed)},
                     {"f_solver", opt(b.f_solver)},
                     {"lb_construction", b.lb_construction},
                     {"ub_ours", b.ub_ours},
                     {"ub_bgm", b.ub_bgm},
                     {"ub_bs", b.ub_bs},
                     {"ub_quadratic", b.ub_quadratic}});
    }
    os << arr.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    write_bounds_csv(os, rows);
  } else {
    throw PreconditionError("unknown format " + cfg.format);
  }
  emit(cfg, out, os.str());

  const EnvelopeFit fit = fit_lower_bound_envelope(cfg.n);
  err << "empirical b_tilde (least-squares fit of the lower-bound envelope): " << format_number(fit.curvature)
      << "\n";
  if (cfg.with_solver) {
    for (const BoundRow& b : rows) {
      err << "c=" << format_number(b.c) << " f - (1 - a_n(1-c)) = "
          << format_number(*b.f_solver - (1.0 - a_coefficient(cfg.n) * (1.0 - b.c))) << "\n";
    }
  }
  return 0;
}

int cmd_simulate(const Config& cfg, std::ostream& out, std::ostream& err) {
  const SubspaceSystem sys = system_from_json(read_json_file(cfg.system));
  CVector x0(sys.ambient_dim());
  if (cfg.x0.empty()) {
    x0[0] = 1.0;
  } else {
    x0 = vector_from_json(read_json_file(cfg.x0));
    if (x0.size() != sys.ambient_dim()) throw PreconditionError("x0 length does not match ambient_dim");
  }
  const MapTrace trace = run_map(sys, x0, cfg.sweeps);
  std::ostringstream os;
  if (cfg.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 1; k < trace.errors.size(); ++k)
      rows.push_back({{"sweep", k}, {"error", trace.errors[k]}, {"ratio", trace.contraction[k - 1]}});
    os << rows.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    write_trace_csv(os, trace);
  } else {
    throw PreconditionError("unknown format " + cfg.format);
  }
  emit(cfg, out, os.str());

  const AngleReport a = angles(sys);
  const int n = static_cast<int>(sys.size());
  err << "c_F = " << format_number(a.friedrichs) << "\n"
      << "c_D = " << format_number(a.dixmier) << "\n"
      << "predicted rate per sweep (upper bound for f_n(c_F)) = " << format_number(rate_bound(n, a.friedrichs))
      << "\n";
  return 0;
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  VerifyConfig vc;
  if (cfg.n != 0) vc.n = cfg.n;
  vc.seed = cfg.seed;
  vc.fault = cfg.fault;
  std::vector<std::string> only;
  for (const auto& item : cfg.only) {
    std::stringstream ss(item);
    for (std::string name; std::getline(ss, name, ',');)
      if (!name.empty()) only.push_back(name);
  }
  const auto results = run_checks(vc, only);
  std::ostringstream os;
  std::size_t failed = 0;
  for (const auto& r : results) {
    os << format_result(r) << "\n";
    if (!r.passed) ++failed;
  }
  os << results.size() - failed << "/" << results.size() << " checks passed\n";
  emit(cfg, out, os.str());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyclic alternating projections: worst-case rates, bounds and simulation"};
  app.require_subcommand(1);
  Config cfg;

  auto* solve = app.add_subcommand("solve", "Estimate f_n(c) with an optimal matrix, certificate and witness");
  solve->add_option("--n", cfg.n, "number of subspaces")->required()->check(CLI::Range(2, 64));
  solve->add_option("--c", cfg.c, "Friedrichs number bound")->required()->check(CLI::Range(0.0, 1.0));
  solve->add_option("--starts", cfg.starts, "ascent starts (default max(8, 2n))");
  solve->add_option("--seed", cfg.seed, "random seed");
  solve->add_option("--system", cfg.system, "also write the witness subspace system as JSON");
  solve->add_option("--out", cfg.out, "output file");
  solve->add_option("--format", cfg.format, "ignored; results are JSON");

  auto* table = app.add_subcommand("table", "Closed forms, bounds and optional solver values over a grid of c");
  table->add_option("--n", cfg.n, "number of subspaces")->required()->check(CLI::Range(2, 64));
  table->add_option("--grid", cfg.grid, "start:end:step or a comma list")->required();
  table->add_flag("--with-solver", cfg.with_solver, "fill the f_solver column");
  table->add_option("--starts", cfg.starts, "ascent starts (default max(8, 2n))");
  table->add_option("--seed", cfg.seed, "random seed; grid point i uses seed + i");
  table->add_option("--out", cfg.out, "output file");
  table->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* simulate = app.add_subcommand("simulate", "Run the cyclic method on a subspace system");
  simulate->add_option("--system", cfg.system, "subspace system JSON")->required();
  simulate->add_option("--x0", cfg.x0, "start vector JSON (default e_1)");
  simulate->add_option("--sweeps", cfg.sweeps, "number of full sweeps");
  simulate->add_option("--out", cfg.out, "output file");
  simulate->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* verify = app.add_subcommand("verify", "Run the named numerical checks");
  verify->add_option("--only", cfg.only, "check names (repeat or comma separated)");
  verify->add_option("--n", cfg.n, "restrict checks that sweep over n")->check(CLI::Range(2, 64));
  verify->add_option("--seed", cfg.seed, "random seed");
  verify->add_option("--fault", cfg.fault, "inject a fault: clip or ub");
  verify->add_option("--out", cfg.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*solve) return cmd_solve(cfg, out, err);
    if (*table) return cmd_table(cfg, out, err);
    if (*simulate) return cmd_simulate(cfg, out, err);
    return cmd_verify(cfg, out);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cycloproj
