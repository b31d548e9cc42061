#include "cycloproj/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "cycloproj/bounds.hpp"
#include "cycloproj/map_sim.hpp"
#include "cycloproj/parallel.hpp"
#include "cycloproj/rng.hpp"

namespace cycloproj {
namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

CVector random_vector(Rng& rng, std::size_t d) {
  CVector v(d);
  for (auto& z : v) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return v;
}

// Random subspace of C^d of the given rank, optionally containing `shared`.
Subspace random_subspace(Rng& rng, std::size_t d, std::size_t rank, const std::vector<CVector>& shared) {
  std::vector<CVector> vs = shared;
  while (vs.size() < rank) vs.push_back(random_vector(rng, d));
  return Subspace::span(d, vs);
}

// n subspaces of C^d; about a third of them share a common line.
SubspaceSystem random_system(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<CVector> shared;
  if (d >= 3 && rng.below(3) == 0) shared.push_back(random_vector(rng, d));
  std::vector<Subspace> subs;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = shared.size() + 1;
    const std::size_t rank = lo + rng.below(d - lo);  // lo .. d-1
    subs.push_back(random_subspace(rng, d, rank, shared));
  }
  return SubspaceSystem(d, std::move(subs));
}

class Runner {
 public:
  explicit Runner(const VerifyConfig& cfg) : cfg_(cfg) {
    if (cfg.fault == "clip") opts_.projection.upper_scale = 1.05;
  }

  const VerifyConfig& cfg() const { return cfg_; }

  std::vector<int> ns(std::vector<int> defaults) const {
    if (cfg_.n) return {*cfg_.n};
    return defaults;
  }

  double ub(int n, double c) const { return cfg_.fault == "ub" ? 0.95 * ub_ours(n, c) : ub_ours(n, c); }

  // Solves (n, c_k) for every grid value, in parallel, seeding by grid index.
  std::vector<SolveResult> solve_grid(int n, const std::vector<double>& cs) {
    std::vector<std::optional<SolveResult>> out(cs.size());
    parallel_for(cs.size(), [&](std::size_t i) { out[i] = solve(n, cs[i], cfg_.seed + i); });
    std::vector<SolveResult> res;
    for (auto& r : out) res.push_back(std::move(*r));
    return res;
  }

  SolveResult solve(int n, double c, std::uint64_t seed) {
    const auto key = std::make_tuple(n, c, seed);
    {
      std::lock_guard lock(mu_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    SolveResult r = maximize_product(FeasibleSpec::make(n, c), default_starts(n), seed, opts_);
    std::lock_guard lock(mu_);
    return cache_.emplace(key, std::move(r)).first->second;
  }

  std::vector<SolveResult> all_solves() const {
    std::lock_guard lock(mu_);
    std::vector<SolveResult> out;
    for (const auto& [k, r] : cache_) out.push_back(r);
    return out;
  }

 private:
  VerifyConfig cfg_;
  SolverOptions opts_{};
  mutable std::mutex mu_;
  std::map<std::tuple<int, double, std::uint64_t>, SolveResult> cache_;
};

struct Outcome {
  bool passed;
  std::string detail;
};

std::vector<double> unit_grid(double step) {
  std::vector<double> g;
  const int k = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= k; ++i) g.push_back(std::round(i * step * 1e12) / 1e12);
  return g;
}

Outcome f3_reproduction(Runner& run) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> cs = unit_grid(0.05);
  const auto res = run.solve_grid(3, cs);
  double worst = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) worst = std::max(worst, std::abs(res[i].f_estimate - f3_closed(cs[i])));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-5 && secs < 30.0,
          "21 points, max |f - closed form| = " + sci(worst) + ", " + sci(secs) + " s (limits 1e-5, 30 s)"};
}

Outcome small_c_law(Runner& run) {
  double worst = 0.0;
  for (int n : run.ns({3, 4, 5})) {
    const double edge = 1.0 / ((n - 1.0) * (n - 1.0));
    const std::vector<double> cs = {0.2 * edge, 0.5 * edge, 0.9 * edge};
    const auto res = run.solve_grid(n, cs);
    for (std::size_t i = 0; i < cs.size(); ++i)
      worst = std::max(worst, std::abs(res[i].f_estimate - fn_small_c(n, cs[i])));
  }
  return {worst <= 1e-5, "max |f - (n-1)^(n-1) c^(n-1)| = " + sci(worst) + " (limit 1e-5)"};
}

Outcome functional_equation(Runner& run) {
  double worst_closed = 0.0, worst_solver = 0.0;
  bool solver_ran = false;
  for (int n : run.ns({3, 4})) {
    const double m = (n - 1.0) * (n - 1.0);
    const double pw = std::pow(n - 1.0, n - 1);
    if (n == 3) {
      for (double c : unit_grid(0.01)) {
        if (c < 1.0 / m) continue;
        const double lhs = f3_closed(1.0 / (m * c));
        const double rhs = f3_closed(c) / (pw * std::pow(c, n - 1));
        worst_closed = std::max(worst_closed, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
      continue;
    }
    std::vector<double> cs = n == 4 ? std::vector<double>{0.15, 0.25, 0.4} : std::vector<double>{};
    if (cs.empty())
      for (double k : {1.5, 2.5, 4.0}) cs.push_back(std::min(1.0, k / m));
    std::vector<double> all = cs;
    for (double c : cs) all.push_back(1.0 / (m * c));
    const auto res = run.solve_grid(n, all);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const double lhs = res[cs.size() + i].f_estimate;
      const double rhs = res[i].f_estimate / (pw * std::pow(cs[i], n - 1));
      worst_solver = std::max(worst_solver, std::abs(lhs - rhs));
    }
    solver_ran = true;
  }
  std::string detail = "closed form max rel diff " + sci(worst_closed) + " (limit 1e-14)";
  if (solver_ran) detail += ", solver max |lhs - rhs| = " + sci(worst_solver) + " (limit 1e-4)";
  return {worst_closed <= 1e-14 && worst_solver <= 1e-4, detail};
}

Outcome witness_validity(Runner& run) {
  for (int n : run.ns({2, 3, 4})) run.solve_grid(n, unit_grid(0.1));
  double worst_norm = 0.0, worst_dix = -1.0;
  const auto all = run.all_solves();
  for (const SolveResult& r : all) {
    worst_norm = std::max(worst_norm, std::abs(r.witness_product_norm - r.f_estimate));
    worst_dix = std::max(worst_dix, r.witness_dixmier - r.spec.c);
  }
  return {worst_norm <= 1e-7 && worst_dix <= 1e-7,
          std::to_string(all.size()) + " solves, max |witness norm - f| = " + sci(worst_norm) +
              ", max (witness c_D - c) = " + sci(worst_dix) + " (limits 1e-7)"};
}

Outcome sandwich(Runner& run) {
  bool ok = true;
  double min_lower = 1.0, min_upper = 1.0;
  for (int n : run.ns({3, 4, 5})) {
    const std::vector<double> cs = {0.3, 0.6, 0.9};
    const auto res = run.solve_grid(n, cs);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const double f = res[i].f_estimate;
      const double lb = lb_construction(n, cs[i]);
      const double ub = run.ub(n, cs[i]);
      ok = ok && lb <= f && f <= ub + 1e-6;
      min_lower = std::min(min_lower, f - lb);
      min_upper = std::min(min_upper, ub + 1e-6 - f);
    }
  }
  return {ok, "min (f - lb) = " + sci(min_lower) + ", min (ub + 1e-6 - f) = " + sci(min_upper)};
}

Outcome kayalar_weinert(Runner& run) {
  Rng rng(derive_seed(run.cfg().seed, 6));
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + rng.below(7);
    const SubspaceSystem sys = random_system(rng, 2, d);
    const double cf = friedrichs_number(sys);
    const ComplexMatrix t = sweep_operator(sys);
    const ComplexMatrix p0 = intersection_projector(sys).matrix();
    for (unsigned k = 1; k <= 3; ++k) {
      const double norm = operator_norm(matrix_power(t, k) - p0);
      worst = std::max(worst, std::abs(norm - std::pow(cf, 2.0 * k - 1.0)));
    }
  }
  return {worst <= 1e-7, "50 systems, k = 1..3, max |norm - c_F^(2k-1)| = " + sci(worst) + " (limit 1e-7)"};
}

Outcome sum_norm_identity(Runner& run) {
  Rng rng(derive_seed(run.cfg().seed, 7));
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(4);
    const std::size_t d = 2 + rng.below(5);
    const SubspaceSystem sys = random_system(rng, n, d);
    const double lhs = operator_norm(projector_sum(sys));
    worst = std::max(worst, std::abs(lhs - 1.0 - (n - 1.0) * dixmier_number_by_definition(sys)));
  }
  // two lines at angle theta: c_D = |cos theta|
  double worst_lines = 0.0;
  for (int k = 0; k <= 8; ++k) {
    const double theta = k * std::numbers::pi / 8.0;
    const SubspaceSystem sys(2, {Subspace::span_real(2, {{1.0, 0.0}}),
                                 Subspace::span_real(2, {{std::cos(theta), std::sin(theta)}})});
    const double lhs = operator_norm(projector_sum(sys));
    worst_lines = std::max(worst_lines, std::abs(lhs - 1.0 - std::abs(std::cos(theta))));
    worst_lines = std::max(worst_lines, std::abs(dixmier_number_by_definition(sys) - std::abs(std::cos(theta))));
  }
  return {worst <= 1e-6 && worst_lines <= 1e-6,
          "50 systems max |norm - 1 - (n-1) c_D| = " + sci(worst) + ", line pairs " + sci(worst_lines) +
              " (limit 1e-6)"};
}

Outcome path_laplacian_check(Runner& run) {
  double worst_eig = 0.0;
  for (int n = 2; n <= 50; ++n) worst_eig = std::max(worst_eig, std::abs(fiedler(n).value - 4.0 * sin2_half_angle(n)));
  Rng rng(derive_seed(run.cfg().seed, 8));
  double worst_ratio = 0.0;
  for (int n : {3, 5, 8}) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> a(static_cast<std::size_t>(n));
      for (double& x : a) x = rng.uniform(-1.0, 1.0);
      const auto s = check_difference_inequality(a);
      worst_ratio = std::max(worst_ratio, s.lhs / s.rhs);
    }
  }
  const auto eq = check_difference_inequality(std::vector<double>{1.0, 0.0, -1.0});
  const bool equality = std::abs(eq.lhs - 6.0) <= 1e-9 && std::abs(eq.rhs - 6.0) <= 1e-9;
  return {worst_eig <= 1e-10 && worst_ratio <= 1.0 + 1e-12 && equality,
          "max |lambda_2 - 4 sin^2| = " + sci(worst_eig) + ", max lhs/rhs = " + sci(worst_ratio) +
              ", at (1,0,-1): " + sci(eq.lhs) + " vs " + sci(eq.rhs)};
}

Outcome lower_bound_slope(Runner& run) {
  double worst = 0.0;
  std::string detail;
  for (int n : run.ns({3, 4, 5})) {
    const EnvelopeFit fit = fit_lower_bound_envelope(n);
    const double rel = std::abs(fit.slope - a_coefficient(n)) / a_coefficient(n);
    worst = std::max(worst, rel);
    detail += "n=" + std::to_string(n) + " slope -" + sci(fit.slope) + " vs -" + sci(a_coefficient(n)) + "; ";
  }
  return {worst <= 0.02, detail + "max rel err " + sci(worst) + " (limit 0.02)"};
}

Outcome concavity_monotonicity(Runner& run) {
  double worst_concave = 0.0, worst_mono = 0.0;
  const std::vector<double> cs = unit_grid(0.05);
  for (int n : run.ns({3, 4})) {
    const auto res = run.solve_grid(n, cs);
    std::vector<double> g;
    for (const auto& r : res) g.push_back(std::pow(r.f_estimate, 1.0 / (n - 1)));
    for (std::size_t i = 0; i + 1 < cs.size(); ++i)
      worst_mono = std::max(worst_mono, res[i].f_estimate - res[i + 1].f_estimate);
    for (std::size_t i = 1; i + 1 < cs.size(); ++i)
      worst_concave = std::max(worst_concave, 0.5 * (g[i - 1] + g[i + 1]) - g[i]);
  }
  return {worst_concave <= 1e-5 && worst_mono <= 1e-5,
          "max midpoint-concavity defect " + sci(worst_concave) + ", max decrease " + sci(worst_mono) +
              " (slack 1e-5)"};
}

// Max x^2 over [[1,x,y],[x,1,x],[y,x,1]] with spectrum in [0, t]; the
// spectrum is 1 - y and 1 + y/2 -+ sqrt(y^2/4 + 2x^2).
double brute_force_f3(double c) {
  const double t = 1.0 + 2.0 * c;
  double best = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = i * 1e-3;
    for (int j = 0; j <= 2000; ++j) {
      const double y = -1.0 + j * 1e-3;
      const double r = std::sqrt(y * y / 4.0 + 2.0 * x * x);
      const double lo = std::min(1.0 - y, 1.0 + y / 2.0 - r);
      const double hi = std::max(1.0 - y, 1.0 + y / 2.0 + r);
      if (lo >= -1e-12 && hi <= t + 1e-12) best = std::max(best, x * x);
    }
  }
  return best;
}

Outcome brute_force_n3(Runner& run) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> cs = {0.1, 0.3, 0.7};
  const auto res = run.solve_grid(3, cs);
  double worst = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) worst = std::max(worst, std::abs(brute_force_f3(cs[i]) - res[i].f_estimate));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 2e-3 && secs < 120.0,
          "max |grid - solver| = " + sci(worst) + ", " + sci(secs) + " s (limits 2e-3, 120 s)"};
}

Outcome endpoints(Runner& run) {
  bool zero_exact = true;
  double min_one = 1.0;
  for (int n : run.ns({2, 3, 4})) {
    const auto res = run.solve_grid(n, {0.0, 1.0});
    zero_exact = zero_exact && res[0].f_estimate == 0.0;
    min_one = std::min(min_one, res[1].f_estimate);
  }
  return {zero_exact && min_one >= 1.0 - 1e-4,
          std::string("f(0) == 0: ") + (zero_exact ? "yes" : "no") + ", min f(1) = " + sci(min_one) +
              " (limit 1 - 1e-4)"};
}

using CheckFn = std::function<Outcome(Runner&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> r = {
      {"f3-reproduction", f3_reproduction},
      {"small-c-law", small_c_law},
      {"functional-equation", functional_equation},
      {"witness-validity", witness_validity},
      {"sandwich", sandwich},
      {"kayalar-weinert", kayalar_weinert},
      {"sum-norm-identity", sum_norm_identity},
      {"path-laplacian", path_laplacian_check},
      {"lower-bound-slope", lower_bound_slope},
      {"concavity-monotonicity", concavity_monotonicity},
      {"brute-force-n3", brute_force_n3},
      {"endpoints", endpoints},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

std::vector<std::string> fault_names() { return {"clip", "ub"}; }

std::vector<CheckResult> run_checks(const VerifyConfig& cfg, const std::vector<std::string>& only) {
  if (!cfg.fault.empty()) {
    const auto faults = fault_names();
    if (std::find(faults.begin(), faults.end(), cfg.fault) == faults.end()) {
      throw PreconditionError("unknown fault '" + cfg.fault + "'");
    }
  }
  if (cfg.n && *cfg.n < 2) throw PreconditionError("n must be at least 2");
  for (const auto& name : only) {
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end()) {
      throw PreconditionError("unknown check '" + name + "'");
    }
  }
  Runner run(cfg);
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : registry()) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = fn(run);
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CheckResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
  return std::string(r.passed ? "PASS " : "FAIL ") + r.name + " (" + secs + " s): " + r.detail;
}

}  // namespace cycloproj
