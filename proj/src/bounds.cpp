#include "cycloproj/bounds.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "cycloproj/map_sim.hpp"
#include "cycloproj/parallel.hpp"

namespace cycloproj {
namespace {

void require_n(int n) {
  if (n < 2) throw PreconditionError("n must be at least 2");
}

void require_unit(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw PreconditionError("c must lie in [0, 1]");
}

double d_of_tau(const std::vector<double>& alphas, double tau) {
  double d = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t j = i + 1; j < alphas.size(); ++j) {
      const double s = std::sin((alphas[i] - alphas[j]) * tau);
      d += s * s;
    }
  return d;
}

double c_from_d(int n, double d) {
  const double nn = n;
  return ((nn + std::sqrt(std::max(0.0, nn * nn - 4.0 * d))) / 2.0 - 1.0) / (nn - 1.0);
}

double c_of_tau(int n, const std::vector<double>& alphas, double tau) {
  return c_from_d(n, d_of_tau(alphas, tau));
}

double product_of_tau(const std::vector<double>& alphas, double tau) {
  double p = 1.0;
  for (std::size_t k = 0; k + 1 < alphas.size(); ++k) p *= std::abs(std::cos((alphas[k + 1] - alphas[k]) * tau));
  return p;
}

// Largest tau in [0, tau_max] with c(tau) <= c, by bisection (c decreasing).
double invert_c(int n, const std::vector<double>& alphas, double tau_max, double c) {
  double lo = 0.0, hi = tau_max;  // c(lo) >= c >= c(hi)
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double cm = c_of_tau(n, alphas, mid);
    if (cm <= c) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (std::abs(c_of_tau(n, alphas, hi) - c) <= 1e-12 || hi - lo <= 1e-300) break;
  }
  return hi;
}

}  // namespace

double sin2_half_angle(int n) {
  require_n(n);
  const double s = std::sin(std::numbers::pi / (2.0 * n));
  return s * s;
}

double f2_closed(double c) {
  require_unit(c);
  return c;
}

double f3_closed(double c) {
  require_unit(c);
  return c <= 0.25 ? 4.0 * c * c : c;
}

double fn_small_c(int n, double c) {
  require_n(n);
  const double limit = 1.0 / ((n - 1.0) * (n - 1.0));
  if (!(c >= 0.0 && c <= limit)) {
    std::ostringstream msg;
    msg << "fn_small_c: c = " << c << " lies outside [0, 1/(n-1)^2] = [0, " << limit << "]";
    throw PreconditionError(msg.str());
  }
  return std::pow((n - 1.0) * c, n - 1);
}

std::optional<double> f_closed(int n, double c) {
  require_n(n);
  require_unit(c);
  if (n == 2) return f2_closed(c);
  if (n == 3) return f3_closed(c);
  if (c <= 1.0 / ((n - 1.0) * (n - 1.0))) return fn_small_c(n, c);
  if (c == 1.0) return 1.0;
  return std::nullopt;
}

double ub_ours(int n, double c) {
  require_unit(c);
  const double s = sin2_half_angle(n);
  const double num = n - 4.0 * (n - 1) * s * (1.0 - c);
  const double den = n + 4.0 * (n - 1.0) * (n - 1.0) * s * (1.0 - c);
  return std::sqrt(std::max(0.0, num) / den);
}

double ub_bgm(int n, double c) {
  require_n(n);
  require_unit(c);
  const double e = 1.0 - c;
  return std::sqrt(1.0 - e * e / (16.0 * n * n));
}

double ub_bs(int n, double c) {
  require_n(n);
  require_unit(c);
  return std::sqrt(1.0 - 3.0 * (n - 1.0) / (static_cast<double>(n) * n * n) * (1.0 - c));
}

double ub_inverse_sqrt(int n, double c) {
  require_unit(c);
  return 1.0 / std::sqrt(1.0 + 4.0 * (n - 1) * sin2_half_angle(n) * (1.0 - c));
}

double a_coefficient(int n) { return 2.0 * (n - 1) * sin2_half_angle(n); }

double b_coefficient(int n) {
  const double s = sin2_half_angle(n);
  return 6.0 * (n - 1.0) * (n - 1.0) * s * s;
}

double ub_quadratic(int n, double c) {
  require_unit(c);
  const double e = 1.0 - c;
  return 1.0 - a_coefficient(n) * e + b_coefficient(n) * e * e;
}

double lb_quadratic_template(int n, double c, double b_tilde) {
  require_unit(c);
  const double e = 1.0 - c;
  return 1.0 - a_coefficient(n) * e - b_tilde * e * e;
}

double rate_bound(int n, double c) {
  if (n == 2) return f2_closed(c);
  if (n == 3) return f3_closed(c);
  return ub_ours(n, c);
}

SymmetricMatrix path_laplacian(int n) {
  require_n(n);
  const std::size_t m = static_cast<std::size_t>(n);
  RealMatrix l(m, m);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    l(i, i) += 1.0;
    l(i + 1, i + 1) += 1.0;
    l(i, i + 1) = -1.0;
    l(i + 1, i) = -1.0;
  }
  return SymmetricMatrix(l);
}

FiedlerPair fiedler(int n) {
  const auto sd = eig_hermitian(path_laplacian(n));
  FiedlerPair f{sd.eigenvalues[1], sd.eigenvectors.column(1)};
  if (f.vector.front() < 0.0)
    for (double& x : f.vector) x = -x;
  return f;
}

double dn_constant(int n) { return n / (4.0 * sin2_half_angle(n)); }

InequalitySides check_difference_inequality(const std::vector<double>& a) {
  const int n = static_cast<int>(a.size());
  require_n(n);
  double lhs = 0.0, consecutive = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) lhs += (a[i] - a[j]) * (a[i] - a[j]);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) consecutive += (a[i] - a[i + 1]) * (a[i] - a[i + 1]);
  return {lhs, dn_constant(n) * consecutive};
}

InequalitySides check_difference_inequality(const std::vector<CVector>& v) {
  const int n = static_cast<int>(v.size());
  require_n(n);
  auto dist2 = [](const CVector& x, const CVector& y) {
    if (x.size() != y.size()) throw PreconditionError("vectors must share a dimension");
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += std::norm(x[k] - y[k]);
    return s;
  };
  double lhs = 0.0, consecutive = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) lhs += dist2(v[i], v[j]);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) consecutive += dist2(v[i], v[i + 1]);
  return {lhs, dn_constant(n) * consecutive};
}

LowerBoundProbe lower_bound_probe(int n, double tau) {
  require_n(n);
  if (!(tau >= 0.0)) throw PreconditionError("lower_bound_probe: tau must be >= 0");
  LowerBoundProbe p;
  p.n = n;
  p.tau = tau;
  p.alphas = fiedler(n).vector;
  p.d = d_of_tau(p.alphas, tau);
  const double nn = n;
  if (4.0 * p.d > nn * nn * (1.0 + 1e-12)) {
    throw PreconditionError("lower_bound_probe: 4 d(tau) exceeds n^2");
  }
  p.c_of_tau = c_from_d(n, p.d);
  p.product_norm = product_of_tau(p.alphas, tau);
  for (std::size_t i = 0; i < p.alphas.size(); ++i)
    for (std::size_t j = i + 1; j < p.alphas.size(); ++j) p.s1 += std::pow(p.alphas[i] - p.alphas[j], 2);
  for (std::size_t i = 0; i + 1 < p.alphas.size(); ++i) p.s2 += std::pow(p.alphas[i] - p.alphas[i + 1], 2);

  std::vector<Subspace> lines;
  for (double a : p.alphas) lines.push_back(Subspace::span_real(2, {{std::cos(a * tau), std::sin(a * tau)}}));
  const SubspaceSystem sys(2, std::move(lines));
  p.system_dixmier = dixmier_number(sys);
  p.system_product_norm = product_norm(sys);
  const double mismatch = std::max(std::abs(p.system_dixmier - std::clamp(p.c_of_tau, 0.0, 1.0)),
                                   std::abs(p.system_product_norm - p.product_norm));
  if (mismatch > 1e-9) {
    std::ostringstream msg;
    msg << "lower_bound_probe: closed form and explicit system disagree by " << mismatch;
    throw NumericalError(msg.str(), mismatch);
  }
  return p;
}

double probe_tau_max(int n) {
  const std::vector<double> alphas = fiedler(n).vector;
  double spread = 0.0;
  for (double a : alphas)
    for (double b : alphas) spread = std::max(spread, std::abs(a - b));
  const double h = std::numbers::pi / (spread * 4000.0);
  double tau = 0.0;
  double d = 0.0;
  for (;;) {
    const double next = d_of_tau(alphas, tau + h);
    if (next <= d) break;
    d = next;
    tau += h;
  }
  // golden-section refinement of the maximum in [tau - h, tau + h]
  double lo = std::max(0.0, tau - h), hi = tau + h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (d_of_tau(alphas, m1) < d_of_tau(alphas, m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return 0.5 * (lo + hi);
}

double lb_construction(int n, double c) {
  require_n(n);
  require_unit(c);
  if (c >= 1.0) return 1.0;
  const std::vector<double> alphas = fiedler(n).vector;
  const double tau_max = probe_tau_max(n);
  if (c < c_of_tau(n, alphas, tau_max)) return 0.0;
  return product_of_tau(alphas, invert_c(n, alphas, tau_max, c));
}

EnvelopeFit fit_lower_bound_envelope(int n, double u_lo, double u_hi, std::size_t points) {
  if (points < 2) throw PreconditionError("fit needs at least two points");
  const std::vector<double> alphas = fiedler(n).vector;
  const double tau_max = probe_tau_max(n);
  // normal equations for y - 1 = -s u - k u^2
  double suu = 0.0, suu2 = 0.0, su2u2 = 0.0, syu = 0.0, syu2 = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(points - 1);
    const double target = u_lo * std::pow(u_hi / u_lo, frac);
    const double tau = invert_c(n, alphas, tau_max, 1.0 - target);
    const LowerBoundProbe p = lower_bound_probe(n, tau);
    const double u = 1.0 - p.c_of_tau;
    const double y = p.product_norm - 1.0;
    suu += u * u;
    suu2 += u * u * u;
    su2u2 += u * u * u * u;
    syu += y * u;
    syu2 += y * u * u;
  }
  // [suu suu2; suu2 su2u2] [-s; -k] = [syu; syu2]
  const double det = suu * su2u2 - suu2 * suu2;
  const double ms = (syu * su2u2 - suu2 * syu2) / det;
  const double mk = (suu * syu2 - suu2 * syu) / det;
  return {-ms, -mk, points};
}

std::vector<BoundRow> bounds_table(int n, const std::vector<double>& c_grid, const TableOptions& opts) {
  require_n(n);
  for (double c : c_grid) require_unit(c);
  const double b_tilde = fit_lower_bound_envelope(n).curvature;
  const std::size_t starts = opts.starts == 0 ? default_starts(n) : opts.starts;

  std::vector<BoundRow> rows(c_grid.size());
  parallel_for(c_grid.size(), [&](std::size_t i) {
    const double c = c_grid[i];
    BoundRow& r = rows[i];
    r.n = n;
    r.c = c;
    r.f_closed = f_closed(n, c);
    if (opts.with_solver) {
      const SolveResult s = maximize_product(FeasibleSpec::make(n, c), starts, opts.seed + i, opts.solver);
      r.f_solver = s.f_estimate;
    }
    r.lb_construction = lb_construction(n, c);
    r.ub_ours = ub_ours(n, c);
    r.ub_bgm = ub_bgm(n, c);
    r.ub_bs = ub_bs(n, c);
    r.ub_quadratic = ub_quadratic(n, c);
    r.lb_quadratic_template = lb_quadratic_template(n, c, b_tilde);
  });
  return rows;
}

}  // namespace cycloproj
