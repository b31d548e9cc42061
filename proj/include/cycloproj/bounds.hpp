#pragma once

// Closed forms, upper bounds and the rotating-lines lower-bound construction
// for f_n(c), plus the path-graph Laplacian they rest on.

#include <cstdint>
#include <optional>
#include <vector>

#include "cycloproj/fn_solver.hpp"

namespace cycloproj {

// sin^2(pi / (2n))
double sin2_half_angle(int n);

double f2_closed(double c);
// 4c^2 on [0, 1/4], c on [1/4, 1]
double f3_closed(double c);
// (n-1)^{n-1} c^{n-1}; only valid (and only accepted) for 0 <= c <= 1/(n-1)^2.
double fn_small_c(int n, double c);
// Any closed form known at (n, c): n <= 3, the small-c range, or c = 1.
std::optional<double> f_closed(int n, double c);

double ub_ours(int n, double c);
double ub_bgm(int n, double c);
double ub_bs(int n, double c);
// 1 / sqrt(1 + 4(n-1) sin^2(pi/(2n)) (1-c)), between ub_ours and ub_quadratic
double ub_inverse_sqrt(int n, double c);

// a_n = 2(n-1) sin^2(pi/(2n)),  b_n = 6(n-1)^2 sin^4(pi/(2n))
double a_coefficient(int n);
double b_coefficient(int n);
double ub_quadratic(int n, double c);
double lb_quadratic_template(int n, double c, double b_tilde);

// Upper bound for f_n(c) used as a convergence rate: exact for n <= 3,
// ub_ours otherwise.
double rate_bound(int n, double c);

// Laplacian of the path 1 - 2 - ... - n.
SymmetricMatrix path_laplacian(int n);

struct FiedlerPair {
  double value;
  std::vector<double> vector;  // unit norm, orthogonal to (1,...,1), first component >= 0
};
FiedlerPair fiedler(int n);

// n / (4 sin^2(pi/(2n)))
double dn_constant(int n);

struct InequalitySides {
  double lhs;
  double rhs;
};
// lhs = sum_{i<j} (a_i - a_j)^2, rhs = D_n sum (a_i - a_{i+1})^2
InequalitySides check_difference_inequality(const std::vector<double>& a);
// Same with ||v_i - v_j||^2 for vectors of a Hilbert space.
InequalitySides check_difference_inequality(const std::vector<CVector>& v);

struct LowerBoundProbe {
  int n = 2;
  double tau = 0.0;
  std::vector<double> alphas;
  double d = 0.0;               // sum_{i<j} sin^2((alpha_i - alpha_j) tau)
  double c_of_tau = 1.0;
  double product_norm = 1.0;    // prod |cos((alpha_{k+1} - alpha_k) tau)|
  double system_dixmier = 1.0;  // measured on the explicit lines in C^2
  double system_product_norm = 1.0;
  // Expansion coefficients of d and the product: s1 = sum_{i<j} (alpha_i - alpha_j)^2,
  // s2 = sum (alpha_i - alpha_{i+1})^2.
  double s1 = 0.0;
  double s2 = 0.0;
};

// Lines L(alpha_k tau) in C^2 with alpha the Fiedler vector of the path.
// Throws PreconditionError if 4 d(tau) > n^2 and NumericalError if the
// closed-form values disagree with the explicit system by more than 1e-9.
LowerBoundProbe lower_bound_probe(int n, double tau);

// End of the initial interval on which d(tau) increases (so c(tau) decreases).
double probe_tau_max(int n);

// Value of the construction at the largest tau with c(tau) <= c, found by
// bisection; 0 when c lies below the construction's range.
double lb_construction(int n, double c);

struct EnvelopeFit {
  double slope;      // fitted -(d product / d (1-c)) at c -> 1
  double curvature;  // fitted b_tilde
  std::size_t points;
};
// Least-squares fit of product = 1 - slope u - curvature u^2, u = 1 - c(tau),
// over probes with u log-spaced in [u_lo, u_hi].
EnvelopeFit fit_lower_bound_envelope(int n, double u_lo = 1e-4, double u_hi = 1e-2, std::size_t points = 20);

struct BoundRow {
  int n = 2;
  double c = 0.0;
  std::optional<double> f_closed;
  std::optional<double> f_solver;
  double lb_construction = 0.0;
  double ub_ours = 0.0;
  double ub_bgm = 0.0;
  double ub_bs = 0.0;
  double ub_quadratic = 0.0;
  double lb_quadratic_template = 0.0;  // with the empirically fitted b_tilde
};

struct TableOptions {
  bool with_solver = false;
  std::size_t starts = 0;  // 0 selects default_starts(n)
  std::uint64_t seed = 42;
  SolverOptions solver{};
};

// One row per grid value; solver runs use seed + grid index.
std::vector<BoundRow> bounds_table(int n, const std::vector<double>& c_grid, const TableOptions& opts = {});

}  // namespace cycloproj
