#include "cycloproj/fn_solver.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "cycloproj/map_sim.hpp"
#include "cycloproj/rng.hpp"

namespace cycloproj {
namespace {

RealMatrix reversed(const RealMatrix& a) {
  const std::size_t n = a.rows();
  RealMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = a(n - 1 - i, n - 1 - j);
  return r;
}

// Orthogonal projection onto {symmetric, persymmetric, unit diagonal}.
RealMatrix project_affine(const RealMatrix& x) {
  const std::size_t n = x.rows();
  RealMatrix y(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t ri = n - 1 - i, rj = n - 1 - j;
      y(i, j) = 0.25 * (x(i, j) + x(j, i) + x(ri, rj) + x(rj, ri));
    }
    y(i, i) = 1.0;
  }
  return y;
}

RealMatrix project_box(const RealMatrix& x, double hi) {
  return spectral_clip(SymmetricMatrix(x), 0.0, hi).matrix();
}

// I + s (A - I) with the largest s <= 1 that puts the spectrum inside [0, hi].
RealMatrix shrink_into_box(const RealMatrix& a, double hi) {
  const std::vector<double> ev = eigenvalues(SymmetricMatrix(a));
  double s = 1.0;
  if (ev.front() < 0.0) s = std::min(s, 1.0 / (1.0 - ev.front()));
  if (ev.back() > hi) s = std::min(s, (hi - 1.0) / (ev.back() - 1.0));
  if (s == 1.0) return a;
  const std::size_t n = a.rows();
  RealMatrix out = a;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) out(i, j) *= s;
  return out;
}

// D A D with D = diag(+-1) chosen so that every superdiagonal entry is >= 0.
// Keeps symmetry, persymmetry, the diagonal and the spectrum.
RealMatrix fix_superdiagonal_signs(const RealMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> d(n, 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i + 1] = a(i, i + 1) < 0.0 ? -d[i] : d[i];
  RealMatrix out = a;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) *= d[i] * d[j];
  return out;
}

double min_superdiagonal(const RealMatrix& a) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < a.rows(); ++i) m = std::min(m, a(i, i + 1));
  return m;
}

double log_objective(const RealMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < a.rows(); ++i) s += std::log(a(i, i + 1));
  return s;
}

// Symmetric matrix with weights[i]/2 at (i,i+1) and (i+1,i): the Frobenius
// gradient of B -> sum weights[i] b_{i,i+1} over symmetric B.
RealMatrix superdiagonal_direction(const std::vector<double>& weights) {
  const std::size_t n = weights.size() + 1;
  RealMatrix g(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g(i, i + 1) = 0.5 * weights[i];
    g(i + 1, i) = 0.5 * weights[i];
  }
  return g;
}

double superdiagonal_dot(const std::vector<double>& w, const RealMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * b(i, i + 1);
  return s;
}

RealMatrix random_symmetric(std::size_t n, Rng& rng) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.uniform(-1.0, 1.0);
  return m;
}

double alternating_alpha(const FeasibleSpec& spec) {
  return std::min((spec.n - 1) * spec.c, 1.0 / (spec.n - 1));
}

// Pulls a feasible start into the region where every superdiagonal entry is
// bounded away from zero by averaging with the alternating matrix.
RealMatrix ensure_positive(const RealMatrix& a, const FeasibleSpec& spec) {
  const double alpha = alternating_alpha(spec);
  if (min_superdiagonal(a) >= 1e-3 * alpha) return a;
  RealMatrix mix = a + alternating_matrix(spec.n, alpha);
  mix *= 0.5;
  return mix;
}

std::vector<RealMatrix> initial_points(const FeasibleSpec& spec, std::size_t starts, std::uint64_t seed,
                                       const ProjectionOptions& popts) {
  const std::size_t n = static_cast<std::size_t>(spec.n);
  const double alpha = alternating_alpha(spec);
  std::vector<RealMatrix> pts;
  for (std::size_t k = 0; k < starts; ++k) {
    Rng rng(derive_seed(seed, k));
    RealMatrix p = RealMatrix::identity(n);
    switch (k) {
      case 0: {
        // identity, perturbed
        RealMatrix noise = random_symmetric(n, rng);
        noise *= 0.1 * alpha;
        p = project_feasible(RealMatrix::identity(n) + noise, spec, popts).matrix();
        break;
      }
      case 1:
        p = alternating_matrix(spec.n, alpha);
        break;
      case 2: {
        // tridiagonal with a corner entry, the optimal shape for n = 3
        RealMatrix pattern = RealMatrix::identity(n);
        const double x = std::sqrt(spec.c);
        for (std::size_t i = 0; i + 1 < n; ++i) pattern(i, i + 1) = pattern(i + 1, i) = x;
        pattern(0, n - 1) = pattern(n - 1, 0) = 2.0 * spec.c - 1.0;
        if (n == 2) pattern(0, 1) = pattern(1, 0) = x;
        p = project_feasible(pattern, spec, popts).matrix();
        break;
      }
      default: {
        RealMatrix noise = random_symmetric(n, rng);
        p = project_feasible(RealMatrix::identity(n) + noise, spec, popts).matrix();
        break;
      }
    }
    pts.push_back(ensure_positive(p, spec));
  }
  return pts;
}

struct AscentResult {
  RealMatrix a;
  double phi;
  std::size_t steps;
};

AscentResult ascend(RealMatrix a, const FeasibleSpec& spec, const SolverOptions& opts) {
  double phi = log_objective(a);
  double step = opts.initial_step;
  std::size_t it = 0;
  for (; it < opts.max_steps; ++it) {
    std::vector<double> w(a.rows() - 1);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / a(i, i + 1);
    const RealMatrix g = superdiagonal_direction(w);

    double s = step;
    bool accepted = false;
    RealMatrix next = a;
    double next_phi = phi;
    for (int tries = 0; tries < 60; ++tries, s *= opts.shrink) {
      RealMatrix trial = a;
      kern::axpy(s, g.data(), trial.data());
      RealMatrix cand = project_feasible(trial, spec, opts.projection).matrix();
      if (min_superdiagonal(cand) <= 0.0) continue;
      const double cand_phi = log_objective(cand);
      RealMatrix diff = cand - a;
      if (cand_phi >= phi + opts.armijo * frobenius_inner(g, diff)) {
        next = std::move(cand);
        next_phi = cand_phi;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    const double delta = next_phi - phi;
    a = std::move(next);
    phi = next_phi;
    step = std::min(2.0 * s, 1e3);
    if (std::abs(delta) < opts.phi_tol) {
      ++it;
      break;
    }
  }
  return {std::move(a), phi, it};
}

}  // namespace

FeasibleSpec FeasibleSpec::make(int n, double c) {
  if (n < 2) throw PreconditionError("n must be at least 2");
  if (!(c >= 0.0 && c <= 1.0)) throw PreconditionError("c must lie in [0, 1]");
  return FeasibleSpec{n, c, 1.0 + (n - 1) * c};
}

double superdiagonal_product(const RealMatrix& a) {
  double p = 1.0;
  for (std::size_t i = 0; i + 1 < a.rows(); ++i) p *= a(i, i + 1);
  return std::abs(p);
}

double superdiagonal_product(const ComplexMatrix& a) {
  double p = 1.0;
  for (std::size_t i = 0; i + 1 < a.rows(); ++i) p *= std::abs(a(i, i + 1));
  return p;
}

double feasibility_violation(const HermitianMatrix& a, const FeasibleSpec& spec) {
  if (a.dim() != static_cast<std::size_t>(spec.n)) throw PreconditionError("matrix size does not match n");
  double v = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) v = std::max(v, std::abs(a(i, i).real() - 1.0));
  const std::vector<double> ev = eigenvalues(a);
  v = std::max(v, -ev.front());
  v = std::max(v, ev.back() - spec.t);
  return v;
}

double feasibility_violation(const RealMatrix& a, const FeasibleSpec& spec) {
  return feasibility_violation(HermitianMatrix(to_complex(a)), spec);
}

FeasiblePoint FeasiblePoint::validated(RealMatrix a, const FeasibleSpec& spec) {
  const std::size_t n = static_cast<std::size_t>(spec.n);
  if (a.rows() != n || a.cols() != n) throw PreconditionError("feasible point must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(a(i, i) - 1.0) > 1e-9) throw PreconditionError("feasible point: diagonal entry differs from 1");
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > 1e-12) throw PreconditionError("feasible point: not symmetric");
      if (std::abs(a(i, j) - a(n - 1 - i, n - 1 - j)) > 1e-9) throw PreconditionError("feasible point: not persymmetric");
    }
  }
  if (min_superdiagonal(a) < 0.0) throw PreconditionError("feasible point: negative superdiagonal entry");
  const std::vector<double> ev = eigenvalues(SymmetricMatrix(a));
  if (ev.front() < -kFeasTol) throw PreconditionError("feasible point: not positive semidefinite");
  if (ev.back() > spec.t + kFeasTol) throw PreconditionError("feasible point: largest eigenvalue exceeds t");
  return FeasiblePoint(std::move(a));
}

FeasiblePoint canonicalize(const HermitianMatrix& a, const FeasibleSpec& spec) {
  const std::size_t n = static_cast<std::size_t>(spec.n);
  if (a.dim() != n) throw PreconditionError("canonicalize: matrix size does not match n");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(a(i, i).real() - 1.0) > kFeasTol) {
      throw PreconditionError("canonicalize: diagonal constraint a_ii = 1 violated");
    }
  }
  const std::vector<double> ev = eigenvalues(a);
  if (ev.front() < -kFeasTol) {
    throw PreconditionError("canonicalize: constraint A >= 0 violated (lambda_min = " + std::to_string(ev.front()) + ")");
  }
  if (ev.back() > spec.t + kFeasTol) {
    throw PreconditionError("canonicalize: constraint A <= tI violated (lambda_max = " + std::to_string(ev.back()) + ")");
  }

  // B = U* A U with b_{i,i+1} = |a_{i,i+1}|
  std::vector<cplx> u(n, 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const cplx h = a(i, i + 1);
    const double mag = std::abs(h);
    u[i + 1] = mag > 0.0 ? u[i] * std::conj(h) / mag : u[i];
  }
  // C = Re(B), then D = (C + reversed(C)) / 2
  RealMatrix c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i, j) = (std::conj(u[i]) * a(i, j) * u[j]).real();
  for (std::size_t i = 0; i + 1 < n; ++i) c(i, i + 1) = c(i + 1, i) = std::abs(a(i, i + 1));
  RealMatrix d = c + reversed(c);
  d *= 0.5;
  for (std::size_t i = 0; i < n; ++i) d(i, i) = 1.0;
  return FeasiblePoint::assume(std::move(d));
}

FeasiblePoint project_feasible(const RealMatrix& a, const FeasibleSpec& spec, const ProjectionOptions& opts) {
  const std::size_t n = static_cast<std::size_t>(spec.n);
  if (a.rows() != n || a.cols() != n) throw PreconditionError("project_feasible: matrix size does not match n");
  for (double v : a.data())
    if (!std::isfinite(v)) throw PreconditionError("project_feasible: non-finite entry");
  if (spec.t <= 1.0) return FeasiblePoint::assume(RealMatrix::identity(n));

  const double hi = spec.t * opts.upper_scale;
  RealMatrix x = a;
  RealMatrix p(n, n), q(n, n);
  double residual = std::numeric_limits<double>::infinity();
  for (int round = 0; round < opts.max_rounds; ++round) {
    RealMatrix y = project_affine(x + p);
    p = (x + p) - y;
    RealMatrix z = project_box(y + q, hi);
    q = (y + q) - z;
    residual = frobenius_norm(z - x);
    x = std::move(z);
    if (residual < opts.tol) break;
  }
  if (residual >= opts.tol && residual > opts.accept_residual) {
    std::ostringstream msg;
    msg << "project_feasible: Dykstra stopped after " << opts.max_rounds << " rounds with residual " << residual;
    throw NumericalError(msg.str(), residual);
  }
  RealMatrix out = shrink_into_box(project_affine(x), hi);
  return FeasiblePoint::assume(fix_superdiagonal_signs(out));
}

RealMatrix alternating_matrix(int n, double alpha) {
  const std::size_t m = static_cast<std::size_t>(n);
  RealMatrix a = RealMatrix::identity(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) a(i, j) = ((i + j) % 2 == 1) ? alpha : -alpha;
  return a;
}

std::size_t default_starts(int n) { return std::max<std::size_t>(8, 2 * static_cast<std::size_t>(n)); }

double certify_optimal(const FeasiblePoint& a, const FeasibleSpec& spec, const ProjectionOptions& opts) {
  const std::size_t n = a.dim();
  std::vector<double> w(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(a(i, i + 1) > 1e-10)) throw PreconditionError("certify_optimal: superdiagonal entries must be > 1e-10");
    w[i] = 1.0 / a(i, i + 1);
  }
  const RealMatrix dir = superdiagonal_direction(w);
  const double dir_norm = frobenius_norm(dir);

  std::vector<RealMatrix> starts;
  starts.push_back(a.matrix());
  starts.push_back(RealMatrix::identity(n));
  starts.push_back(alternating_matrix(spec.n, alternating_alpha(spec)));
  Rng rng(0xC0FFEEULL + n);
  while (starts.size() < 8) {
    starts.push_back(project_feasible(RealMatrix::identity(n) + random_symmetric(n, rng), spec, opts).matrix());
  }

  double best = -std::numeric_limits<double>::infinity();
  for (RealMatrix b : starts) {
    double value = superdiagonal_dot(w, b);
    double s = 0.25 / dir_norm;
    for (int it = 0; it < 400; ++it) {
      RealMatrix trial = b;
      kern::axpy(s, dir.data(), trial.data());
      RealMatrix next = project_feasible(trial, spec, opts).matrix();
      const double next_value = superdiagonal_dot(w, next);
      const bool stalled = next_value <= value + 1e-13 * std::max(1.0, std::abs(value));
      if (next_value > value) {
        b = std::move(next);
        value = next_value;
      }
      if (stalled) break;
      s = std::min(2.0 * s, 16.0 / dir_norm);
    }
    best = std::max(best, value);
  }
  return best;
}

Witness subspace_witness(const FeasiblePoint& a, const FeasibleSpec& spec) {
  const std::size_t n = a.dim();
  if (n != static_cast<std::size_t>(spec.n)) throw PreconditionError("subspace_witness: matrix size does not match n");
  const ComplexMatrix v = gram_factor(HermitianMatrix(to_complex(a.matrix())));
  std::vector<Subspace> lines;
  lines.reserve(n);
  for (std::size_t i = 0; i < n; ++i) lines.push_back(Subspace::span(n, {v.column(i)}));
  SubspaceSystem sys(n, std::move(lines));
  const double pn = product_norm(sys);
  const double cd = dixmier_number(sys);
  return Witness{std::move(sys), pn, cd};
}

SolveResult maximize_product(const FeasibleSpec& spec, std::size_t starts, std::uint64_t seed, const SolverOptions& opts) {
  if (starts < 1) throw PreconditionError("maximize_product needs at least one start");
  const std::size_t n = static_cast<std::size_t>(spec.n);

  SolveResult result;
  result.spec = spec;
  result.seed = seed;

  if (spec.c == 0.0) {
    result.f_estimate = 0.0;
    result.optimum = FeasiblePoint::assume(RealMatrix::identity(n));
    result.certificate_value = std::numeric_limits<double>::quiet_NaN();
    result.certificate_gap = std::numeric_limits<double>::quiet_NaN();
    if (opts.witness) {
      const Witness w = subspace_witness(result.optimum, spec);
      result.witness_product_norm = w.product_norm;
      result.witness_dixmier = w.dixmier;
    }
    return result;
  }

  const std::vector<RealMatrix> init = initial_points(spec, starts, seed, opts.projection);
  double best_phi = -std::numeric_limits<double>::infinity();
  RealMatrix best = RealMatrix::identity(n);
  for (const RealMatrix& a0 : init) {
    AscentResult r = ascend(a0, spec, opts);
    result.iterations += r.steps;
    result.start_values.push_back(superdiagonal_product(r.a));
    if (r.phi > best_phi) {
      best_phi = r.phi;
      best = std::move(r.a);
    }
  }
  result.starts_used = init.size();
  result.optimum = FeasiblePoint::assume(std::move(best));
  result.f_estimate = superdiagonal_product(result.optimum.matrix());

  if (opts.certify) {
    result.certificate_value = certify_optimal(result.optimum, spec, opts.projection);
    result.certificate_gap = result.certificate_value - (spec.n - 1);
  }
  if (opts.witness) {
    const Witness w = subspace_witness(result.optimum, spec);
    result.witness_product_norm = w.product_norm;
    result.witness_dixmier = w.dixmier;
  }
  return result;
}

}  // namespace cycloproj
