#include "cycloproj/map_sim.hpp"

#include <sstream>

#include "cycloproj/bounds.hpp"

namespace cycloproj {
namespace {

// x <- Q Q* x for the orthonormal basis Q of s.
void project_in_place(const Subspace& s, CVector& x) {
  CVector out(x.size());
  for (const CVector& q : s.basis()) {
    const cplx coeff = kern::dot(std::span<const cplx>(q), std::span<const cplx>(x));
    kern::axpy(coeff, q, out);
  }
  x = std::move(out);
}

double distance(const CVector& a, const CVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

MapTrace run_map(const SubspaceSystem& sys, const CVector& x0, std::size_t sweeps, const ProjectionHook& hook) {
  if (x0.size() != sys.ambient_dim()) {
    throw PreconditionError("start vector has length " + std::to_string(x0.size()) +
                            " but the ambient dimension is " + std::to_string(sys.ambient_dim()));
  }
  if (sweeps < 1) throw PreconditionError("run_map needs at least one sweep");

  const CVector limit = intersection_projector(sys).matrix() * std::span<const cplx>(x0);

  MapTrace trace;
  trace.sweeps = sweeps;
  trace.iterates.reserve(sweeps + 1);
  trace.iterates.push_back(x0);
  trace.errors.push_back(distance(x0, limit));

  CVector x = x0;
  for (std::size_t k = 1; k <= sweeps; ++k) {
    for (std::size_t i = 0; i < sys.size(); ++i) {
      project_in_place(sys[i], x);
      if (hook) hook(k, i, x);
    }
    const double err = distance(x, limit);
    const double prev = trace.errors.back();
    trace.contraction.push_back(prev > 0.0 ? err / prev : 0.0);
    trace.errors.push_back(err);
    trace.iterates.push_back(x);
  }
  return trace;
}

ComplexMatrix sweep_operator(const SubspaceSystem& sys) {
  ComplexMatrix prod = projector(sys[0]).matrix();
  for (std::size_t i = 1; i < sys.size(); ++i) prod = projector(sys[i]).matrix() * prod;
  return prod;
}

double product_operator_norm(const SubspaceSystem& sys) {
  return operator_norm(sweep_operator(sys) - intersection_projector(sys).matrix());
}

double product_norm(const SubspaceSystem& sys) { return operator_norm(sweep_operator(sys)); }

ComplexMatrix matrix_power(const ComplexMatrix& a, unsigned k) {
  if (!a.is_square()) throw PreconditionError("matrix_power needs a square matrix");
  ComplexMatrix out = ComplexMatrix::identity(a.rows());
  for (unsigned i = 0; i < k; ++i) out = a * out;
  return out;
}

RateCheckReport rate_check(const SubspaceSystem& sys, double c, std::size_t sweeps) {
  RateCheckReport r;
  r.measured_friedrichs = friedrichs_number(sys);
  if (r.measured_friedrichs > c + 1e-9) {
    std::ostringstream msg;
    msg << "rate_check: measured Friedrichs number " << r.measured_friedrichs << " exceeds c = " << c;
    throw PreconditionError(msg.str());
  }
  r.rate = rate_bound(static_cast<int>(sys.size()), c);
  const ComplexMatrix t = sweep_operator(sys);
  const ComplexMatrix p0 = intersection_projector(sys).matrix();
  ComplexMatrix power = t;
  double bound = 1.0;
  for (std::size_t k = 1; k <= sweeps; ++k) {
    if (k > 1) power = t * power;
    bound *= r.rate;
    const double norm = operator_norm(power - p0);
    r.norms.push_back(norm);
    r.bounds.push_back(bound);
    if (norm > bound + 1e-9) r.all_hold = false;
  }
  return r;
}

}  // namespace cycloproj
