#include "cycloproj/subspaces.hpp"

#include <algorithm>
#include <string>

namespace cycloproj {
namespace {

constexpr double kRankTol = 1e-12;
constexpr double kIntersectionCut = 1e-8;

double norm2(const CVector& v) { return std::sqrt(std::max(0.0, kern::dot(v, v).real())); }

// Removes from v its components along the (orthonormal) basis.
void orthogonalize(CVector& v, const std::vector<CVector>& basis) {
  for (const CVector& q : basis) {
    const cplx coeff = kern::dot(std::span<const cplx>(q), std::span<const cplx>(v));
    kern::axpy(-coeff, q, v);
  }
}

std::vector<CVector> orthonormalize(std::size_t d, const std::vector<CVector>& vectors) {
  std::vector<CVector> basis;
  for (const CVector& raw : vectors) {
    if (raw.size() != d) {
      throw PreconditionError("spanning vector has length " + std::to_string(raw.size()) +
                              ", expected " + std::to_string(d));
    }
    for (const cplx& x : raw)
      if (!finite_of(x)) throw PreconditionError("spanning vector entries must be finite");
    const double scale = norm2(raw);
    if (scale == 0.0) continue;
    CVector v = raw;
    orthogonalize(v, basis);
    orthogonalize(v, basis);
    const double r = norm2(v);
    if (r < kRankTol * std::max(1.0, scale)) continue;
    for (cplx& x : v) x /= r;
    basis.push_back(std::move(v));
  }
  return basis;
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<CVector>& vectors) {
  if (ambient_dim == 0) throw PreconditionError("ambient dimension must be positive");
  return Subspace(ambient_dim, orthonormalize(ambient_dim, vectors));
}

Subspace Subspace::span_real(std::size_t ambient_dim, const std::vector<std::vector<double>>& vectors) {
  std::vector<CVector> cv;
  cv.reserve(vectors.size());
  for (const auto& v : vectors) cv.emplace_back(v.begin(), v.end());
  return span(ambient_dim, cv);
}

Subspace Subspace::whole(std::size_t ambient_dim) {
  std::vector<CVector> e(ambient_dim, CVector(ambient_dim));
  for (std::size_t i = 0; i < ambient_dim; ++i) e[i][i] = 1.0;
  return span(ambient_dim, e);
}

Subspace Subspace::transformed(const ComplexMatrix& u) const {
  if (u.rows() != ambient_dim_ || u.cols() != ambient_dim_) {
    throw PreconditionError("transform must be a square matrix of the ambient dimension");
  }
  std::vector<CVector> images;
  images.reserve(basis_.size());
  for (const CVector& v : basis_) images.push_back(u * std::span<const cplx>(v));
  return span(ambient_dim_, images);
}

SubspaceSystem::SubspaceSystem(std::size_t ambient_dim, std::vector<Subspace> subspaces)
    : ambient_dim_(ambient_dim), subspaces_(std::move(subspaces)) {
  if (subspaces_.size() < 2) throw PreconditionError("a subspace system needs at least two subspaces");
  for (const Subspace& s : subspaces_) {
    if (s.ambient_dim() != ambient_dim_) throw PreconditionError("subspaces must share the ambient dimension");
  }
}

HermitianMatrix projector(const Subspace& s) {
  const std::size_t d = s.ambient_dim();
  ComplexMatrix p(d, d);
  for (const CVector& q : s.basis()) {
    for (std::size_t i = 0; i < d; ++i) {
      // row i += q_i * conj(q)
      const cplx qi = q[i];
      if (qi == cplx(0.0)) continue;
      for (std::size_t j = 0; j < d; ++j) p(i, j) += qi * std::conj(q[j]);
    }
  }
  return HermitianMatrix(p);
}

std::vector<HermitianMatrix> projectors(const SubspaceSystem& sys) {
  std::vector<HermitianMatrix> out;
  out.reserve(sys.size());
  for (const Subspace& s : sys.subspaces()) out.push_back(projector(s));
  return out;
}

HermitianMatrix projector_sum(const SubspaceSystem& sys) {
  ComplexMatrix sum(sys.ambient_dim(), sys.ambient_dim());
  for (const Subspace& s : sys.subspaces()) sum += projector(s).matrix();
  return HermitianMatrix(sum);
}

HermitianMatrix intersection_projector(const SubspaceSystem& sys) {
  const double n = static_cast<double>(sys.size());
  const auto sd = eig_hermitian(projector_sum(sys));
  const std::size_t d = sys.ambient_dim();
  std::vector<CVector> top;
  for (std::size_t k = 0; k < d; ++k) {
    if (sd.eigenvalues[k] >= n - kIntersectionCut) top.push_back(sd.eigenvectors.column(k));
  }
  return projector(Subspace::span(d, top));
}

double dixmier_number(const SubspaceSystem& sys) {
  const double n = static_cast<double>(sys.size());
  return clamp_unit((operator_norm(projector_sum(sys)) - 1.0) / (n - 1.0));
}

double friedrichs_number(const SubspaceSystem& sys) {
  const double n = static_cast<double>(sys.size());
  ComplexMatrix m = projector_sum(sys).matrix();
  m -= intersection_projector(sys).matrix() * cplx(n);
  return clamp_unit((operator_norm(HermitianMatrix(m)) - 1.0) / (n - 1.0));
}

AngleReport angles(const SubspaceSystem& sys) {
  AngleReport r;
  r.dixmier = dixmier_number(sys);
  r.friedrichs = friedrichs_number(sys);
  const HermitianMatrix p0 = intersection_projector(sys);
  double trace = 0.0;
  for (std::size_t i = 0; i < p0.dim(); ++i) trace += p0(i, i).real();
  r.intersection_dim = static_cast<std::size_t>(std::llround(trace));
  return r;
}

double dixmier_number_by_definition(const SubspaceSystem& sys) {
  // Stack all basis vectors: x = (x_1, ..., x_n) with x_i = Q_i y_i, so the
  // quotient sum_{i,j} <x_j, x_i> / sum ||x_i||^2 = y* G y / y* y with
  // G = S*S the Gram matrix of all basis vectors.
  std::vector<const CVector*> cols;
  for (const Subspace& s : sys.subspaces())
    for (const CVector& q : s.basis()) cols.push_back(&q);
  const std::size_t k = cols.size();
  if (k == 0) return 0.0;

  ComplexMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) g(i, j) = kern::dot(std::span<const cplx>(*cols[i]), *cols[j]);

  // Power iteration on the PSD matrix G; the Rayleigh quotient converges to
  // lambda_max from below.
  CVector y(k);
  for (std::size_t i = 0; i < k; ++i) y[i] = cplx(1.0 + 0.01 * static_cast<double>(i % 7), 0.003 * static_cast<double>(i % 5));
  auto normalize = [](CVector& v) {
    const double r = norm2(v);
    for (cplx& x : v) x /= r;
  };
  normalize(y);
  double rho = 0.0;
  int stable = 0;
  for (int it = 0; it < 200000 && stable < 20; ++it) {
    CVector z = g * std::span<const cplx>(y);
    const double next = kern::dot(std::span<const cplx>(y), std::span<const cplx>(z)).real();
    const double zn = norm2(z);
    if (zn == 0.0) return 0.0;
    for (cplx& x : z) x /= zn;
    y = std::move(z);
    stable = std::abs(next - rho) <= 1e-15 * std::max(1.0, next) ? stable + 1 : 0;
    rho = next;
  }
  const double n = static_cast<double>(sys.size());
  return clamp_unit((rho - 1.0) / (n - 1.0));
}

SubspaceSystem remove_intersection(const SubspaceSystem& sys) {
  const ComplexMatrix p0 = intersection_projector(sys).matrix();
  const std::size_t d = sys.ambient_dim();
  std::vector<Subspace> reduced;
  reduced.reserve(sys.size());
  for (const Subspace& s : sys.subspaces()) {
    // P_i - P_0 is the projector onto H_i ⊖ H_0; its range is its eigenvalue-1 eigenspace.
    const auto sd = eig_hermitian(HermitianMatrix(projector(s).matrix() - p0));
    std::vector<CVector> range;
    for (std::size_t k = 0; k < d; ++k)
      if (sd.eigenvalues[k] > 0.5) range.push_back(sd.eigenvectors.column(k));
    reduced.push_back(Subspace::span(d, range));
  }
  return SubspaceSystem(d, std::move(reduced));
}

}  // namespace cycloproj
