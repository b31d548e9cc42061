#pragma once

#include <cstddef>
#include <vector>

#include "cycloproj/linalg.hpp"

namespace cycloproj {

using CVector = std::vector<cplx>;

// Closed subspace of C^d stored as an orthonormal basis. The trivial
// subspace has an empty basis.
class Subspace {
 public:
  // Orthonormalizes `vectors` by modified Gram-Schmidt with one
  // re-orthogonalization pass; vectors whose residual norm drops below
  // 1e-12 are discarded as dependent.
  static Subspace span(std::size_t ambient_dim, const std::vector<CVector>& vectors);
  static Subspace span_real(std::size_t ambient_dim, const std::vector<std::vector<double>>& vectors);
  static Subspace whole(std::size_t ambient_dim);

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  const std::vector<CVector>& basis() const noexcept { return basis_; }

  // Applies a unitary (or any d x d matrix) to every basis vector and re-orthonormalizes.
  Subspace transformed(const ComplexMatrix& u) const;

 private:
  Subspace(std::size_t d, std::vector<CVector> basis) : ambient_dim_(d), basis_(std::move(basis)) {}

  std::size_t ambient_dim_;
  std::vector<CVector> basis_;
};

class SubspaceSystem {
 public:
  // Requires at least two subspaces sharing one ambient dimension.
  SubspaceSystem(std::size_t ambient_dim, std::vector<Subspace> subspaces);

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t size() const noexcept { return subspaces_.size(); }
  const Subspace& operator[](std::size_t i) const { return subspaces_[i]; }
  const std::vector<Subspace>& subspaces() const noexcept { return subspaces_; }

 private:
  std::size_t ambient_dim_;
  std::vector<Subspace> subspaces_;
};

struct AngleReport {
  double dixmier = 0.0;
  double friedrichs = 0.0;
  std::size_t intersection_dim = 0;
};

// basis * basis^*
HermitianMatrix projector(const Subspace& s);
std::vector<HermitianMatrix> projectors(const SubspaceSystem& sys);

// P_1 + ... + P_n
HermitianMatrix projector_sum(const SubspaceSystem& sys);

// Projector onto the eigenspace of sum P_i with eigenvalues >= n - 1e-8,
// which is H_1 ∩ ... ∩ H_n.
HermitianMatrix intersection_projector(const SubspaceSystem& sys);

// (||sum P_i|| - 1) / (n - 1), clamped to [0, 1].
double dixmier_number(const SubspaceSystem& sys);

// (||sum P_i - n P_0|| - 1) / (n - 1), clamped to [0, 1].
double friedrichs_number(const SubspaceSystem& sys);

AngleReport angles(const SubspaceSystem& sys);

// Sup of (1/(n-1)) sum_{i != j} <x_i, x_j> / sum ||x_i||^2 over x_i in H_i,
// evaluated as the top Rayleigh quotient of the block Gram matrix S*S by
// power iteration. Does not form sum P_i.
double dixmier_number_by_definition(const SubspaceSystem& sys);

// The system H_i ⊖ H_0 living in the same ambient space.
SubspaceSystem remove_intersection(const SubspaceSystem& sys);

}  // namespace cycloproj
