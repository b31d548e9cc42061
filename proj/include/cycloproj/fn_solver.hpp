#pragma once

// Numerical solution of  f_n(c) = max |a_12 a_23 ... a_{n-1,n}|  over real,
// persymmetric, unit-diagonal matrices A with 0 <= A <= (1 + (n-1)c) I and a
// nonnegative superdiagonal, together with an optimality certificate and a
// system of lines realizing the value.

#include <cstdint>
#include <vector>

#include "cycloproj/subspaces.hpp"

namespace cycloproj {

struct FeasibleSpec {
  int n = 2;
  double c = 0.0;
  double t = 1.0;  // 1 + (n - 1) c

  // Validates n >= 2 and c in [0, 1].
  static FeasibleSpec make(int n, double c);
};

// Real symmetric, persymmetric, unit diagonal, spectrum in [0, t] (within
// 1e-8), nonnegative superdiagonal.
class FeasiblePoint {
 public:
  // Checks every invariant against `spec`; throws PreconditionError naming
  // the first violated one.
  static FeasiblePoint validated(RealMatrix a, const FeasibleSpec& spec);
  // Caller guarantees the invariants (used by the solver internals).
  static FeasiblePoint assume(RealMatrix a) { return FeasiblePoint(std::move(a)); }

  const RealMatrix& matrix() const noexcept { return a_; }
  std::size_t dim() const noexcept { return a_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return a_(i, j); }

 private:
  explicit FeasiblePoint(RealMatrix a) : a_(std::move(a)) {}
  RealMatrix a_;
};

// |a_12 a_23 ... a_{n-1,n}|
double superdiagonal_product(const RealMatrix& a);
double superdiagonal_product(const ComplexMatrix& a);

// Largest violation of the unit-diagonal and spectral-box constraints of H_n(t).
double feasibility_violation(const HermitianMatrix& a, const FeasibleSpec& spec);
double feasibility_violation(const RealMatrix& a, const FeasibleSpec& spec);

struct ProjectionOptions {
  double tol = 1e-10;          // Frobenius change between successive iterates
  int max_rounds = 10000;
  double accept_residual = 1e-6;
  // Multiplies the spectral upper bound. Anything but 1 breaks feasibility;
  // exists only for fault-injection runs of the verifier.
  double upper_scale = 1.0;
};

// Diagonal-unitary phase alignment, real-part and reversal averaging.
// Requires a in H_n(t) within 1e-8.
FeasiblePoint canonicalize(const HermitianMatrix& a, const FeasibleSpec& spec);

// Dykstra's alternating projections between the affine set {symmetric,
// persymmetric, unit diagonal} and the spectral box [0, t], followed by a
// shrink toward I that removes the residual infeasibility and a diagonal
// sign change that makes the superdiagonal nonnegative.
FeasiblePoint project_feasible(const RealMatrix& a, const FeasibleSpec& spec, const ProjectionOptions& opts = {});

struct SolverOptions {
  std::size_t max_steps = 5000;
  double phi_tol = 1e-10;
  double armijo = 1e-4;
  double shrink = 0.5;
  double initial_step = 0.1;
  ProjectionOptions projection{};
  bool certify = true;
  bool witness = true;
};

struct SolveResult {
  FeasibleSpec spec;
  double f_estimate = 0.0;
  FeasiblePoint optimum = FeasiblePoint::assume(RealMatrix::identity(2));
  double certificate_value = 0.0;  // NaN when the certificate is undefined (c = 0)
  double certificate_gap = 0.0;    // certificate_value - (n - 1)
  double witness_product_norm = 0.0;
  double witness_dixmier = 0.0;
  std::size_t starts_used = 0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::vector<double> start_values;  // Pi at the end of each start

  bool certified() const { return certificate_gap <= kCertTol; }
};

// max(8, 2n)
std::size_t default_starts(int n);

SolveResult maximize_product(const FeasibleSpec& spec, std::size_t starts, std::uint64_t seed,
                             const SolverOptions& opts = {});

// Maximum found of B -> sum b_{i,i+1} / a_{i,i+1} over H_n(t) with b_{i,i+1} >= 0.
// A is certified optimal when the value is <= n - 1 + 1e-6.
double certify_optimal(const FeasiblePoint& a, const FeasibleSpec& spec, const ProjectionOptions& opts = {});

struct Witness {
  SubspaceSystem system;
  double product_norm;  // ||P_n ... P_1||
  double dixmier;
};

// Lines spanned by the Gram vectors of A.
Witness subspace_witness(const FeasiblePoint& a, const FeasibleSpec& spec);

// I + alpha U (I - J) U with U = diag(-1, 1, -1, ...), alpha = min((n-1)c, 1/(n-1)):
// entries (-1)^{i+j+1} alpha off the diagonal.
RealMatrix alternating_matrix(int n, double alpha);

}  // namespace cycloproj
