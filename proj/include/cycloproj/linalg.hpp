#pragma once

#include <vector>

#include "cycloproj/matrix.hpp"

namespace cycloproj {

// Shared tolerances.
inline constexpr double kEigTol = 1e-10;
inline constexpr double kFeasTol = 1e-8;
inline constexpr double kCertTol = 1e-6;

// A = V diag(eigenvalues) V*, eigenvalues ascending, eigenvectors stored as
// the columns of V. Each eigenvector has its first nonzero component real
// and positive.
template <class T>
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  Matrix<T> eigenvectors;

  Matrix<T> reconstruct() const;
  // V diag(f(lambda)) V*
  template <class F>
  Hermitian<T> apply(F&& f) const {
    const std::size_t n = eigenvalues.size();
    Matrix<T> scaled = eigenvectors;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= f(eigenvalues[j]);
    return Hermitian<T>(scaled * eigenvectors.adjoint());
  }
};

struct JacobiOptions {
  double off_tol = 1e-13;  // relative to max(1, ||A||_F)
  int max_sweeps = 100;
};

// Cyclic Jacobi. Throws NumericalError carrying the remaining off-diagonal
// norm when the sweep cap is hit.
SpectralDecomposition<cplx> eig_hermitian(const HermitianMatrix& a, const JacobiOptions& opts = {});
SpectralDecomposition<double> eig_hermitian(const SymmetricMatrix& a, const JacobiOptions& opts = {});

// Eigenvalues only (same algorithm, skips accumulating V).
std::vector<double> eigenvalues(const HermitianMatrix& a);
std::vector<double> eigenvalues(const SymmetricMatrix& a);

// Largest singular value.
double operator_norm(const ComplexMatrix& a);
double operator_norm(const RealMatrix& a);
// max |lambda|
double operator_norm(const HermitianMatrix& a);
double operator_norm(const SymmetricMatrix& a);

// max(0, -lambda_min)
double psd_distance(const HermitianMatrix& a);
double psd_distance(const SymmetricMatrix& a);

// Frobenius-nearest matrix with spectrum inside [lo, hi].
HermitianMatrix spectral_clip(const HermitianMatrix& a, double lo, double hi);
SymmetricMatrix spectral_clip(const SymmetricMatrix& a, double lo, double hi);

// Unit vectors v_1..v_n (columns of the result) with <v_j, v_i> = a_ij.
// Built from the Hermitian square root of A, then columns renormalized.
ComplexMatrix gram_factor(const HermitianMatrix& a);

// G(i,j) = <v_j, v_i> for the columns v of `vectors`.
HermitianMatrix gram_matrix(const ComplexMatrix& vectors);

}  // namespace cycloproj
