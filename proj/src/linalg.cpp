#include "cycloproj/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>

namespace cycloproj {
namespace {

inline double sign_or_one(double x) { return x < 0.0 ? -1.0 : 1.0; }
inline double unit_phase(double h) { return sign_or_one(h); }
inline cplx unit_phase(cplx h) { return h / std::abs(h); }

// Rows of `vt` are the eigenvectors (columns of V).
template <class T>
struct JacobiResult {
  std::vector<double> diag;
  std::optional<Matrix<T>> vt;
};

template <class T>
double off_diagonal_norm(const Matrix<T>& a) {
  double s = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

template <class T>
JacobiResult<T> jacobi(const Hermitian<T>& input, bool want_vectors, const JacobiOptions& opts) {
  Matrix<T> a = input.matrix();
  const std::size_t n = a.rows();
  std::optional<Matrix<T>> vt;
  if (want_vectors) vt = Matrix<T>::identity(n);

  const double threshold = opts.off_tol * std::max(1.0, frobenius_norm(a));
  double off = off_diagonal_norm(a);
  int sweep = 0;
  while (off > threshold) {
    if (sweep == opts.max_sweeps) {
      std::ostringstream msg;
      msg << "Jacobi eigensolver did not converge in " << opts.max_sweeps
          << " sweeps (off-diagonal norm " << off << ")";
      throw NumericalError(msg.str(), off);
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const T h = a(p, q);
        const double mag = std::abs(h);
        if (mag == 0.0) continue;
        const double app = real_of(a(p, p));
        const double aqq = real_of(a(q, q));
        const T ph = unit_phase(h);
        const double zeta = (aqq - app) / (2.0 * mag);
        const double t = sign_or_one(zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // rows p,q <- J* rows p,q
        kern::rot(a.row(p), a.row(q), T(c), T(-s) * ph, T(s), T(c) * ph);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          a(k, p) = conj_of(a(p, k));
          a(k, q) = conj_of(a(q, k));
        }
        a(p, p) = T(app - t * mag);
        a(q, q) = T(aqq + t * mag);
        a(p, q) = T(0);
        a(q, p) = T(0);

        if (vt) {
          const T cph = conj_of(ph);
          kern::rot(vt->row(p), vt->row(q), T(c), T(-s) * cph, T(s), T(c) * cph);
        }
      }
    }
    ++sweep;
    off = off_diagonal_norm(a);
  }

  JacobiResult<T> out;
  out.diag.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.diag[i] = real_of(a(i, i));
  out.vt = std::move(vt);
  return out;
}

template <class T>
SpectralDecomposition<T> decompose(const Hermitian<T>& a, const JacobiOptions& opts) {
  JacobiResult<T> r = jacobi(a, true, opts);
  const std::size_t n = a.dim();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return r.diag[i] < r.diag[j]; });

  SpectralDecomposition<T> out{std::vector<double>(n), Matrix<T>(n, n)};
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.eigenvalues[col] = r.diag[src];
    auto v = r.vt->row(src);
    T phase(1);
    for (const T& x : v) {
      if (std::abs(x) > 1e-10) {
        phase = conj_of(x) / std::abs(x);
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, col) = v[i] * phase;
  }
  return out;
}

template <class T>
std::vector<double> sorted_eigenvalues(const Hermitian<T>& a) {
  std::vector<double> d = jacobi(a, false, {}).diag;
  std::sort(d.begin(), d.end());
  return d;
}

template <class T>
double singular_norm(const Matrix<T>& a) {
  // The smaller of A*A and AA* has the same nonzero spectrum.
  const Matrix<T> adj = a.adjoint();
  const Matrix<T> g = a.rows() >= a.cols() ? adj * a : a * adj;
  const std::vector<double> ev = sorted_eigenvalues(Hermitian<T>(g));
  return std::sqrt(std::max(0.0, ev.back()));
}

template <class T>
double hermitian_norm(const Hermitian<T>& a) {
  const std::vector<double> ev = sorted_eigenvalues(a);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

template <class T>
double psd_gap(const Hermitian<T>& a) {
  return std::max(0.0, -sorted_eigenvalues(a).front());
}

template <class T>
Hermitian<T> clip(const Hermitian<T>& a, double lo, double hi) {
  if (!(lo <= hi)) throw PreconditionError("spectral_clip requires lo <= hi");
  const SpectralDecomposition<T> sd = decompose(a, {});
  if (sd.eigenvalues.front() >= lo && sd.eigenvalues.back() <= hi) return a;
  return sd.apply([&](double l) { return std::clamp(l, lo, hi); });
}

}  // namespace

template <class T>
Matrix<T> SpectralDecomposition<T>::reconstruct() const {
  return apply([](double l) { return l; }).matrix();
}

template struct SpectralDecomposition<double>;
template struct SpectralDecomposition<cplx>;

SpectralDecomposition<cplx> eig_hermitian(const HermitianMatrix& a, const JacobiOptions& opts) {
  return decompose(a, opts);
}
SpectralDecomposition<double> eig_hermitian(const SymmetricMatrix& a, const JacobiOptions& opts) {
  return decompose(a, opts);
}

std::vector<double> eigenvalues(const HermitianMatrix& a) { return sorted_eigenvalues(a); }
std::vector<double> eigenvalues(const SymmetricMatrix& a) { return sorted_eigenvalues(a); }

double operator_norm(const ComplexMatrix& a) { return singular_norm(a); }
double operator_norm(const RealMatrix& a) { return singular_norm(a); }
double operator_norm(const HermitianMatrix& a) { return hermitian_norm(a); }
double operator_norm(const SymmetricMatrix& a) { return hermitian_norm(a); }

double psd_distance(const HermitianMatrix& a) { return psd_gap(a); }
double psd_distance(const SymmetricMatrix& a) { return psd_gap(a); }

HermitianMatrix spectral_clip(const HermitianMatrix& a, double lo, double hi) { return clip(a, lo, hi); }
SymmetricMatrix spectral_clip(const SymmetricMatrix& a, double lo, double hi) { return clip(a, lo, hi); }

ComplexMatrix gram_factor(const HermitianMatrix& a) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(a(i, i).real() - 1.0) > 1e-10) {
      throw PreconditionError("gram_factor requires a unit diagonal (a_" + std::to_string(i + 1) +
                              std::to_string(i + 1) + " = " + std::to_string(a(i, i).real()) + ")");
    }
  }
  const SpectralDecomposition<cplx> sd = eig_hermitian(a);
  if (sd.eigenvalues.front() < -1e-6) {
    std::ostringstream msg;
    msg << "gram_factor requires a positive semidefinite matrix (lambda_min = " << sd.eigenvalues.front() << ")";
    throw PreconditionError(msg.str());
  }
  ComplexMatrix b = sd.apply([](double l) { return std::sqrt(std::max(l, 0.0)); }).matrix();
  for (std::size_t j = 0; j < n; ++j) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm2 += std::norm(b(i, j));
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < n; ++i) b(i, j) *= inv;
  }
  return b;
}

HermitianMatrix gram_matrix(const ComplexMatrix& vectors) {
  // (V*V)_ij = sum conj(v_i[k]) v_j[k] = <v_j, v_i>
  return HermitianMatrix(vectors.adjoint() * vectors);
}

}  // namespace cycloproj
