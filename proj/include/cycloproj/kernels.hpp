#pragma once

// Inner-loop kernels for the dense linear algebra. Every kernel has a scalar
// reference implementation; an AVX2+FMA variant is compiled on x86-64 and
// selected at runtime when the CPU supports it. Setting the environment
// variable CYCLOPROJ_SIMD=scalar forces the reference path.

#include <complex>
#include <cstddef>
#include <span>

namespace cycloproj {

using cplx = std::complex<double>;

struct KernelTable {
  const char* name;

  // y += alpha * x
  void (*daxpy)(std::size_t n, double alpha, const double* x, double* y);
  void (*caxpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);

  // sum x_i * y_i
  double (*ddot)(std::size_t n, const double* x, const double* y);
  // sum conj(x_i) * y_i
  cplx (*cdotc)(std::size_t n, const cplx* x, const cplx* y);

  // (x, y) <- (a x + b y, c x + d y), elementwise
  void (*drot)(std::size_t n, double* x, double* y, double a, double b, double c, double d);
  void (*crot)(std::size_t n, cplx* x, cplx* y, cplx a, cplx b, cplx c, cplx d);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

// The table used by the library; chosen once on first use.
const KernelTable& active_kernels();

namespace kern {

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active_kernels().daxpy(x.size(), alpha, x.data(), y.data());
}
inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active_kernels().caxpy(x.size(), alpha, x.data(), y.data());
}

// Conjugates the first argument for complex input.
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active_kernels().ddot(x.size(), x.data(), y.data());
}
inline cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  return active_kernels().cdotc(x.size(), x.data(), y.data());
}

inline void rot(std::span<double> x, std::span<double> y, double a, double b, double c, double d) {
  active_kernels().drot(x.size(), x.data(), y.data(), a, b, c, d);
}
inline void rot(std::span<cplx> x, std::span<cplx> y, cplx a, cplx b, cplx c, cplx d) {
  active_kernels().crot(x.size(), x.data(), y.data(), a, b, c, d);
}

}  // namespace kern
}  // namespace cycloproj
