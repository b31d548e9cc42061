#include "cycloproj/kernels.hpp"

namespace cycloproj {
namespace {

// Plain complex product without the C99 Annex G inf/nan recovery.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void daxpy_ref(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void caxpy_ref(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += mul(alpha, x[i]);
}

double ddot_ref(std::size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

cplx cdotc_ref(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void drot_ref(std::size_t n, double* x, double* y, double a, double b, double c, double d) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = a * xi + b * yi;
    y[i] = c * xi + d * yi;
  }
}

void crot_ref(std::size_t n, cplx* x, cplx* y, cplx a, cplx b, cplx c, cplx d) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx xi = x[i], yi = y[i];
    x[i] = mul(a, xi) + mul(b, yi);
    y[i] = mul(c, xi) + mul(d, yi);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", daxpy_ref, caxpy_ref, ddot_ref, cdotc_ref, drot_ref, crot_ref};
  return table;
}

}  // namespace cycloproj
