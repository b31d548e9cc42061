// Built with -mavx2 -mfma. Only reached through the dispatcher after a CPUID check.

#include "cycloproj/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace cycloproj {
namespace {

inline const double* re_im(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* re_im(cplx* p) { return reinterpret_cast<double*>(p); }

// Two complex lanes [r0 i0 r1 i1] times a broadcast complex scalar.
inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
  const __m256d swapped = _mm256_permute_pd(x, 0b0101);
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, swapped));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void daxpy_avx2(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void caxpy_avx2(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xs = re_im(x);
  double* ys = re_im(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d prod = cmul(ar, ai, _mm256_loadu_pd(xs + 2 * i));
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), prod));
  }
  for (; i < n; ++i) y[i] += mul(alpha, x[i]);
}

double ddot_avx2(std::size_t n, const double* x, const double* y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

cplx cdotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
  // re = sum xr*yr + xi*yi ; im = sum xr*yi - xi*yr
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  const double* xs = re_im(x);
  const double* ys = re_im(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    const __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
    acc_im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), acc_im);
  }
  alignas(32) double im_parts[4];
  _mm256_store_pd(im_parts, acc_im);
  double re = hsum(acc_re);
  double im = (im_parts[0] - im_parts[1]) + (im_parts[2] - im_parts[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void drot_avx2(std::size_t n, double* x, double* y, double a, double b, double c, double d) {
  const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
  const __m256d vc = _mm256_set1_pd(c), vd = _mm256_set1_pd(d);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_fmadd_pd(va, xv, _mm256_mul_pd(vb, yv)));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vc, xv, _mm256_mul_pd(vd, yv)));
  }
  for (; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = a * xi + b * yi;
    y[i] = c * xi + d * yi;
  }
}

void crot_avx2(std::size_t n, cplx* x, cplx* y, cplx a, cplx b, cplx c, cplx d) {
  const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
  const __m256d br = _mm256_set1_pd(b.real()), bi = _mm256_set1_pd(b.imag());
  const __m256d cr = _mm256_set1_pd(c.real()), ci = _mm256_set1_pd(c.imag());
  const __m256d dr = _mm256_set1_pd(d.real()), di = _mm256_set1_pd(d.imag());
  double* xs = re_im(x);
  double* ys = re_im(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    const __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    _mm256_storeu_pd(xs + 2 * i, _mm256_add_pd(cmul(ar, ai, xv), cmul(br, bi, yv)));
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(cmul(cr, ci, xv), cmul(dr, di, yv)));
  }
  for (; i < n; ++i) {
    const cplx xi = x[i], yi = y[i];
    x[i] = mul(a, xi) + mul(b, yi);
    y[i] = mul(c, xi) + mul(d, yi);
  }
}

}  // namespace

const KernelTable* avx2_kernel_table() {
  static const KernelTable table{"avx2", daxpy_avx2, caxpy_avx2, ddot_avx2, cdotc_avx2, drot_avx2, crot_avx2};
  return &table;
}

}  // namespace cycloproj

#else

namespace cycloproj {
const KernelTable* avx2_kernel_table() { return nullptr; }
}  // namespace cycloproj

#endif
