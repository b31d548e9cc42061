#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cycloproj/error.hpp"
#include "cycloproj/kernels.hpp"

namespace cycloproj {

inline double conj_of(double x) { return x; }
inline cplx conj_of(cplx x) { return std::conj(x); }
inline double real_of(double x) { return x; }
inline double real_of(cplx x) { return x.real(); }
inline bool finite_of(double x) { return std::isfinite(x); }
inline bool finite_of(cplx x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

// Dense row-major matrix over double or complex<double>.
template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw PreconditionError("matrix dimensions must be positive");
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw PreconditionError("matrix dimensions must be positive");
    if (data_.size() != rows * cols) {
      throw PreconditionError("matrix entry count " + std::to_string(data_.size()) + " != " +
                              std::to_string(rows) + "x" + std::to_string(cols));
    }
    for (const T& v : data_) {
      if (!finite_of(v)) throw PreconditionError("matrix entries must be finite");
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = conj_of((*this)(i, j));
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    kern::axpy(T(1), o.data(), data());
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    kern::axpy(T(-1), o.data(), data());
    return *this;
  }
  Matrix& operator*=(T s) {
    for (T& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, T s) { return a *= s; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("matrix product shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      auto dst = out.row(i);
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        if (aik != T(0)) kern::axpy(aik, b.row(k), dst);
      }
    }
    return out;
  }

  friend std::vector<T> operator*(const Matrix& a, std::span<const T> x) {
    if (a.cols_ != x.size()) throw PreconditionError("matrix-vector shape mismatch");
    std::vector<T> y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      T s(0);
      const auto r = a.row(i);
      for (std::size_t k = 0; k < a.cols_; ++k) s += r[k] * x[k];
      y[i] = s;
    }
    return y;
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw PreconditionError("matrix shape mismatch");
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<cplx>;

template <class T>
double max_abs(const Matrix<T>& m) {
  double r = 0.0;
  for (const T& v : m.data()) r = std::max(r, std::abs(v));
  return r;
}

template <class T>
double frobenius_norm(const Matrix<T>& m) {
  double s = 0.0;
  for (const T& v : m.data()) s += std::norm(v);
  return std::sqrt(s);
}

// Real part of the Frobenius inner product <a, b> = tr(a* b).
template <class T>
double frobenius_inner(const Matrix<T>& a, const Matrix<T>& b) {
  return real_of(kern::dot(a.data(), b.data()));
}

inline ComplexMatrix to_complex(const RealMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.data().size(); ++i) out.data()[i] = m.data()[i];
  return out;
}

// Square matrix with a(i,j) == conj(a(j,i)) exactly.
template <class T>
class Hermitian {
 public:
  // Replaces the input by (A + A*)/2, which zeroes imaginary parts of the diagonal.
  explicit Hermitian(const Matrix<T>& a) : m_(a.rows(), a.cols()) {
    if (!a.is_square()) throw PreconditionError("Hermitian matrix must be square");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
      m_(i, i) = T(real_of(a(i, i)));
      for (std::size_t j = i + 1; j < n; ++j) {
        const T v = (a(i, j) + conj_of(a(j, i))) * 0.5;
        m_(i, j) = v;
        m_(j, i) = conj_of(v);
      }
    }
  }

  static Hermitian identity(std::size_t n) { return Hermitian(Matrix<T>::identity(n)); }

  std::size_t dim() const noexcept { return m_.rows(); }
  const Matrix<T>& matrix() const noexcept { return m_; }
  const T& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  Matrix<T> m_;
};

using HermitianMatrix = Hermitian<cplx>;
using SymmetricMatrix = Hermitian<double>;

}  // namespace cycloproj
