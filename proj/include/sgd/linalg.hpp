#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sgd/rational.hpp"

namespace sgd {

template <class T>
using Vec = std::vector<T>;

using VecQ = Vec<Rat>;
using VecF = Vec<double>;

// Dense row-major matrix, sized for boundary-vector algebra ((N+1)-square
// with N <= 8) but shape-generic so the same code serves rank checks on
// embedding simplices.
template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, T fill = T(0))
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  Vec<T> row(std::size_t i) const {
    return Vec<T>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
  }
  Vec<T> col(std::size_t j) const {
    Vec<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  const std::vector<T>& data() const { return a_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using MatQ = Mat<Rat>;
using MatF = Mat<double>;

template <class T>
Mat<T> mat_mul(const Mat<T>& a, const Mat<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul shape");
  Mat<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == T(0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <class T>
Vec<T> mat_vec(const Mat<T>& a, const Vec<T>& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("mat_vec shape");
  Vec<T> y(a.rows(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

template <class T>
Mat<T> transpose(const Mat<T>& a) {
  Mat<T> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

template <class T>
T inner(const Vec<T>& x, const Vec<T>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("inner shape");
  T s(0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// x^T A y.
template <class T>
T quad_form(const Vec<T>& x, const Mat<T>& a, const Vec<T>& y) {
  return inner(x, mat_vec(a, y));
}

template <class T>
Vec<T> vec_add(const Vec<T>& x, const Vec<T>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec_add shape");
  Vec<T> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

template <class T>
Vec<T> vec_sub(const Vec<T>& x, const Vec<T>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec_sub shape");
  Vec<T> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
  return z;
}

template <class T>
Vec<T> vec_scale(const T& c, const Vec<T>& x) {
  Vec<T> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = c * x[i];
  return z;
}

namespace detail {
inline double pivot_size(double x) { return std::fabs(x); }
inline Rat pivot_size(const Rat& x) { return x < 0 ? Rat(-x) : x; }
}  // namespace detail

// Gauss-Jordan with partial pivoting (by magnitude for double, first
// nonzero maximal for Rat, where any nonzero pivot is exact).
template <class T>
Mat<T> mat_inverse(const Mat<T>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square");
  std::size_t n = a.rows();
  Mat<T> w = a;
  Mat<T> inv = Mat<T>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    auto best = detail::pivot_size(w(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      auto s = detail::pivot_size(w(r, col));
      if (s > best) {
        best = s;
        piv = r;
      }
    }
    if (w(piv, col) == T(0)) throw std::domain_error("singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(w(piv, j), w(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    T d = w(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      w(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      T f = w(r, col);
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        w(r, j) -= f * w(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

template <class T>
Vec<T> solve_linear(Mat<T> a, Vec<T> b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("solve_linear shape");
  std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    auto best = detail::pivot_size(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      auto s = detail::pivot_size(a(r, col));
      if (s > best) {
        best = s;
        piv = r;
      }
    }
    if (a(piv, col) == T(0)) throw std::domain_error("singular system");
    if (piv != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col) == T(0)) continue;
      T f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  Vec<T> x(n, T(0));
  for (std::size_t i = n; i-- > 0;) {
    T s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

// Determinant by fraction-free-ish elimination (fine at these sizes).
template <class T>
T determinant(Mat<T> a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("det of non-square");
  std::size_t n = a.rows();
  T det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col) == T(0)) ++piv;
    if (piv == n) return T(0);
    if (piv != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col) == T(0)) continue;
      T f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

// Determinant of the top-left k-by-k block.
template <class T>
T leading_minor(const Mat<T>& a, std::size_t k) {
  Mat<T> sub(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) sub(i, j) = a(i, j);
  return determinant(sub);
}

template <class T>
std::size_t mat_rank(Mat<T> a) {
  std::size_t n = a.rows(), m = a.cols(), rank = 0;
  for (std::size_t col = 0; col < m && rank < n; ++col) {
    std::size_t piv = rank;
    while (piv < n && a(piv, col) == T(0)) ++piv;
    if (piv == n) continue;
    if (piv != rank)
      for (std::size_t j = 0; j < m; ++j) std::swap(a(piv, j), a(rank, j));
    for (std::size_t r = rank + 1; r < n; ++r) {
      if (a(r, col) == T(0)) continue;
      T f = a(r, col) / a(rank, col);
      for (std::size_t j = col; j < m; ++j) a(r, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

inline VecF to_float(const VecQ& x) {
  VecF y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = to_double(x[i]);
  return y;
}

inline MatF to_float(const MatQ& a) {
  MatF b(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) b(i, j) = to_double(a(i, j));
  return b;
}

}  // namespace sgd
