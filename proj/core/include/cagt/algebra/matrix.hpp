#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cagt/algebra/errors.hpp"
#include "cagt/algebra/scalar.hpp"

namespace cagt {

/// Dense square matrix; the coefficient ring M_l of matrix-valued forms and cochains.
template <class F>
class Mat {
 public:
  using Traits = ScalarTraits<F>;

  Mat() = default;
  explicit Mat(std::size_t n) : n_(n), a_(n * n, Traits::zero()) {}

  static Mat identity(std::size_t n) {
    Mat m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Traits::one();
    return m;
  }
  static Mat unit(std::size_t n, std::size_t r, std::size_t c) {
    Mat m(n);
    m(r, c) = Traits::one();
    return m;
  }

  std::size_t size() const { return n_; }
  F& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const F& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  const std::vector<F>& data() const { return a_; }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!Traits::is_zero(x)) return false;
    return true;
  }

  Mat& operator+=(const Mat& o) {
    check(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    check(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Mat& operator*=(const F& s) {
    for (auto& x : a_) x *= s;
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator-(Mat a) {
    for (auto& x : a.a_) x = -x;
    return a;
  }
  friend Mat operator*(Mat a, const F& s) { return a *= s; }
  friend Mat operator*(const F& s, Mat a) { return a *= s; }

  friend Mat operator*(const Mat& a, const Mat& b) {
    a.check(b);
    Mat c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k) {
        const F& aik = a(i, k);
        if (Traits::is_zero(aik)) continue;
        for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Mat& a, const Mat& b) { return a.n_ == b.n_ && a.a_ == b.a_; }

  F trace() const {
    F t = Traits::zero();
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  Mat transpose() const {
    Mat t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Gauss-Jordan inverse; throws StructuralError when singular.
  Mat inverse() const {
    Mat a = *this;
    Mat inv = identity(n_);
    for (std::size_t col = 0; col < n_; ++col) {
      std::size_t piv = col;
      while (piv < n_ && Traits::is_zero(a(piv, col))) ++piv;
      if (piv == n_) throw StructuralError("Mat::inverse: singular matrix");
      if (piv != col)
        for (std::size_t j = 0; j < n_; ++j) {
          std::swap(a(piv, j), a(col, j));
          std::swap(inv(piv, j), inv(col, j));
        }
      const F p = a(col, col);
      for (std::size_t j = 0; j < n_; ++j) {
        a(col, j) /= p;
        inv(col, j) /= p;
      }
      for (std::size_t r = 0; r < n_; ++r) {
        if (r == col || Traits::is_zero(a(r, col))) continue;
        const F f = a(r, col);
        for (std::size_t j = 0; j < n_; ++j) {
          a(r, j) -= f * a(col, j);
          inv(r, j) -= f * inv(col, j);
        }
      }
    }
    return inv;
  }

  F determinant() const {
    Mat a = *this;
    F det = Traits::one();
    for (std::size_t col = 0; col < n_; ++col) {
      std::size_t piv = col;
      while (piv < n_ && Traits::is_zero(a(piv, col))) ++piv;
      if (piv == n_) return Traits::zero();
      if (piv != col) {
        for (std::size_t j = 0; j < n_; ++j) std::swap(a(piv, j), a(col, j));
        det = -det;
      }
      det *= a(col, col);
      for (std::size_t r = col + 1; r < n_; ++r) {
        if (Traits::is_zero(a(r, col))) continue;
        const F f = a(r, col) / a(col, col);
        for (std::size_t j = col; j < n_; ++j) a(r, j) -= f * a(col, j);
      }
    }
    return det;
  }

  template <class G>
  Mat<G> convert() const {
    Mat<G> m(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = convert_scalar<G>((*this)(i, j));
    return m;
  }

 private:
  template <class G>
  static G convert_scalar(const F& x) {
    if constexpr (std::is_same_v<F, G>) return x;
    else if constexpr (std::is_same_v<F, Rational>) return ScalarTraits<G>::from_rational(x);
    else return G(ScalarTraits<F>::to_double(x));
  }

  void check(const Mat& o) const {
    if (o.n_ != n_) throw StructuralError("Mat: size mismatch");
  }

  std::size_t n_ = 0;
  std::vector<F> a_;
};

}  // namespace cagt
