#pragma once

#include <cstddef>
#include <vector>

#include "cagt/algebra/errors.hpp"
#include "cagt/algebra/matrix.hpp"
#include "cagt/complex/simplicial_complex.hpp"

namespace cagt {

/// Matrix-valued simplicial k-cochain: one l×l matrix per k-simplex in canonical orientation.
template <class F>
class Cochain {
 public:
  Cochain(ComplexPtr complex, std::size_t l, int degree)
      : complex_(std::move(complex)), l_(l), degree_(degree), values_(complex_->count(degree), Mat<F>(l)) {
    if (l == 0) throw StructuralError("Cochain: matrix size must be positive");
  }

  /// The cochain with value m on a single simplex.
  static Cochain indicator(ComplexPtr complex, std::size_t l, int degree, std::size_t idx, Mat<F> m) {
    Cochain c(std::move(complex), l, degree);
    c.values_.at(idx) = std::move(m);
    return c;
  }
  /// The constant 0-cochain with value m at every vertex.
  static Cochain constant(ComplexPtr complex, const Mat<F>& m) {
    Cochain c(std::move(complex), m.size(), 0);
    for (auto& v : c.values_) v = m;
    return c;
  }

  const ComplexPtr& complex() const { return complex_; }
  std::size_t matrix_size() const { return l_; }
  int degree() const { return degree_; }
  std::size_t size() const { return values_.size(); }
  const Mat<F>& operator[](std::size_t idx) const { return values_.at(idx); }
  Mat<F>& operator[](std::size_t idx) { return values_.at(idx); }
  /// Value on an arbitrary vertex tuple, extended by antisymmetry.
  Mat<F> value(Simplex s) const;

  bool is_zero() const {
    for (const auto& v : values_)
      if (!v.is_zero()) return false;
    return true;
  }

  Cochain& operator+=(const Cochain& o) {
    check(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
  }
  Cochain& operator-=(const Cochain& o) {
    check(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
  }
  friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
  friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
  friend bool operator==(const Cochain& a, const Cochain& b) {
    return a.complex_ == b.complex_ && a.degree_ == b.degree_ && a.values_ == b.values_;
  }

 private:
  void check(const Cochain& o) const {
    if (o.complex_ != complex_ || o.l_ != l_ || o.degree_ != degree_) throw StructuralError("Cochain: shape mismatch");
  }

  ComplexPtr complex_;
  std::size_t l_;
  int degree_;
  std::vector<Mat<F>> values_;
};

template <class F>
Mat<F> Cochain<F>::value(Simplex s) const {
  if (static_cast<int>(s.size()) != degree_ + 1) throw StructuralError("Cochain::value: wrong simplex dimension");
  // Bubble sort, tracking the permutation sign.
  bool odd = false;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j + 1 < s.size() - i; ++j)
      if (s[j] > s[j + 1]) {
        std::swap(s[j], s[j + 1]);
        odd = !odd;
      } else if (s[j] == s[j + 1]) {
        return Mat<F>(l_);
      }
  auto idx = complex_->find(s);
  if (!idx) return Mat<F>(l_);
  return odd ? -values_[*idx] : values_[*idx];
}

/// (δc)(σ) = Σ_i (-1)^i c(∂_i σ).
template <class F>
Cochain<F> coboundary(const Cochain<F>& c) {
  const auto& K = *c.complex();
  Cochain<F> out(c.complex(), c.matrix_size(), c.degree() + 1);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    const auto& s = K.simplex(c.degree() + 1, idx);
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex face = s;
      face.erase(face.begin() + static_cast<long>(i));
      const auto& v = c[*K.find(face)];
      if (i % 2 == 0) out[idx] += v;
      else out[idx] -= v;
    }
  }
  return out;
}

/// Alexander-Whitney cup product: (a ∪ b)(v_0..v_{p+q}) = a(v_0..v_p) · b(v_p..v_{p+q}).
template <class F>
Cochain<F> cup_product(const Cochain<F>& a, const Cochain<F>& b) {
  if (a.complex() != b.complex() || a.matrix_size() != b.matrix_size()) throw StructuralError("cup_product: shape mismatch");
  const auto& K = *a.complex();
  const int p = a.degree(), q = b.degree();
  Cochain<F> out(a.complex(), a.matrix_size(), p + q);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    const auto& s = K.simplex(p + q, idx);
    Simplex front(s.begin(), s.begin() + p + 1), back(s.begin() + p, s.end());
    out[idx] = a[*K.find(front)] * b[*K.find(back)];
  }
  return out;
}

}  // namespace cagt
