#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cagt/algebra/errors.hpp"
#include "cagt/algebra/scalar.hpp"

namespace cagt {

/// Finite basis of a graded vector space: one degree and one label per element.
struct GradedBasis {
  std::vector<int> degrees;
  std::vector<std::string> labels;

  std::size_t size() const { return degrees.size(); }

  /// (sV)_p = V_{p+1}: every degree drops by one.
  GradedBasis suspended() const {
    GradedBasis s = *this;
    for (auto& d : s.degrees) d -= 1;
    for (auto& l : s.labels) l = "s" + l;
    return s;
  }

  friend bool operator==(const GradedBasis& a, const GradedBasis& b) {
    return a.degrees == b.degrees && a.labels == b.labels;
  }
};

using BasisPtr = std::shared_ptr<const GradedBasis>;

inline BasisPtr make_basis(std::vector<int> degrees, std::vector<std::string> labels = {}) {
  if (labels.empty())
    for (std::size_t k = 0; k < degrees.size(); ++k) labels.push_back("e" + std::to_string(k));
  if (labels.size() != degrees.size()) throw StructuralError("make_basis: label count mismatch");
  return std::make_shared<const GradedBasis>(GradedBasis{std::move(degrees), std::move(labels)});
}

/// Basis of B_1 ⊗ ... ⊗ B_k; the first factor is the most significant digit.
/// The empty product is the one-dimensional ground field in degree 0.
inline BasisPtr tensor_basis(const std::vector<BasisPtr>& factors) {
  GradedBasis out{{0}, {"1"}};
  bool first = true;
  for (const auto& f : factors) {
    GradedBasis next;
    next.degrees.reserve(out.size() * f->size());
    for (std::size_t a = 0; a < out.size(); ++a)
      for (std::size_t b = 0; b < f->size(); ++b) {
        next.degrees.push_back(out.degrees[a] + f->degrees[b]);
        next.labels.push_back(first ? f->labels[b] : out.labels[a] + "|" + f->labels[b]);
      }
    out = std::move(next);
    first = false;
  }
  return std::make_shared<const GradedBasis>(std::move(out));
}

inline bool same_basis(const BasisPtr& a, const BasisPtr& b) { return a == b || (a && b && *a == *b); }

/// Homogeneous linear map between finite graded bases, stored column-sparse.
template <class F>
class GradedMap {
 public:
  using Traits = ScalarTraits<F>;
  using Column = std::map<std::size_t, F>;

  GradedMap(BasisPtr source, BasisPtr target, int degree)
      : source_(std::move(source)), target_(std::move(target)), degree_(degree), cols_(source_->size()) {}

  static GradedMap zero(BasisPtr source, BasisPtr target, int degree) { return {std::move(source), std::move(target), degree}; }
  static GradedMap identity(const BasisPtr& basis) {
    GradedMap m(basis, basis, 0);
    for (std::size_t k = 0; k < basis->size(); ++k) m.cols_[k][k] = Traits::one();
    return m;
  }

  const BasisPtr& source() const { return source_; }
  const BasisPtr& target() const { return target_; }
  int degree() const { return degree_; }
  std::size_t rows() const { return target_->size(); }
  std::size_t cols() const { return source_->size(); }
  const Column& column(std::size_t c) const { return cols_.at(c); }

  /// Adds `value` at (row, col); rejects entries that break homogeneity.
  void add(std::size_t row, std::size_t col, const F& value) {
    if (Traits::is_zero(value)) return;
    if (row >= rows() || col >= cols()) throw StructuralError("GradedMap::add: index out of range");
    if (target_->degrees[row] - source_->degrees[col] != degree_)
      throw StructuralError("GradedMap::add: entry violates degree " + std::to_string(degree_));
    auto& c = cols_[col];
    auto [it, fresh] = c.emplace(row, value);
    if (!fresh) {
      it->second += value;
      if (Traits::is_zero(it->second)) c.erase(it);
    }
  }

  F at(std::size_t row, std::size_t col) const {
    const auto& c = cols_.at(col);
    auto it = c.find(row);
    return it == c.end() ? Traits::zero() : it->second;
  }

  bool is_zero() const {
    for (const auto& c : cols_)
      if (!c.empty()) return false;
    return true;
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : cols_) n += c.size();
    return n;
  }

  GradedMap& operator+=(const GradedMap& o) {
    if (!same_basis(source_, o.source_) || !same_basis(target_, o.target_) || degree_ != o.degree_)
      throw StructuralError("GradedMap::+=: shape mismatch");
    for (std::size_t c = 0; c < cols_.size(); ++c)
      for (const auto& [r, v] : o.cols_[c]) add(r, c, v);
    return *this;
  }
  GradedMap& operator*=(const F& s) {
    for (auto& c : cols_) {
      for (auto& [r, v] : c) v *= s;
      std::erase_if(c, [](const auto& kv) { return Traits::is_zero(kv.second); });
    }
    return *this;
  }
  friend GradedMap operator+(GradedMap a, const GradedMap& b) { return a += b; }
  friend GradedMap operator-(GradedMap a, const GradedMap& b) {
    GradedMap nb = b;
    nb *= -Traits::one();
    return a += nb;
  }

  friend bool operator==(const GradedMap& a, const GradedMap& b) {
    return same_basis(a.source_, b.source_) && same_basis(a.target_, b.target_) && a.degree_ == b.degree_ &&
           a.cols_ == b.cols_;
  }

  /// Applies the map to a dense coefficient vector over the source basis.
  std::vector<F> apply(const std::vector<F>& x) const {
    if (x.size() != cols()) throw StructuralError("GradedMap::apply: vector size mismatch");
    std::vector<F> y(rows(), Traits::zero());
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      if (Traits::is_zero(x[c])) continue;
      for (const auto& [r, v] : cols_[c]) y[r] += v * x[c];
    }
    return y;
  }

 private:
  BasisPtr source_;
  BasisPtr target_;
  int degree_;
  std::vector<Column> cols_;
};

/// f ∘ g; degrees add.
template <class F>
GradedMap<F> compose(const GradedMap<F>& f, const GradedMap<F>& g) {
  if (!same_basis(f.source(), g.target())) throw StructuralError("compose: source of f differs from target of g");
  GradedMap<F> out(g.source(), f.target(), f.degree() + g.degree());
  for (std::size_t c = 0; c < g.cols(); ++c)
    for (const auto& [k, gv] : g.column(c))
      for (const auto& [r, fv] : f.column(k)) out.add(r, c, fv * gv);
  return out;
}

/// f_1 ⊗ ... ⊗ f_k on the tensor product of sources, with the Koszul rule
///   (f_1 ⊗ ... ⊗ f_k)(a_1 ⊗ ... ⊗ a_k) = (-1)^{Σ_{i<j} |f_j||a_i|} f_1(a_1) ⊗ ... ⊗ f_k(a_k).
/// Element degrees are read from the source bases as given, so pass suspended
/// bases to get suspended signs.
template <class F>
GradedMap<F> koszul_tensor(const std::vector<GradedMap<F>>& maps) {
  if (maps.empty()) throw StructuralError("koszul_tensor: no maps");
  std::vector<BasisPtr> src, tgt;
  int degree = 0;
  for (const auto& m : maps) {
    src.push_back(m.source());
    tgt.push_back(m.target());
    degree += m.degree();
  }
  const BasisPtr source = tensor_basis(src);
  const BasisPtr target = tensor_basis(tgt);
  GradedMap<F> out(source, target, degree);
  const std::size_t k = maps.size();

  std::vector<std::size_t> digit(k, 0);
  for (std::size_t col = 0; col < source->size(); ++col) {
    // Decode mixed-radix column index into per-factor source indices.
    std::size_t rest = col;
    for (std::size_t f = k; f-- > 0;) {
      digit[f] = rest % src[f]->size();
      rest /= src[f]->size();
    }
    int sign_exp = 0, passed = 0;
    for (std::size_t f = 0; f < k; ++f) {
      sign_exp += maps[f].degree() * passed;
      passed += src[f]->degrees[digit[f]];
    }
    const F sign = (sign_exp % 2 == 0) ? ScalarTraits<F>::one() : -ScalarTraits<F>::one();

    // Expand the product of the factor columns.
    std::vector<std::pair<std::size_t, F>> acc{{0, sign}};
    for (std::size_t f = 0; f < k; ++f) {
      std::vector<std::pair<std::size_t, F>> next;
      for (const auto& [row, coeff] : acc)
        for (const auto& [r, v] : maps[f].column(digit[f])) next.emplace_back(row * tgt[f]->size() + r, coeff * v);
      acc = std::move(next);
      if (acc.empty()) break;
    }
    for (const auto& [row, v] : acc) out.add(row, col, v);
  }
  return out;
}

/// Upper bound on the ℓ²-operator norm via the Frobenius norm, rounded outward.
template <class F>
double operator_norm_bound(const GradedMap<F>& f) {
  long double sum = 0.0L;
  for (std::size_t c = 0; c < f.cols(); ++c)
    for (const auto& [r, v] : f.column(c)) {
      const long double a = ScalarTraits<F>::abs_upper(v);
      sum += a * a;
    }
  if (sum == 0.0L) return 0.0;
  const double s = static_cast<double>(std::sqrt(sum));
  return std::nextafter(s * (1.0 + 4 * std::numeric_limits<double>::epsilon()), std::numeric_limits<double>::infinity());
}

}  // namespace cagt
