#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <algorithm>
#include <span>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "cagt/algebra/errors.hpp"
#include "cagt/algebra/scalar.hpp"

namespace cagt {

/// Basis element of some (possibly infinite) graded space, interned elsewhere.
using Key = std::uint32_t;
/// Basis tensor sa_1 ⊗ ... ⊗ sa_n; the empty word is the coalgebra unit.
using Word = std::vector<Key>;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 1469598103934665603ull ^ w.size();
    for (Key k : w) {
      h ^= k;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Sparse linear combination of keys (an element of V or sV).
template <class F>
using KeyVec = std::map<Key, F>;

template <class F>
void add_to(KeyVec<F>& v, Key k, const std::type_identity_t<F>& c) {
  if (ScalarTraits<F>::is_zero(c)) return;
  auto [it, fresh] = v.emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (ScalarTraits<F>::is_zero(it->second)) v.erase(it);
  }
}

/// Degree of a key in the suspended space sV.
using DegreeFn = std::function<int(Key)>;

/// Element of the tensor coalgebra T(sV), stored as a sparse map word → coefficient.
template <class F>
class TensorElem {
 public:
  using Traits = ScalarTraits<F>;
  using Terms = std::map<Word, F>;

  TensorElem() = default;

  static TensorElem unit() {
    TensorElem e;
    e.terms_.emplace(Word{}, Traits::one());
    return e;
  }
  static TensorElem word(Word w, const F& c = ScalarTraits<F>::one()) {
    TensorElem e;
    e.add(std::move(w), c);
    return e;
  }
  static TensorElem from_vec(const KeyVec<F>& v) {
    TensorElem e;
    for (const auto& [k, c] : v) e.add(Word{k}, c);
    return e;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(const Word& w, const F& c) {
    if (Traits::is_zero(c)) return;
    auto [it, fresh] = terms_.emplace(w, c);
    if (!fresh) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }
  void add_scaled(const TensorElem& o, const F& s) {
    for (const auto& [w, c] : o.terms_) add(w, c * s);
  }

  F coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Traits::zero() : it->second;
  }

  TensorElem& operator+=(const TensorElem& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
  }
  TensorElem& operator-=(const TensorElem& o) {
    for (const auto& [w, c] : o.terms_) add(w, -c);
    return *this;
  }
  TensorElem& operator*=(const F& s) {
    if (Traits::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    std::erase_if(terms_, [](const auto& kv) { return Traits::is_zero(kv.second); });
    return *this;
  }
  friend TensorElem operator+(TensorElem a, const TensorElem& b) { return a += b; }
  friend TensorElem operator-(TensorElem a, const TensorElem& b) { return a -= b; }
  friend TensorElem operator*(TensorElem a, const F& s) { return a *= s; }
  friend TensorElem operator*(const F& s, TensorElem a) { return a *= s; }
  friend bool operator==(const TensorElem& a, const TensorElem& b) { return a.terms_ == b.terms_; }
  /// Tensor product a ⊗ b by concatenation of words.
  friend TensorElem concat(const TensorElem& a, const TensorElem& b) {
    TensorElem e;
    for (const auto& [u, x] : a.terms_)
      for (const auto& [v, y] : b.terms_) {
        Word w = u;
        w.insert(w.end(), v.begin(), v.end());
        e.add(w, x * y);
      }
    return e;
  }

  /// Component of tensor length n.
  TensorElem length_part(std::size_t n) const {
    TensorElem e;
    for (const auto& [w, c] : terms_)
      if (w.size() == n) e.terms_.emplace(w, c);
    return e;
  }
  std::size_t max_length() const {
    std::size_t n = 0;
    for (const auto& [w, c] : terms_) n = std::max(n, w.size());
    return n;
  }
  /// Length-1 component as a key vector.
  KeyVec<F> to_vec() const {
    KeyVec<F> v;
    for (const auto& [w, c] : terms_)
      if (w.size() == 1) v.emplace(w[0], c);
    return v;
  }

  /// ℓ² norm of the coefficient vector, as a double rounded upward.
  double norm() const {
    long double s = 0.0L;
    for (const auto& [w, c] : terms_) {
      const long double a = Traits::abs_upper(c);
      s += a * a;
    }
    const double r = static_cast<double>(std::sqrt(s));
    return r == 0.0 ? 0.0 : r * (1.0 + 1e-15);
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& [w, c] : terms_) m = std::max(m, Traits::abs_upper(c));
    return m;
  }
  bool inexact() const {
    for (const auto& [w, c] : terms_)
      if (Traits::inexact(c)) return true;
    return false;
  }

 private:
  Terms terms_;
};

/// Linear operator on tensor elements.
template <class F>
using LinOp = std::function<TensorElem<F>(const TensorElem<F>&)>;

/// Linear operator on a key space, memoized per key. Not thread-safe.
template <class F>
class KeyOp {
 public:
  using Fn = std::function<KeyVec<F>(Key)>;
  KeyOp() = default;
  explicit KeyOp(Fn fn, int degree = 0) : fn_(std::make_shared<State>(State{std::move(fn), {}})), degree_(degree) {}

  const KeyVec<F>& operator()(Key k) const {
    auto& cache = fn_->cache;
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    return cache.emplace(k, fn_->fn(k)).first->second;
  }
  KeyVec<F> apply(const KeyVec<F>& v) const {
    KeyVec<F> out;
    for (const auto& [k, c] : v)
      for (const auto& [k2, c2] : (*this)(k)) add_to(out, k2, c2 * c);
    return out;
  }
  int degree() const { return degree_; }
  explicit operator bool() const { return static_cast<bool>(fn_); }

 private:
  struct State {
    Fn fn;
    std::unordered_map<Key, KeyVec<F>> cache;
  };
  std::shared_ptr<State> fn_;
  int degree_ = 0;
};

/// Word-level linear operator memoized per basis word, extended linearly.
template <class F>
class WordOp {
 public:
  using Fn = std::function<TensorElem<F>(const Word&)>;
  WordOp() = default;
  explicit WordOp(Fn fn) : st_(std::make_shared<State>(State{std::move(fn), {}})) {}

  const TensorElem<F>& operator()(const Word& w) const {
    auto& cache = st_->cache;
    auto it = cache.find(w);
    if (it != cache.end()) return it->second;
    return cache.emplace(w, st_->fn(w)).first->second;
  }
  TensorElem<F> apply(const TensorElem<F>& x) const {
    TensorElem<F> out;
    for (const auto& [w, c] : x.terms()) out.add_scaled((*this)(w), c);
    return out;
  }
  std::size_t cache_size() const { return st_->cache.size(); }

 private:
  struct State {
    Fn fn;
    std::unordered_map<Word, TensorElem<F>, WordHash> cache;
  };
  std::shared_ptr<State> st_;
};

namespace detail {

/// Expands Π_i v_i into words appended to `prefix`, scaled by `coeff`.
template <class F>
void expand_product(const std::vector<const KeyVec<F>*>& factors, std::size_t pos, Word& prefix, const std::type_identity_t<F>& coeff,
                    TensorElem<F>& out) {
  if (pos == factors.size()) {
    out.add(prefix, coeff);
    return;
  }
  for (const auto& [k, c] : *factors[pos]) {
    prefix.push_back(k);
    expand_product<F>(factors, pos + 1, prefix, F(coeff * c), out);
    prefix.pop_back();
  }
}

}  // namespace detail

/// f^{⊗n} for a degree-0 key operator (no Koszul signs).
template <class F>
TensorElem<F> tensor_power(const KeyOp<F>& f, const TensorElem<F>& x) {
  if (f.degree() != 0) throw StructuralError("tensor_power: operator must have degree 0");
  TensorElem<F> out;
  std::vector<const KeyVec<F>*> factors;
  Word prefix;
  for (const auto& [w, c] : x.terms()) {
    factors.clear();
    bool zero = false;
    for (Key k : w) {
      const auto& v = f(k);
      if (v.empty()) {
        zero = true;
        break;
      }
      factors.push_back(&v);
    }
    if (zero) continue;
    prefix.clear();
    detail::expand_product(factors, 0, prefix, c, out);
  }
  return out;
}

/// Σ_{r+1+t=n} L^{⊗r} ⊗ h ⊗ 1^{⊗t}, with the Koszul sign (-1)^{|h| Σ_{i≤r} |sa_i|}.
/// L has degree 0; `deg` gives suspended key degrees.
template <class F>
TensorElem<F> one_sided_extension(const KeyOp<F>& left, const KeyOp<F>& h, const DegreeFn& deg, const TensorElem<F>& x) {
  TensorElem<F> out;
  std::vector<const KeyVec<F>*> factors;
  std::vector<KeyVec<F>> singles;
  Word prefix;
  const bool odd_h = h.degree() % 2 != 0;
  for (const auto& [w, c] : x.terms()) {
    int passed = 0;
    for (std::size_t r = 0; r < w.size(); ++r) {
      const auto& hv = h(w[r]);
      if (!hv.empty()) {
        factors.clear();
        singles.assign(w.size() - r - 1, {});
        bool zero = false;
        for (std::size_t i = 0; i < r && !zero; ++i) {
          const auto& lv = left(w[i]);
          if (lv.empty()) zero = true;
          factors.push_back(&lv);
        }
        if (!zero) {
          factors.push_back(&hv);
          for (std::size_t i = r + 1; i < w.size(); ++i) {
            singles[i - r - 1].emplace(w[i], ScalarTraits<F>::one());
            factors.push_back(&singles[i - r - 1]);
          }
          const F sign = (odd_h && passed % 2 != 0) ? F(-c) : c;
          prefix.clear();
          detail::expand_product(factors, 0, prefix, sign, out);
        }
      }
      passed += deg(w[r]);
    }
  }
  return out;
}

/// Deconcatenation coproduct Δ(w) = Σ_j w[0..j) ⊗ w[j..n), returned as pairs of words.
template <class F>
std::vector<std::pair<std::pair<Word, Word>, F>> deconcatenate(const TensorElem<F>& x) {
  std::vector<std::pair<std::pair<Word, Word>, F>> out;
  for (const auto& [w, c] : x.terms())
    for (std::size_t j = 0; j <= w.size(); ++j)
      out.push_back({{Word(w.begin(), w.begin() + static_cast<long>(j)), Word(w.begin() + static_cast<long>(j), w.end())}, c});
  return out;
}

/// Suspended total degree of a word.
inline int word_degree(const Word& w, const DegreeFn& deg) {
  int d = 0;
  for (Key k : w) d += deg(k);
  return d;
}

}  // namespace cagt
