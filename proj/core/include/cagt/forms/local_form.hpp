#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cagt/algebra/errors.hpp"
#include "cagt/algebra/matrix.hpp"

namespace cagt {

inline constexpr std::size_t kMaxVars = 8;

/// λ^a dλ_I on one simplex: exponent vector over λ_0..λ_n and the wedge index set as a bitmask.
struct Monomial {
  std::array<std::uint8_t, kMaxVars> exps{};
  std::uint8_t mask = 0;

  int poly_degree() const {
    int d = 0;
    for (auto e : exps) d += e;
    return d;
  }
  int form_degree() const { return std::popcount(mask); }
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Sign of dλ_I ∧ dλ_K when merged into increasing order; 0 if I ∩ K ≠ ∅.
inline int wedge_sign(std::uint8_t i, std::uint8_t k) {
  if (i & k) return 0;
  int swaps = 0;
  for (unsigned b = 0; b < kMaxVars; ++b)
    if (k & (1u << b)) swaps += std::popcount(static_cast<unsigned>(i) >> (b + 1));
  return swaps % 2 ? -1 : 1;
}

/// Matrix-valued polynomial differential form on a single n-simplex, written
/// in barycentric coordinates λ_0..λ_n.
///
/// Any representation is allowed during computation; `canonical()` removes
/// λ_0 and dλ_0 using Σλ_i = 1 and Σdλ_i = 0, which makes equality testing
/// meaningful. All public operations except the explicit rebasing helpers
/// accept and return canonical forms.
template <class F>
class LocalForm {
 public:
  using Traits = ScalarTraits<F>;
  using Terms = std::map<Monomial, Mat<F>>;

  LocalForm() = default;
  LocalForm(std::size_t nvars, std::size_t l, int cap = 20) : nvars_(nvars), l_(l), cap_(cap) {
    if (nvars == 0 || nvars > kMaxVars) throw StructuralError("LocalForm: unsupported simplex dimension");
  }

  std::size_t nvars() const { return nvars_; }
  std::size_t matrix_size() const { return l_; }
  int degree_cap() const { return cap_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const Monomial& m, const Mat<F>& c) {
    if (c.is_zero()) return;
    if (m.poly_degree() > cap_)
      throw DegreeCapError("polynomial degree " + std::to_string(m.poly_degree()) + " exceeds cap " + std::to_string(cap_));
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  LocalForm& operator+=(const LocalForm& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  LocalForm& operator-=(const LocalForm& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  LocalForm& operator*=(const F& s) {
    if (Traits::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
    return *this;
  }
  friend LocalForm operator+(LocalForm a, const LocalForm& b) { return a += b; }
  friend LocalForm operator-(LocalForm a, const LocalForm& b) { return a -= b; }
  friend LocalForm operator*(LocalForm a, const F& s) { return a *= s; }
  friend bool operator==(const LocalForm& a, const LocalForm& b) { return a.terms_ == b.terms_; }

  /// Left or right multiplication of every coefficient by a constant matrix.
  LocalForm mul_left(const Mat<F>& m) const {
    LocalForm out = empty_like();
    for (const auto& [mono, c] : terms_) out.add(mono, m * c);
    return out;
  }
  LocalForm mul_right(const Mat<F>& m) const {
    LocalForm out = empty_like();
    for (const auto& [mono, c] : terms_) out.add(mono, c * m);
    return out;
  }

  /// Part of form degree k.
  LocalForm part(int k) const {
    LocalForm out = empty_like();
    for (const auto& [m, c] : terms_)
      if (m.form_degree() == k) out.terms_.emplace(m, c);
    return out;
  }

  LocalForm empty_like() const { return LocalForm(nvars_, l_, cap_); }

  /// ω ∧ η with coefficients multiplied in order.
  friend LocalForm wedge(const LocalForm& a, const LocalForm& b) {
    if (a.nvars_ != b.nvars_ || a.l_ != b.l_) throw StructuralError("wedge: shape mismatch");
    LocalForm out = a.empty_like();
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        const int s = wedge_sign(ma.mask, mb.mask);
        if (s == 0) continue;
        Monomial m;
        for (std::size_t v = 0; v < kMaxVars; ++v) m.exps[v] = ma.exps[v] + mb.exps[v];
        m.mask = ma.mask | mb.mask;
        Mat<F> c = ca * cb;
        if (s < 0) c = -c;
        out.add(m, c);
      }
    return out;
  }

  /// Exterior derivative; valid in any representation since d(λ_j) = dλ_j.
  LocalForm d() const {
    LocalForm out = empty_like();
    for (const auto& [m, c] : terms_)
      for (std::size_t j = 0; j < nvars_; ++j) {
        if (m.exps[j] == 0) continue;
        const int s = wedge_sign(static_cast<std::uint8_t>(1u << j), m.mask);
        if (s == 0) continue;
        Monomial n = m;
        n.exps[j] -= 1;
        n.mask |= static_cast<std::uint8_t>(1u << j);
        out.add(n, c * Traits::from_int(s * m.exps[j]));
      }
    return out;
  }

  /// Rewrites the form without λ_e and dλ_e.
  LocalForm eliminate(std::size_t e) const {
    LocalForm out = empty_like();
    for (const auto& [m, c] : terms_) {
      if (m.exps[e] == 0 && !(m.mask & (1u << e))) {
        out.add(m, c);
        continue;
      }
      // Polynomial part: λ^{a'} (1 - Σ_{k≠e} λ_k)^{a_e}.
      std::map<std::array<std::uint8_t, kMaxVars>, F> poly;
      auto base = m.exps;
      base[e] = 0;
      poly.emplace(base, Traits::one());
      for (int p = 0; p < m.exps[e]; ++p) {
        std::map<std::array<std::uint8_t, kMaxVars>, F> next;
        for (const auto& [ex, v] : poly) {
          next[ex] += v;
          for (std::size_t k = 0; k < nvars_; ++k) {
            if (k == e) continue;
            auto ex2 = ex;
            ex2[k] += 1;
            next[ex2] -= v;
          }
        }
        std::erase_if(next, [](const auto& kv) { return Traits::is_zero(kv.second); });
        poly = std::move(next);
      }
      // Form part: dλ_e → -Σ_{k≠e} dλ_k.
      std::vector<std::pair<std::uint8_t, int>> masks;
      if (m.mask & (1u << e)) {
        const std::uint8_t rest = m.mask & static_cast<std::uint8_t>(~(1u << e));
        const int s0 = wedge_sign(static_cast<std::uint8_t>(1u << e), rest);  // dλ_I = s0 dλ_e ∧ dλ_rest
        for (std::size_t k = 0; k < nvars_; ++k) {
          if (k == e) continue;
          const int s1 = wedge_sign(static_cast<std::uint8_t>(1u << k), rest);
          if (s1 == 0) continue;
          masks.emplace_back(rest | static_cast<std::uint8_t>(1u << k), -s0 * s1);
        }
      } else {
        masks.emplace_back(m.mask, 1);
      }
      for (const auto& [ex, v] : poly)
        for (const auto& [mk, s] : masks) {
          Monomial n;
          n.exps = ex;
          n.mask = mk;
          out.add(n, c * (s > 0 ? v : -v));
        }
    }
    return out;
  }

  LocalForm canonical() const { return eliminate(0); }

  /// Poincaré cone homotopy toward vertex j:
  ///   (κ_j φ)(x) = ∫_0^1 t^{p-1} ι_{x - v_j} φ(v_j + t(x - v_j)) dt,
  /// computed exactly in the chart centred at v_j. Satisfies dκ + κd = 1 - ev_j.
  LocalForm cone(std::size_t j) const {
    const LocalForm centred = eliminate(j);
    LocalForm out = empty_like();
    for (const auto& [m, c] : centred.terms_) {
      const int p = m.form_degree();
      if (p == 0) continue;
      const F w = Traits::from_ratio(1, m.poly_degree() + p);
      int pos = 0;
      for (std::size_t k = 0; k < nvars_; ++k) {
        if (!(m.mask & (1u << k))) continue;
        Monomial n = m;
        n.mask &= static_cast<std::uint8_t>(~(1u << k));
        n.exps[k] += 1;
        const F s = (pos % 2 == 0) ? w : -w;
        out.add(n, c * s);
        ++pos;
      }
    }
    return out.canonical();
  }

  /// Pullback to the face spanned by local vertices `positions` (increasing),
  /// expressed in the face's own barycentric coordinates.
  LocalForm restrict_to(const std::vector<std::size_t>& positions) const {
    LocalForm out(positions.size(), l_, cap_);
    std::array<int, kMaxVars> map;
    map.fill(-1);
    for (std::size_t i = 0; i < positions.size(); ++i) map[positions[i]] = static_cast<int>(i);
    for (const auto& [m, c] : terms_) {
      bool vanish = false;
      Monomial n;
      for (std::size_t v = 0; v < nvars_ && !vanish; ++v) {
        if (map[v] < 0) {
          vanish = m.exps[v] != 0 || (m.mask & (1u << v));
          continue;
        }
        n.exps[map[v]] = m.exps[v];
        if (m.mask & (1u << v)) n.mask |= static_cast<std::uint8_t>(1u << map[v]);
      }
      if (!vanish) out.add(n, c);  // order of dλ's preserved: map is increasing
    }
    return out.canonical();
  }

  /// ∫ over the simplex of the top-degree part, in the orientation of the
  /// vertex order: ∫ λ^a dλ_1∧...∧dλ_n = Π a_i! / (|a| + n)!.
  Mat<F> integrate_top() const {
    const std::size_t n = nvars_ - 1;
    const std::uint8_t top = static_cast<std::uint8_t>(((1u << nvars_) - 1) & ~1u);
    Mat<F> out(l_);
    for (const auto& [m, c] : terms_) {
      if (m.mask != top || m.exps[0] != 0) {
        if (m.form_degree() == static_cast<int>(n)) throw StructuralError("integrate_top: form is not canonical");
        continue;
      }
      out += c * monomial_integral(m.exps, static_cast<int>(n));
    }
    return out;
  }

  /// Value of the 0-form part at local vertex j.
  Mat<F> at_vertex(std::size_t j) const {
    Mat<F> out(l_);
    for (const auto& [m, c] : terms_) {
      if (m.mask != 0) continue;
      bool ok = true;
      for (std::size_t v = 0; v < nvars_; ++v)
        if (v != j && m.exps[v] != 0) ok = false;
      if (ok) out += c;
    }
    return out;
  }

  /// Π a_i! / (|a| + n)!: integral of λ^a against dλ_1∧..∧dλ_n over the simplex.
  static F monomial_integral(const std::array<std::uint8_t, kMaxVars>& a, int n) {
    Rational num = 1, den = 1;
    int total = 0;
    for (auto e : a) {
      for (int k = 2; k <= e; ++k) num *= k;
      total += e;
    }
    for (int k = 2; k <= total + n; ++k) den *= k;
    if constexpr (std::is_same_v<F, Rational>) return num / den;
    else return Traits::from_rational(num / den);
  }

  // Basic forms in this simplex's coordinates (canonical).
  static LocalForm lambda(std::size_t nvars, std::size_t l, std::size_t v, const Mat<F>& c, int cap = 20) {
    LocalForm f(nvars, l, cap);
    Monomial m;
    m.exps[v] = 1;
    f.add(m, c);
    return f.canonical();
  }
  static LocalForm dlambda(std::size_t nvars, std::size_t l, std::size_t v, const Mat<F>& c, int cap = 20) {
    LocalForm f(nvars, l, cap);
    Monomial m;
    m.mask = static_cast<std::uint8_t>(1u << v);
    f.add(m, c);
    return f.canonical();
  }
  static LocalForm constant(std::size_t nvars, const Mat<F>& c, int cap = 20) {
    LocalForm f(nvars, c.size(), cap);
    f.add(Monomial{}, c);
    return f;
  }

  /// Whitney form of the face (v_0 < ... < v_k) given by local positions:
  /// k! Σ_j (-1)^j λ_{v_j} dλ_{v_0} ∧ .. ^j .. ∧ dλ_{v_k}.
  static LocalForm whitney(std::size_t nvars, const std::vector<std::size_t>& face, const Mat<F>& c, int cap = 20) {
    LocalForm f(nvars, c.size(), cap);
    const std::size_t k = face.size() - 1;
    long fact = 1;
    for (std::size_t t = 2; t <= k; ++t) fact *= static_cast<long>(t);
    for (std::size_t j = 0; j < face.size(); ++j) {
      Monomial m;
      m.exps[face[j]] = 1;
      for (std::size_t t = 0; t < face.size(); ++t)
        if (t != j) m.mask |= static_cast<std::uint8_t>(1u << face[t]);
      const long s = (j % 2 == 0) ? fact : -fact;
      f.add(m, c * Traits::from_int(s));
    }
    return f.canonical();
  }

 private:
  std::size_t nvars_ = 1;
  std::size_t l_ = 1;
  int cap_ = 20;
  Terms terms_;
};

}  // namespace cagt
