#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cagt/coalgebra/coderivation.hpp"

namespace cagt {

/// Unital dg algebra on a key space: degree, differential and product on basis keys.
template <class F>
struct DgAlgebra {
  DegreeFn degree;  ///< unsuspended degree
  std::function<KeyVec<F>(Key)> d;
  std::function<KeyVec<F>(Key, Key)> product;
  KeyVec<F> unit;
};

template <class F>
KeyVec<F> apply_d(const DgAlgebra<F>& a, const KeyVec<F>& x) {
  KeyVec<F> out;
  for (const auto& [k, c] : x)
    for (const auto& [k2, c2] : a.d(k)) add_to(out, k2, c * c2);
  return out;
}

template <class F>
KeyVec<F> multiply(const DgAlgebra<F>& a, const KeyVec<F>& x, const KeyVec<F>& y) {
  KeyVec<F> out;
  for (const auto& [kx, cx] : x)
    for (const auto& [ky, cy] : y)
      for (const auto& [k, c] : a.product(kx, ky)) add_to(out, k, cx * cy * c);
  return out;
}

/// Degree of a homogeneous key vector, or nullopt if mixed or zero.
template <class F>
std::optional<int> homogeneous_degree(const KeyVec<F>& x, const DegreeFn& deg) {
  std::optional<int> d;
  for (const auto& [k, c] : x) {
    if (d && *d != deg(k)) return std::nullopt;
    d = deg(k);
  }
  return d;
}

/// Curved A∞-structure given by its unsuspended Taylor maps m_0..m_K.
template <class F>
struct CurvedAInfinityStructure {
  TaylorFamily<F> taylor;
  bool curved = true;  ///< m_0 ≠ 0
  bool dg = true;      ///< m_k = 0 for k > 2

  SuspendedTaylor<F> coderivation() const { return suspend_coderivation(taylor); }
  KeyVec<F> curvature() const { return taylor.m(std::span<const Key>()); }
};

/// The curved dg structure of a connection γ of degree 1:
///   m_0(1) = dγ + γ², m_1(a) = da + [γ, a], m_2(a ⊗ b) = ab.
template <class F>
CurvedAInfinityStructure<F> curved_dg_from_gamma(const DgAlgebra<F>& a, const KeyVec<F>& gamma) {
  if (a.unit.empty()) throw StructuralError("curved_dg_from_gamma: algebra is not unital");
  if (!gamma.empty()) {
    const auto d = homogeneous_degree(gamma, a.degree);
    if (!d || *d != 1) throw StructuralError("curved_dg_from_gamma: γ must be homogeneous of degree 1");
  }
  auto curvature = apply_d(a, gamma);
  for (const auto& [k, c] : multiply(a, gamma, gamma)) add_to(curvature, k, c);
  auto m1 = std::make_shared<KeyOp<F>>([a, gamma](Key k) {
    KeyVec<F> out = a.d(k);
    const KeyVec<F> x{{k, ScalarTraits<F>::one()}};
    const bool odd = a.degree(k) % 2 != 0;
    for (const auto& [kk, c] : multiply(a, gamma, x)) add_to(out, kk, c);
    for (const auto& [kk, c] : multiply(a, x, gamma)) add_to(out, kk, odd ? c : -c);
    return out;
  });
  CurvedAInfinityStructure<F> s;
  s.curved = !curvature.empty();
  s.dg = true;
  s.taylor.min_arity = 0;
  s.taylor.max_arity = 2;
  s.taylor.base_degree = 2;
  s.taylor.degree = a.degree;
  auto prod = a.product;
  s.taylor.m = [curvature, m1, prod](std::span<const Key> args) -> KeyVec<F> {
    switch (args.size()) {
      case 0: return curvature;
      case 1: return (*m1)(args[0]);
      case 2: return prod(args[0], args[1]);
      default: return {};
    }
  };
  return s;
}

/// The part of curved_dg_from_gamma(a, γ) beyond the differential:
///   m_0(1) = dγ + γ², m_1 = [γ, ·], m_2 = product. Its suspension is the perturbation δ₁.
template <class F>
TaylorFamily<F> perturbation_from_gamma(const DgAlgebra<F>& a, const KeyVec<F>& gamma) {
  auto full = curved_dg_from_gamma(a, gamma);
  auto d = a.d;
  auto m = full.taylor.m;
  full.taylor.m = [m, d](std::span<const Key> args) -> KeyVec<F> {
    auto v = m(args);
    if (args.size() == 1)
      for (const auto& [k, c] : d(args[0])) add_to(v, k, -c);
    return v;
  };
  return full.taylor;
}

/// The A∞ identity at arity n evaluated on unsuspended arguments a_1..a_n:
///   Σ_{r+s+t=n} (-1)^{r+st+[s=0]} m_{r+t+1}(1^{⊗r} ⊗ m_s ⊗ 1^{⊗t})(a),
/// with the Koszul rule for m_s (degree 2 − s) passing a_1..a_r.
/// The extra sign at s = 0 matches m_1m_1 = m_2(m_0⊗1) − m_2(1⊗m_0).
/// `complete` states that m_k = 0 for k > max_arity; otherwise arities needing
/// unknown maps are indeterminate.
template <class F>
KeyVec<F> ainfty_residual(const TaylorFamily<F>& t, std::span<const Key> args, bool complete = true) {
  const int n = static_cast<int>(args.size());
  if (!complete && n + 1 > t.max_arity)
    throw IndeterminateError("ainfty_residual: arity " + std::to_string(n) + " needs m_" + std::to_string(n + 1) +
                             " beyond the truncation");
  KeyVec<F> out;
  for (int s = 0; s <= n; ++s) {
    if (s > t.max_arity) continue;
    for (int r = 0; r + s <= n; ++r) {
      const int tt = n - r - s;
      if (r + tt + 1 > t.max_arity) continue;
      int passed = 0;
      for (int i = 0; i < r; ++i) passed += t.degree(args[i]);
      const int e = r + s * tt + (s == 0 ? 1 : 0) + (2 - s) * passed;
      const bool neg = e % 2 != 0;
      const auto inner = t.m(args.subspan(static_cast<std::size_t>(r), static_cast<std::size_t>(s)));
      Word w(args.begin(), args.begin() + r);
      w.push_back(0);
      w.insert(w.end(), args.begin() + r + s, args.end());
      for (const auto& [k, c] : inner) {
        w[static_cast<std::size_t>(r)] = k;
        for (const auto& [k2, c2] : t.m(w)) add_to(out, k2, neg ? F(-(c * c2)) : F(c * c2));
      }
    }
  }
  return out;
}

/// Residual at arity n as a GradedMap on a finite basis.
template <class F>
GradedMap<F> ainfty_residual_map(const TaylorFamily<F>& t, const BasisPtr& v, std::size_t n, bool complete = true) {
  const BasisPtr src = tensor_power_basis(v, n);
  GradedMap<F> out(src, v, 3 - static_cast<int>(n));
  for (std::size_t col = 0; col < src->size(); ++col) {
    const Word w = index_word(col, n, v->size());
    for (const auto& [k, c] : ainfty_residual(t, w, complete)) out.add(k, col, c);
  }
  return out;
}

}  // namespace cagt
