#pragma once

#include <cstddef>
#include <vector>

#include "cagt/complex/cochain.hpp"
#include "cagt/forms/poly_form.hpp"

namespace cagt {

namespace detail {

template <class F>
F from_exact(const Rational& q) {
  if constexpr (std::is_same_v<F, Rational>) return q;
  else return ScalarTraits<F>::from_rational(q);
}

/// Dupont's homotopy on one simplex:
///   H ω = Σ_{k=0}^{n-1} (-1)^{k+1} Σ_{i_0<...<i_k} ω_{i_0...i_k} ∧ κ_{i_k} ⋯ κ_{i_0} ω,
/// with ω_I the Whitney form of the face I and κ_i the cone homotopy toward vertex i.
/// The overall sign makes ip − 1 = dH + Hd.
template <class F>
void dupont_accumulate(const LocalForm<F>& current, std::vector<std::size_t>& chain, std::size_t next_vertex,
                       LocalForm<F>& out) {
  const std::size_t n = current.nvars() - 1;
  for (std::size_t i = next_vertex; i <= n; ++i) {
    LocalForm<F> coned = current.cone(i);
    if (coned.is_zero()) continue;
    chain.push_back(i);
    if (chain.size() <= n) {
      const auto w = LocalForm<F>::whitney(current.nvars(), chain, Mat<F>::identity(current.matrix_size()),
                                           current.degree_cap());
      if (chain.size() % 2 == 0) out += wedge(w, coned);
      else out -= wedge(w, coned);
      dupont_accumulate(coned, chain, i + 1, out);
    }
    chain.pop_back();
  }
}

}  // namespace detail

/// Dupont homotopy on a single simplex component.
template <class F>
LocalForm<F> dupont_local(const LocalForm<F>& w) {
  LocalForm<F> out = w.empty_like();
  std::vector<std::size_t> chain;
  detail::dupont_accumulate(w, chain, 0, out);
  return out;
}

/// Injection of Dupont's contraction: the Whitney map C^•(K, M_l) → Ω^•(K, M_l).
template <class F>
PolyForm<F> whitney_map(const FormContextPtr& ctx, const Cochain<F>& c) {
  if (c.complex() != ctx->complex || c.matrix_size() != ctx->l) throw StructuralError("whitney_map: context mismatch");
  const auto& K = *ctx->complex;
  PolyForm<F> out(ctx);
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    if (c[idx].is_zero()) continue;
    const auto& s = K.simplex(c.degree(), idx);
    for (std::size_t f = 0; f < K.num_facets(); ++f)
      if (auto loc = K.local_positions(f, s))
        out.part(f) += LocalForm<F>::whitney(out.part(f).nvars(), *loc, c[idx], ctx->degree_cap);
  }
  return out;
}

/// Projection of Dupont's contraction: (pω)(σ) = ∫_σ ω on every k-simplex.
template <class F>
Cochain<F> derham_map(const PolyForm<F>& w, int k) {
  Cochain<F> out(w.complex(), w.matrix_size(), k);
  for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] = w.restrict_to(k, idx).part(k).integrate_top();
  return out;
}

/// Homotopy of Dupont's contraction, facet by facet. Negative-control variants
/// scale it or add the non-special term d κ_0 κ_1 κ_2 d (which changes no homotopy
/// identity but breaks the annihilation conditions in dimension ≥ 3).
template <class F>
PolyForm<F> dupont_homotopy(const PolyForm<F>& w) {
  const auto variant = w.context()->homotopy;
  return w.map_parts([variant](const LocalForm<F>& p) {
    LocalForm<F> h = dupont_local(p);
    if (variant == HomotopyVariant::scaled) h *= ScalarTraits<F>::from_int(2);
    if (variant == HomotopyVariant::non_special && p.nvars() >= 4)
      h += p.d().cone(2).cone(1).cone(0).d();
    return h;
  });
}

/// ∫_σ λ^a dvol = vol(σ) · n! · Π a_i! / (|a| + n)!, exact in rationals.
template <class F>
F simplex_monomial_integral(const std::vector<int>& exponents, const F& volume) {
  if (exponents.empty() || exponents.size() > kMaxVars) throw StructuralError("simplex_monomial_integral: bad exponent count");
  std::array<std::uint8_t, kMaxVars> a{};
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0) throw StructuralError("simplex_monomial_integral: negative exponent");
    a[i] = static_cast<std::uint8_t>(exponents[i]);
  }
  const int n = static_cast<int>(exponents.size()) - 1;
  Rational nf = 1;
  for (int k = 2; k <= n; ++k) nf *= k;
  return volume * detail::from_exact<F>(nf) * LocalForm<F>::monomial_integral(a, n);
}

/// Volume of facet f as a scalar of the requested backend. Exact backends require
/// a rational volume.
template <class F>
F facet_volume(const SimplicialComplex& K, std::size_t f) {
  const auto& g = K.geometry(f);
  if constexpr (ScalarTraits<F>::exact) {
    if (!g.volume) throw GeometryError("facet volume is irrational; use the float64 backend");
    return *g.volume;
  } else {
    return F(g.volume_float);
  }
}

enum class TracePairing {
  trace,            ///< Tr(A B): bilinear, conjugation invariant
  hilbert_schmidt,  ///< Tr(A Bᵀ): positive definite, used for norms
};

/// Σ_τ ∫_τ Tr(ω_1 ∧ ⋆ω_2), with the pointwise metric induced by vertex coordinates.
template <class F>
F form_inner_product(const PolyForm<F>& a, const PolyForm<F>& b, TracePairing mode = TracePairing::trace) {
  if (a.context() != b.context()) throw StructuralError("form_inner_product: context mismatch");
  const auto& K = *a.complex();
  F total = ScalarTraits<F>::zero();
  for (std::size_t f = 0; f < K.num_facets(); ++f) {
    const auto& pa = a.part(f);
    const auto& pb = b.part(f);
    if (pa.is_zero() || pb.is_zero()) continue;
    const auto& g = K.geometry(f);
    const int n = K.facet_dim(f);
    const F vol = facet_volume<F>(K, f);
    Rational nf = 1;
    for (int k = 2; k <= n; ++k) nf *= k;
    const F scale = vol * detail::from_exact<F>(nf);
    for (const auto& [ma, ca] : pa.terms())
      for (const auto& [mb, cb] : pb.terms()) {
        if (ma.form_degree() != mb.form_degree()) continue;
        // det of the covector Gram matrix restricted to rows I, columns K (bits 1..n ↦ 0..n-1).
        std::vector<std::size_t> ri, ck;
        for (int v = 1; v <= n; ++v) {
          if (ma.mask & (1u << v)) ri.push_back(v - 1);
          if (mb.mask & (1u << v)) ck.push_back(v - 1);
        }
        Rational gdet = 1;
        if (!ri.empty()) {
          Mat<Rational> sub(ri.size());
          for (std::size_t x = 0; x < ri.size(); ++x)
            for (std::size_t y = 0; y < ck.size(); ++y) sub(x, y) = g.covector_metric(ri[x], ck[y]);
          gdet = sub.determinant();
        }
        if (sgn(gdet) == 0) continue;
        F tr = ScalarTraits<F>::zero();
        const std::size_t l = ca.size();
        for (std::size_t r = 0; r < l; ++r)
          for (std::size_t c = 0; c < l; ++c)
            tr += mode == TracePairing::trace ? ca(r, c) * cb(c, r) : ca(r, c) * cb(r, c);
        if (ScalarTraits<F>::is_zero(tr)) continue;
        std::array<std::uint8_t, kMaxVars> e{};
        for (std::size_t v = 0; v < kMaxVars; ++v) e[v] = ma.exps[v] + mb.exps[v];
        total += scale * detail::from_exact<F>(gdet) * LocalForm<F>::monomial_integral(e, n) * tr;
      }
  }
  return total;
}

/// L² norm squared with the Hilbert-Schmidt pairing.
template <class F>
F l2_norm_squared(const PolyForm<F>& a) {
  return form_inner_product(a, a, TracePairing::hilbert_schmidt);
}

}  // namespace cagt
