#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cagt/forms/key_space.hpp"
#include "cagt/hpl/perturbation.hpp"

namespace cagt {

/// Invertible degree-0 form g together with its inverse.
/// Either a constant matrix or 1 + n with n nilpotent (n^l = 0), so g⁻¹ is polynomial.
template <class F>
class GaugeElement {
 public:
  static GaugeElement constant(const FormContextPtr& ctx, const Mat<F>& g) {
    return GaugeElement(PolyForm<F>::constant(ctx, g), PolyForm<F>::constant(ctx, g.inverse()), true);
  }
  static GaugeElement identity(const FormContextPtr& ctx) { return constant(ctx, Mat<F>::identity(ctx->l)); }
  /// g = 1 + n for a 0-form n with n^l = 0.
  static GaugeElement unipotent(const PolyForm<F>& n) {
    const auto& ctx = n.context();
    if (!n.is_zero() && n.degree() != 0) throw StructuralError("GaugeElement: n must be a 0-form");
    const auto one = PolyForm<F>::identity(ctx);
    PolyForm<F> inv = one, pw = one;
    for (std::size_t k = 1; k < ctx->l; ++k) {
      pw = wedge(pw, n) * F(-1);
      inv += pw;
    }
    GaugeElement g(one + n, inv, n.is_zero());
    if (!(wedge(g.g_, g.inv_) == one)) throw StructuralError("GaugeElement: 1 + n is not unipotent (n^l ≠ 0)");
    return g;
  }

  const PolyForm<F>& g() const { return g_; }
  const PolyForm<F>& inverse_form() const { return inv_; }
  bool is_constant() const { return constant_; }
  GaugeElement inverse() const { return GaugeElement(inv_, g_, constant_); }
  friend GaugeElement operator*(const GaugeElement& a, const GaugeElement& b) {
    return GaugeElement(wedge(a.g_, b.g_), wedge(b.inv_, a.inv_), a.constant_ && b.constant_);
  }

 private:
  GaugeElement(PolyForm<F> g, PolyForm<F> inv, bool c) : g_(std::move(g)), inv_(std::move(inv)), constant_(c) {}
  PolyForm<F> g_, inv_;
  bool constant_;
};

/// g·γ = gγg⁻¹ + g dg⁻¹.
template <class F>
PolyForm<F> gauge_act(const PolyForm<F>& gamma, const GaugeElement<F>& g) {
  return wedge(wedge(g.g(), gamma), g.inverse_form()) + wedge(g.g(), exterior_derivative(g.inverse_form()));
}

/// dγ + γ∧γ.
template <class F>
PolyForm<F> curvature_form(const PolyForm<F>& gamma) {
  return exterior_derivative(gamma) + wedge(gamma, gamma);
}

/// Arrow (γ, g, γ′) of the gauge groupoid; construction checks γ′ = g·γ.
template <class F>
struct GaugeArrow {
  PolyForm<F> source;
  GaugeElement<F> g;
  PolyForm<F> target;

  static GaugeArrow make(const PolyForm<F>& gamma, const GaugeElement<F>& g) { return {gamma, g, gauge_act(gamma, g)}; }
  static GaugeArrow checked(const PolyForm<F>& gamma, const GaugeElement<F>& g, const PolyForm<F>& target) {
    if (!(gauge_act(gamma, g) == target)) throw StructuralError("GaugeArrow: target ≠ g·source");
    return {gamma, g, target};
  }
  /// (γ′, h, γ″) ∘ (γ, g, γ′) = (γ, hg, γ″).
  friend GaugeArrow compose(const GaugeArrow& second, const GaugeArrow& first) {
    if (!(second.source == first.target)) throw StructuralError("GaugeArrow: composing non-matching arrows");
    return {first.source, second.g * first.g, second.target};
  }
};

/// Per-key conjugation c(g): a ↦ g a g⁻¹ on form keys.
template <class F>
KeyOp<F> conjugation_op(const FormKeySpacePtr& fs, const GaugeElement<F>& g) {
  return KeyOp<F>([fs, g](Key k) {
    const auto& d = fs->data(k);
    PolyForm<F> w(fs->context());
    w.part(d.facet) = fs->local<F>(k);
    return fs->to_vec(wedge(wedge(g.g(), w), g.inverse_form()));
  });
}

/// Matrix-valued forms and cochains on one complex with Dupont's contraction, the
/// trace pairing and its lift to the tensor coalgebras.
template <class F>
struct SimplicialSetup {
  FormContextPtr ctx;
  FormKeySpacePtr fs;
  CochainKeySpacePtr cs;
  DgAlgebra<F> forms;
  DgAlgebra<F> cochains;
  DupontKeyMaps<F> maps;
  KeyContraction<F> key_contraction;
  Certificate certificate;
  LiftedContraction<F> lifted;
  std::shared_ptr<FormPairing<F>> pairing;     ///< Tr(AB)
  std::shared_ptr<FormPairing<F>> hs_pairing;  ///< Tr(ABᵀ)

  std::function<F(Key, Key)> pairing_fn() const {
    auto p = pairing;
    return [p](Key a, Key b) { return (*p)(a, b); };
  }
  std::size_t num_cochain_keys() const { return cs->size(); }
  KeyVec<F> to_vec(const PolyForm<F>& w) const { return fs->to_vec(w); }
};

/// Form keys E_rc λ^a dλ_I on every facet with canonical monomials of polynomial degree ≤ q.
template <class F>
std::vector<Key> probe_keys(const FormKeySpace& fs, int q) {
  const auto& K = *fs.context()->complex;
  const std::size_t l = fs.context()->l;
  std::vector<Key> out;
  for (std::size_t f = 0; f < K.num_facets(); ++f) {
    const std::size_t n = static_cast<std::size_t>(K.facet_dim(f));
    std::vector<Monomial> monos{Monomial{}};
    for (std::size_t v = 1; v <= n; ++v) {
      std::vector<Monomial> next;
      for (const auto& m : monos)
        for (int e = 0; m.poly_degree() + e <= q; ++e) {
          Monomial x = m;
          x.exps[v] = static_cast<std::uint8_t>(e);
          next.push_back(x);
        }
      monos = std::move(next);
    }
    for (const auto& m : monos)
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        Monomial x = m;
        x.mask = static_cast<std::uint8_t>(mask << 1);
        for (std::size_t r = 0; r < l; ++r)
          for (std::size_t c = 0; c < l; ++c)
            out.push_back(fs.intern({f, x, static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(c)}));
      }
  }
  return out;
}

/// Probe forms of polynomial degree ≤ q that are forms on K. On a single facet these are
/// the probe keys; with several facets, single-facet monomials do not agree on shared faces,
/// so the probes are E_rc λ^a dλ_I over the vertices of each facet, in global hat functions.
template <class F>
std::vector<TensorElem<F>> form_probes(const FormKeySpace& fs, int q) {
  const auto& ctx = fs.context();
  const auto& K = *ctx->complex;
  std::vector<TensorElem<F>> out;
  if (K.num_facets() == 1) {
    for (Key k : probe_keys<F>(fs, q)) out.push_back(TensorElem<F>::word({k}));
    return out;
  }
  std::set<std::vector<std::pair<Key, double>>> seen;
  for (std::size_t f = 0; f < K.num_facets(); ++f) {
    const auto& verts = K.facet(f);
    std::vector<PolyForm<F>> monos{PolyForm<F>::identity(ctx)};
    std::vector<int> degs{0};
    for (auto v : verts) {
      const std::size_t n = monos.size();
      for (std::size_t i = 0; i < n; ++i) {
        PolyForm<F> m = monos[i];
        for (int e = 1; degs[i] + e <= q; ++e) {
          m = wedge(m, PolyForm<F>::hat(ctx, static_cast<std::uint32_t>(v)));
          monos.push_back(m);
          degs.push_back(degs[i] + e);
        }
      }
    }
    for (const auto& m : monos)
      for (unsigned mask = 0; mask < (1u << verts.size()); ++mask) {
        PolyForm<F> w = m;
        for (std::size_t j = 0; j < verts.size(); ++j)
          if (mask & (1u << j)) w = wedge(w, PolyForm<F>::dhat(ctx, static_cast<std::uint32_t>(verts[j])));
        if (w.is_zero()) continue;
        for (std::size_t r = 0; r < ctx->l; ++r)
          for (std::size_t c = 0; c < ctx->l; ++c) {
            const auto v = fs.to_vec(w.mul_left(Mat<F>::unit(ctx->l, r, c)));
            std::vector<std::pair<Key, double>> sig;
            for (const auto& [k, x] : v) sig.emplace_back(k, ScalarTraits<F>::to_double(x));
            std::sort(sig.begin(), sig.end());
            if (sig.empty() || !seen.insert(sig).second) continue;
            out.push_back(TensorElem<F>::from_vec(v));
          }
      }
  }
  return out;
}

/// Builds forms, cochains and Dupont's contraction on K, certifies the contraction on
/// all cochain keys and on form probes of degree ≤ probe_degree, and lifts it.
template <class F>
SimplicialSetup<F> make_simplicial_setup(ComplexPtr complex, std::size_t l, int degree_cap = 20,
                                         HomotopyVariant variant = HomotopyVariant::dupont, int probe_degree = 2) {
  SimplicialSetup<F> s;
  s.ctx = make_form_context(complex, l, degree_cap, variant);
  s.fs = std::make_shared<const FormKeySpace>(s.ctx);
  s.cs = std::make_shared<const CochainKeySpace>(complex, l);
  s.forms = form_algebra<F>(s.fs);
  s.cochains = cochain_algebra<F>(s.cs);
  s.maps = dupont_key_maps<F>(s.fs, s.cs);
  s.key_contraction = {s.maps.p, s.maps.i, s.maps.h, s.maps.d_forms, s.maps.d_cochains, s.fs->degree_fn(),
                       s.cs->degree_fn()};
  std::vector<TensorElem<F>> big, small;
  big = form_probes<F>(*s.fs, probe_degree);
  for (Key k = 0; k < s.cs->size(); ++k) small.push_back(TensorElem<F>::word({k}));
  const double tol = ScalarTraits<F>::exact ? 0.0 : 1e-9;
  s.certificate = verify_special_contraction(key_contraction_ops(s.key_contraction), big, small, tol);
  s.pairing = std::make_shared<FormPairing<F>>(s.fs, TracePairing::trace);
  s.hs_pairing = std::make_shared<FormPairing<F>>(s.fs, TracePairing::hilbert_schmidt);
  if (s.certificate.granted) s.lifted = tensor_lift(s.key_contraction, s.certificate);
  return s;
}

/// Operator-norm bound min(‖T‖_F, sqrt(‖T‖_1 ‖T‖_∞)) of the matrix with the given columns.
template <class F>
double column_norm_bound(const std::vector<KeyVec<F>>& columns) {
  long double frob = 0.0L;
  double max_col = 0.0;
  std::unordered_map<Key, double> rows;
  for (const auto& col : columns) {
    double c1 = 0.0;
    for (const auto& [k, x] : col) {
      const double a = ScalarTraits<F>::abs_upper(x);
      frob += static_cast<long double>(a) * a;
      c1 += a;
      rows[k] += a;
    }
    max_col = std::max(max_col, c1);
  }
  double max_row = 0.0;
  for (const auto& [k, r] : rows) max_row = std::max(max_row, r);
  const double bound = std::min(static_cast<double>(std::sqrt(frob)), std::sqrt(max_col * max_row));
  return bound * (1.0 + 1e-12);
}

/// Key-level norm bounds for the gate, measured on form probes of degree ≤ q.
template <class F>
GateInputs gate_inputs(const SimplicialSetup<F>& s, const TaylorFamily<F>& delta1, std::size_t max_length, int q) {
  const auto probes = probe_keys<F>(*s.fs, q);
  std::vector<KeyVec<F>> h, ip, lin;
  for (Key k : probes) {
    h.push_back(s.maps.h(k));
    ip.push_back(s.maps.i.apply(s.maps.p(k)));
    lin.push_back(delta1.m(std::span<const Key>(&k, 1)));
  }
  std::vector<KeyVec<F>> prod;
  for (Key a : probes)
    for (Key b : probes) {
      const Key ab[2] = {a, b};
      try {
        auto v = delta1.m(std::span<const Key>(ab, 2));
        if (!v.empty()) prod.push_back(std::move(v));
      } catch (const DegreeCapError&) {
      }
    }
  GateInputs g;
  g.h = column_norm_bound<F>(h);
  g.ip = column_norm_bound<F>(ip);
  g.linear = column_norm_bound<F>(lin);
  g.product = column_norm_bound<F>(prod);
  g.curvature = TensorElem<F>::from_vec(delta1.m(std::span<const Key>())).norm();
  g.max_length = max_length;
  return g;
}

}  // namespace cagt
