#pragma once

#include <cstddef>
#include <memory>
#include <unordered_map>
#include <vector>

#include "cagt/ainfty/curved.hpp"
#include "cagt/forms/whitney.hpp"

namespace cagt {

/// Basis of matrix-valued cochains: key ↔ (degree k, simplex index, row, column).
class CochainKeySpace {
 public:
  struct Data {
    int degree;
    std::size_t simplex;
    std::size_t row, col;
  };

  CochainKeySpace(ComplexPtr complex, std::size_t l) : complex_(std::move(complex)), l_(l) {
    std::size_t off = 0;
    for (int k = 0; k <= complex_->dim(); ++k) {
      offset_.push_back(off);
      off += complex_->count(k) * l_ * l_;
    }
    offset_.push_back(off);
  }

  const ComplexPtr& complex() const { return complex_; }
  std::size_t matrix_size() const { return l_; }
  std::size_t size() const { return offset_.back(); }

  Key key(int k, std::size_t idx, std::size_t r, std::size_t c) const {
    return static_cast<Key>(offset_.at(static_cast<std::size_t>(k)) + (idx * l_ + r) * l_ + c);
  }
  Data data(Key key) const {
    int k = 0;
    while (offset_[static_cast<std::size_t>(k) + 1] <= key) ++k;
    std::size_t rest = key - offset_[static_cast<std::size_t>(k)];
    const std::size_t c = rest % l_;
    rest /= l_;
    return {k, rest / l_, rest % l_, c};
  }
  int degree(Key key) const { return data(key).degree; }
  DegreeFn degree_fn() const {
    return [this](Key k) { return degree(k); };
  }

  /// Unsuspended graded basis with readable labels.
  BasisPtr basis() const {
    std::vector<int> deg;
    std::vector<std::string> lab;
    for (Key k = 0; k < size(); ++k) {
      const auto d = data(k);
      std::string s;
      for (auto v : complex_->simplex(d.degree, d.simplex)) s += std::to_string(v);
      deg.push_back(d.degree);
      lab.push_back("c" + s + (l_ > 1 ? "E" + std::to_string(d.row) + std::to_string(d.col) : ""));
    }
    return make_basis(std::move(deg), std::move(lab));
  }

  template <class F>
  KeyVec<F> to_vec(const Cochain<F>& c) const {
    KeyVec<F> out;
    for (std::size_t idx = 0; idx < c.size(); ++idx)
      for (std::size_t r = 0; r < l_; ++r)
        for (std::size_t col = 0; col < l_; ++col) add_to(out, key(c.degree(), idx, r, col), c[idx](r, col));
    return out;
  }
  template <class F>
  Cochain<F> to_cochain(const KeyVec<F>& v, int degree) const {
    Cochain<F> out(complex_, l_, degree);
    for (const auto& [k, x] : v) {
      const auto d = data(k);
      if (d.degree != degree) throw StructuralError("CochainKeySpace: mixed degrees");
      out[d.simplex](d.row, d.col) += x;
    }
    return out;
  }

 private:
  ComplexPtr complex_;
  std::size_t l_;
  std::vector<std::size_t> offset_;
};

/// Interned basis of per-facet forms: key ↔ E_{rc} λ^a dλ_I on one facet (canonical monomial).
/// Piecewise forms are sums of such keys over facets.
class FormKeySpace {
 public:
  struct Data {
    std::size_t facet;
    Monomial mono;
    std::uint8_t row, col;
    friend bool operator==(const Data&, const Data&) = default;
  };

  explicit FormKeySpace(FormContextPtr ctx) : ctx_(std::move(ctx)) {}

  const FormContextPtr& context() const { return ctx_; }
  std::size_t size() const { return data_.size(); }

  Key intern(const Data& d) const {
    auto it = index_.find(d);
    if (it != index_.end()) return it->second;
    const Key k = static_cast<Key>(data_.size());
    data_.push_back(d);
    index_.emplace(d, k);
    return k;
  }
  const Data& data(Key k) const { return data_.at(k); }
  int degree(Key k) const { return data_[k].mono.form_degree(); }
  DegreeFn degree_fn() const {
    return [this](Key k) { return degree(k); };
  }

  template <class F>
  KeyVec<F> local_to_vec(std::size_t facet, const LocalForm<F>& f) const {
    KeyVec<F> out;
    for (const auto& [m, c] : f.terms())
      for (std::size_t r = 0; r < c.size(); ++r)
        for (std::size_t col = 0; col < c.size(); ++col)
          add_to(out, intern({facet, m, static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(col)}), c(r, col));
    return out;
  }
  template <class F>
  KeyVec<F> to_vec(const PolyForm<F>& w) const {
    KeyVec<F> out;
    for (std::size_t f = 0; f < w.num_parts(); ++f)
      for (const auto& [k, c] : local_to_vec(f, w.part(f))) out.emplace(k, c);
    return out;
  }
  template <class F>
  PolyForm<F> to_form(const KeyVec<F>& v) const {
    PolyForm<F> out(ctx_);
    for (const auto& [k, x] : v) {
      const auto& d = data(k);
      Mat<F> m(ctx_->l);
      m(d.row, d.col) = x;
      out.part(d.facet).add(d.mono, m);
    }
    return out;
  }
  /// Single-key form on its facet.
  template <class F>
  LocalForm<F> local(Key k) const {
    const auto& d = data(k);
    LocalForm<F> f(static_cast<std::size_t>(ctx_->complex->facet_dim(d.facet)) + 1, ctx_->l, ctx_->degree_cap);
    f.add(d.mono, Mat<F>::unit(ctx_->l, d.row, d.col));
    return f;
  }

 private:
  struct DataHash {
    std::size_t operator()(const Data& d) const noexcept {
      std::uint64_t h = d.facet * 1000003u + d.mono.mask * 131u + d.row * 7u + d.col;
      for (auto e : d.mono.exps) h = h * 31u + e;
      return static_cast<std::size_t>(h);
    }
  };
  FormContextPtr ctx_;
  mutable std::vector<Data> data_;
  mutable std::unordered_map<Data, Key, DataHash> index_;
};

using FormKeySpacePtr = std::shared_ptr<const FormKeySpace>;
using CochainKeySpacePtr = std::shared_ptr<const CochainKeySpace>;

/// Wedge of two form keys: zero unless they live on the same facet and the matrix units chain.
template <class F>
KeyVec<F> wedge_keys(const FormKeySpace& s, Key a, Key b) {
  const auto& x = s.data(a);
  const auto& y = s.data(b);
  if (x.facet != y.facet || x.col != y.row) return {};
  const int sg = wedge_sign(x.mono.mask, y.mono.mask);
  if (sg == 0) return {};
  FormKeySpace::Data z{x.facet, {}, x.row, y.col};
  for (std::size_t v = 0; v < kMaxVars; ++v) z.mono.exps[v] = x.mono.exps[v] + y.mono.exps[v];
  z.mono.mask = x.mono.mask | y.mono.mask;
  if (z.mono.poly_degree() > s.context()->degree_cap)
    throw DegreeCapError("polynomial degree " + std::to_string(z.mono.poly_degree()) + " exceeds cap " +
                         std::to_string(s.context()->degree_cap));
  return {{s.intern(z), sg > 0 ? ScalarTraits<F>::one() : -ScalarTraits<F>::one()}};
}

/// The dg algebra of piecewise polynomial forms Ω•(K, M_l) on interned keys.
template <class F>
DgAlgebra<F> form_algebra(const FormKeySpacePtr& s) {
  DgAlgebra<F> a;
  a.degree = [s](Key k) { return s->degree(k); };
  auto d = std::make_shared<KeyOp<F>>([s](Key k) {
    const auto& dd = s->data(k);
    return s->local_to_vec(dd.facet, s->local<F>(k).d());
  });
  a.d = [d](Key k) { return (*d)(k); };
  a.product = [s](Key x, Key y) { return wedge_keys<F>(*s, x, y); };
  a.unit = s->to_vec(PolyForm<F>::identity(s->context()));
  return a;
}

/// The dg algebra of cochains with the Alexander–Whitney cup product.
template <class F>
DgAlgebra<F> cochain_algebra(const CochainKeySpacePtr& s) {
  DgAlgebra<F> a;
  a.degree = [s](Key k) { return s->degree(k); };
  const std::size_t l = s->matrix_size();
  a.d = [s, l](Key k) {
    const auto d = s->data(k);
    auto c = Cochain<F>::indicator(s->complex(), l, d.degree, d.simplex, Mat<F>::unit(l, d.row, d.col));
    if (d.degree == s->complex()->dim()) return KeyVec<F>{};
    return s->to_vec(coboundary(c));
  };
  a.product = [s, l](Key x, Key y) {
    const auto dx = s->data(x), dy = s->data(y);
    if (dx.degree + dy.degree > s->complex()->dim() || dx.col != dy.row) return KeyVec<F>{};
    const auto& K = *s->complex();
    const auto& sx = K.simplex(dx.degree, dx.simplex);
    const auto& sy = K.simplex(dy.degree, dy.simplex);
    if (sx.back() != sy.front()) return KeyVec<F>{};
    Simplex joined = sx;
    joined.insert(joined.end(), sy.begin() + 1, sy.end());
    for (std::size_t i = 0; i + 1 < joined.size(); ++i)
      if (joined[i] >= joined[i + 1]) return KeyVec<F>{};
    auto idx = K.find(joined);
    if (!idx) return KeyVec<F>{};
    return KeyVec<F>{{s->key(dx.degree + dy.degree, *idx, dx.row, dy.col), ScalarTraits<F>::one()}};
  };
  a.unit = s->to_vec(Cochain<F>::constant(s->complex(), Mat<F>::identity(l)));
  return a;
}

/// Key-level maps of Dupont's contraction between forms and cochains.
template <class F>
struct DupontKeyMaps {
  KeyOp<F> p;  ///< forms → cochains
  KeyOp<F> i;  ///< cochains → forms
  KeyOp<F> h;  ///< forms → forms, degree −1
  KeyOp<F> d_forms;
  KeyOp<F> d_cochains;
};

template <class F>
DupontKeyMaps<F> dupont_key_maps(const FormKeySpacePtr& fs, const CochainKeySpacePtr& cs) {
  const auto& ctx = fs->context();
  DupontKeyMaps<F> m;
  m.p = KeyOp<F>([fs, cs](Key k) {
    const auto& d = fs->data(k);
    PolyForm<F> w(fs->context());
    w.part(d.facet) = fs->local<F>(k);
    return cs->to_vec(derham_map(w, d.mono.form_degree()));
  });
  m.i = KeyOp<F>([fs, cs, ctx](Key k) {
    const auto d = cs->data(k);
    const auto c = Cochain<F>::indicator(cs->complex(), cs->matrix_size(), d.degree, d.simplex,
                                         Mat<F>::unit(cs->matrix_size(), d.row, d.col));
    return fs->to_vec(whitney_map(ctx, c));
  });
  m.h = KeyOp<F>(
      [fs](Key k) {
        const auto& d = fs->data(k);
        PolyForm<F> w(fs->context());
        w.part(d.facet) = fs->local<F>(k);
        return fs->to_vec(dupont_homotopy(w));
      },
      -1);
  const auto alg = form_algebra<F>(fs);
  m.d_forms = KeyOp<F>(alg.d, 1);
  const auto calg = cochain_algebra<F>(cs);
  m.d_cochains = KeyOp<F>(calg.d, 1);
  return m;
}

/// Pairing of form keys: ∫ Tr(E_a E_b) λ^{a+b} g(dλ_I, dλ_K) dvol on a shared facet.
template <class F>
class FormPairing {
 public:
  FormPairing(FormKeySpacePtr s, TracePairing mode = TracePairing::trace)
      : s_(std::move(s)), mode_(mode), scalar_ctx_(make_form_context(s_->context()->complex, 1, 4 * s_->context()->degree_cap + 8)) {}

  F operator()(Key a, Key b) const {
    const auto& x = s_->data(a);
    const auto& y = s_->data(b);
    if (x.facet != y.facet || x.mono.form_degree() != y.mono.form_degree()) return ScalarTraits<F>::zero();
    const bool matched = mode_ == TracePairing::trace ? (x.col == y.row && x.row == y.col) : (x.row == y.row && x.col == y.col);
    if (!matched) return ScalarTraits<F>::zero();
    const auto key = std::make_tuple(x.facet, x.mono, y.mono);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const F val = scalar_pairing(x.facet, x.mono, y.mono);
    cache_.emplace(key, val);
    return val;
  }

 private:
  F scalar_pairing(std::size_t facet, const Monomial& a, const Monomial& b) const {
    PolyForm<F> u(scalar_ctx_), v(scalar_ctx_);
    u.part(facet).add(a, Mat<F>::identity(1));
    v.part(facet).add(b, Mat<F>::identity(1));
    return form_inner_product(u, v);
  }

  FormKeySpacePtr s_;
  TracePairing mode_;
  FormContextPtr scalar_ctx_;
  mutable std::map<std::tuple<std::size_t, Monomial, Monomial>, F> cache_;
};

}  // namespace cagt
