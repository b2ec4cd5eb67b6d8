#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cagt/algebra/graded.hpp"
#include "cagt/coalgebra/tensor.hpp"

namespace cagt {

/// Unsuspended Taylor data: maps m_k: V^{⊗k} → V' of degree `base_degree − k`
/// (base_degree 2 for A∞-structures, 1 for morphisms), evaluated on basis keys.
template <class F>
struct TaylorFamily {
  using Fn = std::function<KeyVec<F>(std::span<const Key>)>;
  int min_arity = 0;
  int max_arity = 0;
  int base_degree = 2;
  Fn m;
  /// Unsuspended degree of source keys.
  DegreeFn degree;
  /// Unsuspended degree of target keys; defaults to `degree`.
  DegreeFn target_degree;

  const DegreeFn& out_degree() const { return target_degree ? target_degree : degree; }
};

/// Suspended Taylor data b_k: (sV)^{⊗k} → sV', of a fixed degree (1 or 0).
template <class F>
struct SuspendedTaylor {
  int min_arity = 0;
  int max_arity = 0;
  int degree = 1;
  TaylorFamily<F> base;
  KeyVec<F> operator()(std::span<const Key> args) const;
};

/// The suspension sign: s^{⊗k}(a_1 ⊗ ... ⊗ a_k) = (-1)^{Σ_i (k-i)|a_i|} sa_1 ⊗ ... ⊗ sa_k.
/// This and `SuspendedTaylor::operator()` are the only places where suspension signs enter.
inline bool suspension_sign_odd(std::span<const Key> args, const DegreeFn& degree) {
  const std::size_t k = args.size();
  int e = 0;
  for (std::size_t i = 0; i < k; ++i) e += static_cast<int>(k - 1 - i) * degree(args[i]);
  return e % 2 != 0;
}

/// b_k(sa) = ± s m_k(a). For coderivations the curvature enters as b_0 = −s m_0,
/// which makes D² = 0 equivalent to the relations with m_1m_1 = m_2(m_0⊗1) − m_2(1⊗m_0).
template <class F>
KeyVec<F> SuspendedTaylor<F>::operator()(std::span<const Key> args) const {
  KeyVec<F> v = base.m(args);
  bool neg = suspension_sign_odd(args, base.degree);
  if (degree == 1 && args.empty()) neg = !neg;
  if (neg)
    for (auto& [k, c] : v) c = -c;
  return v;
}

template <class F>
SuspendedTaylor<F> suspend_coderivation(TaylorFamily<F> t) {
  if (t.base_degree != 2) throw StructuralError("suspend_coderivation: Taylor maps must have degree 2 - k");
  return SuspendedTaylor<F>{t.min_arity, t.max_arity, 1, std::move(t)};
}

template <class F>
SuspendedTaylor<F> suspend_morphism(TaylorFamily<F> t) {
  if (t.base_degree != 1) throw StructuralError("suspend_morphism: Taylor maps must have degree 1 - k");
  if (t.min_arity < 1) throw StructuralError("suspend_morphism: morphisms have no arity-0 component");
  return SuspendedTaylor<F>{t.min_arity, t.max_arity, 0, std::move(t)};
}

/// Extension of b to a coderivation of T(sV):
///   D(sa_1..sa_n) = Σ (-1)^{Σ_{i≤r}|sa_i|} sa_1..sa_r ⊗ b_k(sa_{r+1}..sa_{r+k}) ⊗ sa_{r+k+1}..sa_n.
/// Output words longer than `max_len` are dropped and reported through `overflow`.
template <class F>
TensorElem<F> apply_coderivation(const SuspendedTaylor<F>& b, const TensorElem<F>& x, std::size_t max_len = SIZE_MAX,
                                 bool* overflow = nullptr, bool flip_koszul = false) {
  if (b.degree != 1) throw StructuralError("apply_coderivation: Taylor data is not a coderivation");
  const auto& deg = b.base.degree;
  TensorElem<F> out;
  Word buf;
  for (const auto& [w, c] : x.terms()) {
    const std::size_t n = w.size();
    int passed = 0;  // Σ_{i≤r} |sa_i|
    for (std::size_t r = 0; r <= n; ++r) {
      const bool neg = flip_koszul ? false : passed % 2 != 0;
      for (int k = b.min_arity; k <= b.max_arity && r + static_cast<std::size_t>(k) <= n; ++k) {
        const std::size_t len = n - static_cast<std::size_t>(k) + 1;
        const auto v = b(std::span<const Key>(w.data() + r, static_cast<std::size_t>(k)));
        if (v.empty()) continue;
        if (len > max_len) {
          if (overflow) *overflow = true;
          continue;
        }
        buf.assign(w.begin(), w.begin() + static_cast<long>(r));
        buf.push_back(0);
        buf.insert(buf.end(), w.begin() + static_cast<long>(r) + k, w.end());
        for (const auto& [key, cv] : v) {
          buf[r] = key;
          out.add(buf, neg ? F(-(c * cv)) : F(c * cv));
        }
      }
      if (r < n) passed += deg(w[r]) - 1;
    }
  }
  return out;
}

/// Extension of f to a coalgebra morphism: F(w) = Σ_{i_1+..+i_q=n} f_{i_1}(..) ⊗ ... ⊗ f_{i_q}(..), F(1) = 1.
template <class F>
TensorElem<F> apply_morphism(const SuspendedTaylor<F>& f, const TensorElem<F>& x, std::size_t max_len = SIZE_MAX) {
  if (f.degree != 0) throw StructuralError("apply_morphism: Taylor data is not a morphism");
  TensorElem<F> out;
  for (const auto& [w, c] : x.terms()) {
    const std::size_t n = w.size();
    if (n == 0) {
      out.add(w, c);
      continue;
    }
    // partial[j]: contributions covering w[0..j).
    std::vector<TensorElem<F>> partial(n + 1);
    partial[0].add(Word{}, c);
    for (std::size_t j = 0; j < n; ++j) {
      if (partial[j].is_zero()) continue;
      for (int k = std::max(1, f.min_arity); k <= f.max_arity && j + static_cast<std::size_t>(k) <= n; ++k) {
        const auto v = f(std::span<const Key>(w.data() + j, static_cast<std::size_t>(k)));
        if (v.empty()) continue;
        auto& dst = partial[j + static_cast<std::size_t>(k)];
        for (const auto& [pw, pc] : partial[j].terms()) {
          if (pw.size() + 1 > max_len) continue;
          Word nw = pw;
          nw.push_back(0);
          for (const auto& [key, cv] : v) {
            nw.back() = key;
            dst.add(nw, pc * cv);
          }
        }
      }
    }
    out += partial[n];
  }
  return out;
}

/// Inverse of the suspension: recovers unsuspended Taylor values from b.
template <class F>
KeyVec<F> desuspend_value(const SuspendedTaylor<F>& b, std::span<const Key> args, KeyVec<F> v) {
  bool neg = suspension_sign_odd(args, b.base.degree);
  if (b.degree == 1 && args.empty()) neg = !neg;
  if (neg)
    for (auto& [k, c] : v) c = -c;
  return v;
}

// ---------------------------------------------------------------------------
// Finite bases: Taylor data as GradedMaps and assembled blocks.

/// Index of a word in the mixed-radix tensor basis of (sV)^{⊗n}.
inline std::size_t word_index(const Word& w, std::size_t dim) {
  std::size_t idx = 0;
  for (Key k : w) idx = idx * dim + k;
  return idx;
}
inline Word index_word(std::size_t idx, std::size_t n, std::size_t dim) {
  Word w(n);
  for (std::size_t i = n; i-- > 0;) {
    w[i] = static_cast<Key>(idx % dim);
    idx /= dim;
  }
  return w;
}

/// V^{⊗k} for an unsuspended basis.
inline BasisPtr tensor_power_basis(const BasisPtr& v, std::size_t k) { return tensor_basis(std::vector<BasisPtr>(k, v)); }

/// Taylor family whose k-th map is maps[k] (source V^{⊗k}, target V'); missing or
/// empty entries are zero.
template <class F>
TaylorFamily<F> taylor_from_maps(const std::vector<std::optional<GradedMap<F>>>& maps, const BasisPtr& v, const BasisPtr& vt,
                                 int base_degree) {
  TaylorFamily<F> t;
  t.base_degree = base_degree;
  t.min_arity = base_degree == 2 ? 0 : 1;
  t.max_arity = static_cast<int>(maps.size()) - 1;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (!maps[k]) continue;
    const auto& m = *maps[k];
    if (m.degree() != base_degree - static_cast<int>(k))
      throw StructuralError("Taylor map of arity " + std::to_string(k) + " has degree " + std::to_string(m.degree()) +
                            ", expected " + std::to_string(base_degree - static_cast<int>(k)));
    if (m.source()->size() != tensor_power_basis(v, k)->size() || !same_basis(m.target(), vt))
      throw StructuralError("Taylor map of arity " + std::to_string(k) + " has the wrong shape");
  }
  auto shared = std::make_shared<std::vector<std::optional<GradedMap<F>>>>(maps);
  const std::size_t dim = v->size();
  t.m = [shared, dim](std::span<const Key> args) {
    KeyVec<F> out;
    const auto& slot = (*shared)[args.size()];
    if (!slot) return out;
    const auto& col = slot->column(word_index(Word(args.begin(), args.end()), dim));
    for (const auto& [r, c] : col) out.emplace(static_cast<Key>(r), c);
    return out;
  };
  t.degree = [v](Key k) { return v->degrees[k]; };
  t.target_degree = [vt](Key k) { return vt->degrees[k]; };
  return t;
}

/// Block X_{n,k}: (sV)^{⊗k} → (sV')^{⊗n} of an operator on T(sV) evaluated on basis words.
template <class F>
GradedMap<F> operator_block(const std::function<TensorElem<F>(const TensorElem<F>&)>& op, const BasisPtr& sv,
                            const BasisPtr& svt, std::size_t n, std::size_t k, int degree) {
  const BasisPtr src = tensor_power_basis(sv, k), tgt = tensor_power_basis(svt, n);
  GradedMap<F> out(src, tgt, degree);
  for (std::size_t col = 0; col < src->size(); ++col) {
    const auto y = op(TensorElem<F>::word(index_word(col, k, sv->size())));
    for (const auto& [w, c] : y.terms())
      if (w.size() == n) out.add(word_index(w, svt->size()), col, c);
  }
  return out;
}

/// All blocks D_{n,k}, 0 ≤ n, k ≤ N, of the coderivation with Taylor data b.
template <class F>
std::vector<std::vector<GradedMap<F>>> assemble_coderivation(const SuspendedTaylor<F>& b, const BasisPtr& v, std::size_t N,
                                                             bool flip_koszul = false) {
  const BasisPtr sv = std::make_shared<const GradedBasis>(v->suspended());
  std::vector<std::vector<GradedMap<F>>> blocks;
  for (std::size_t n = 0; n <= N; ++n) {
    blocks.emplace_back();
    for (std::size_t k = 0; k <= N; ++k)
      blocks.back().push_back(operator_block<F>(
          [&](const TensorElem<F>& x) { return apply_coderivation(b, x, SIZE_MAX, nullptr, flip_koszul); }, sv, sv, n, k, 1));
  }
  return blocks;
}

/// All blocks F_{n,k}, 0 ≤ n, k ≤ N, of the morphism with Taylor data f.
template <class F>
std::vector<std::vector<GradedMap<F>>> assemble_morphism(const SuspendedTaylor<F>& f, const BasisPtr& v, const BasisPtr& vt,
                                                         std::size_t N) {
  const BasisPtr sv = std::make_shared<const GradedBasis>(v->suspended());
  const BasisPtr svt = std::make_shared<const GradedBasis>(vt->suspended());
  std::vector<std::vector<GradedMap<F>>> blocks;
  for (std::size_t n = 0; n <= N; ++n) {
    blocks.emplace_back();
    for (std::size_t k = 0; k <= N; ++k)
      blocks.back().push_back(
          operator_block<F>([&](const TensorElem<F>& x) { return apply_morphism(f, x); }, sv, svt, n, k, 0));
  }
  return blocks;
}

/// Recovers the unsuspended Taylor maps m_k (k ≤ N) from the blocks X_{1,k}.
template <class F>
std::vector<std::optional<GradedMap<F>>> disassemble(const std::vector<std::vector<GradedMap<F>>>& blocks, const BasisPtr& v,
                                                     const BasisPtr& vt, int base_degree) {
  std::vector<std::optional<GradedMap<F>>> maps;
  const DegreeFn deg = [v](Key k) { return v->degrees[k]; };
  for (std::size_t k = base_degree == 2 ? 0 : 1; k < blocks.at(1).size(); ++k) {
    while (maps.size() < k) maps.emplace_back();
    const auto& blk = blocks[1][k];
    const BasisPtr src = tensor_power_basis(v, k);
    GradedMap<F> m(src, vt, base_degree - static_cast<int>(k));
    for (std::size_t col = 0; col < src->size(); ++col) {
      const Word w = index_word(col, k, v->size());
      bool neg = suspension_sign_odd(w, deg);
      if (base_degree == 2 && k == 0) neg = !neg;
      for (const auto& [r, c] : blk.column(col)) m.add(r, col, neg ? -c : c);
    }
    maps.emplace_back(std::move(m));
  }
  return maps;
}

/// Block product (X Y)_{n,k} = Σ_j X_{n,j} Y_{j,k}; `determined` is false when
/// some j beyond the truncation could contribute.
template <class F>
GradedMap<F> block_product(const std::vector<std::vector<GradedMap<F>>>& x, const std::vector<std::vector<GradedMap<F>>>& y,
                           std::size_t n, std::size_t k) {
  std::optional<GradedMap<F>> acc;
  for (std::size_t j = 0; j < y.size(); ++j) {
    auto term = compose(x[n][j], y[j][k]);
    if (!acc) acc = std::move(term);
    else *acc += term;
  }
  return *acc;
}

// ---------------------------------------------------------------------------
// Composition of morphisms from Taylor data.

namespace detail {

template <class Fn>
void compositions_rec(std::size_t rest, std::size_t max_part, std::vector<std::size_t>& parts, Fn& fn) {
  if (rest == 0) {
    fn(parts);
    return;
  }
  for (std::size_t i = 1; i <= rest && i <= max_part; ++i) {
    parts.push_back(i);
    compositions_rec(rest - i, max_part, parts, fn);
    parts.pop_back();
  }
}

/// Calls fn(parts) for every composition i_1 + .. + i_q = p with parts ≤ max_part.
template <class Fn>
void for_each_composition(std::size_t p, std::size_t max_part, Fn&& fn) {
  std::vector<std::size_t> parts;
  compositions_rec(p, max_part, parts, fn);
}

}  // namespace detail

/// Sign exponent attached to the summand G_q(F_{i_1} ⊗ .. ⊗ F_{i_q}) of a composite.
enum class CompositionSign {
  /// w = Σ_ℓ (q − ℓ)(1 − i_ℓ): the sign induced by the suspension used for assembly.
  suspension,
  /// w = Σ_{2≤ℓ≤q} (1 − i_ℓ) Σ_{k<ℓ} i_k: the classical closed form, which disagrees
  /// with block composition under this suspension from arity 3 on.
  classical,
};

/// Taylor coefficients of G ∘ F:
///   (GF)_p = Σ_{q, i_1+..+i_q = p} (-1)^w G_q (F_{i_1} ⊗ .. ⊗ F_{i_q}),
/// with the tensor product of the F's evaluated by the Koszul rule and w as selected.
template <class F>
TaylorFamily<F> compose_morphisms(const TaylorFamily<F>& g, const TaylorFamily<F>& f, int max_arity,
                                  CompositionSign convention = CompositionSign::suspension) {
  if (g.base_degree != 1 || f.base_degree != 1) throw StructuralError("compose_morphisms: inputs must be morphisms");
  TaylorFamily<F> out;
  out.base_degree = 1;
  out.min_arity = 1;
  out.max_arity = max_arity;
  out.degree = f.degree;
  out.target_degree = g.out_degree();
  out.m = [g, f, convention](std::span<const Key> args) {
    KeyVec<F> result;
    const std::size_t p = args.size();
    const auto& fdeg = f.degree;
    detail::for_each_composition(p, static_cast<std::size_t>(f.max_arity), [&](const std::vector<std::size_t>& parts) {
      {
        const std::size_t q = parts.size();
        if (static_cast<int>(q) > g.max_arity) return;
        long w = 0, before = 0;
        for (std::size_t l = 0; l < q; ++l) {
          const long lowered = 1 - static_cast<long>(parts[l]);
          if (convention == CompositionSign::suspension) w += static_cast<long>(q - 1 - l) * lowered;
          else if (l > 0) w += lowered * before;
          before += static_cast<long>(parts[l]);
        }
        // (F_{i_1} ⊗ .. ⊗ F_{i_q})(a_1..a_p) with Koszul signs: F_{i_l} has degree 1 − i_l
        // and passes the arguments a_1..a_{i_1+..+i_{l-1}}.
        std::vector<KeyVec<F>> outs;
        long kz = 0;
        std::size_t pos = 0;
        int passed_deg = 0;
        for (std::size_t l = 0; l < q; ++l) {
          kz += (1 - static_cast<long>(parts[l])) * passed_deg;
          outs.push_back(f.m(args.subspan(pos, parts[l])));
          if (outs.back().empty()) return;
          for (std::size_t t = 0; t < parts[l]; ++t) passed_deg += fdeg(args[pos + t]);
          pos += parts[l];
        }
        const bool neg = ((w + kz) % 2 + 2) % 2 != 0;
        // Expand the product and apply G_q.
        std::vector<std::pair<Word, F>> acc{{Word{}, neg ? -ScalarTraits<F>::one() : ScalarTraits<F>::one()}};
        for (const auto& o : outs) {
          std::vector<std::pair<Word, F>> next;
          for (const auto& [aw, ac] : acc)
            for (const auto& [k, c] : o) {
              Word nw = aw;
              nw.push_back(k);
              next.emplace_back(std::move(nw), ac * c);
            }
          acc = std::move(next);
        }
        for (const auto& [aw, ac] : acc)
          for (const auto& [k, c] : g.m(aw)) add_to(result, k, ac * c);
      }
    });
    return result;
  };
  return out;
}

/// ⟨x, y⟩ = Σ_words x_w y_v Π_i ⟨w_i, v_i⟩ over words of equal length; ⟨1, 1⟩ = 1.
template <class F>
F coalgebra_pairing(const TensorElem<F>& x, const TensorElem<F>& y, const std::function<F(Key, Key)>& base) {
  F total = ScalarTraits<F>::zero();
  std::map<std::size_t, std::vector<std::pair<const Word*, F>>> by_len;
  for (const auto& [w, c] : y.terms()) by_len[w.size()].emplace_back(&w, c);
  for (const auto& [w, c] : x.terms()) {
    auto it = by_len.find(w.size());
    if (it == by_len.end()) continue;
    for (const auto& [v, d] : it->second) {
      F prod = c * d;
      for (std::size_t i = 0; i < w.size() && !ScalarTraits<F>::is_zero(prod); ++i) prod = prod * base(w[i], (*v)[i]);
      total += prod;
    }
  }
  return total;
}

}  // namespace cagt
