#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "cagt/complex/cochain.hpp"
#include "cagt/complex/simplicial_complex.hpp"
#include "cagt/forms/local_form.hpp"

namespace cagt {

/// Which homotopy the contraction uses. Anything but `dupont` is a negative
/// control for the verification suites.
enum class HomotopyVariant { dupont, scaled, non_special };

/// Shared, read-only setting for all forms on one complex.
struct FormContext {
  ComplexPtr complex;
  std::size_t l = 1;
  int degree_cap = 20;
  HomotopyVariant homotopy = HomotopyVariant::dupont;
};

using FormContextPtr = std::shared_ptr<const FormContext>;

inline FormContextPtr make_form_context(ComplexPtr complex, std::size_t l, int degree_cap = 20,
                                        HomotopyVariant h = HomotopyVariant::dupont) {
  if (l == 0) throw StructuralError("FormContext: matrix size must be positive");
  return std::make_shared<const FormContext>(FormContext{std::move(complex), l, degree_cap, h});
}

/// Matrix-valued piecewise polynomial form: one canonical LocalForm per facet.
template <class F>
class PolyForm {
 public:
  using Traits = ScalarTraits<F>;

  explicit PolyForm(FormContextPtr ctx) : ctx_(std::move(ctx)) {
    const auto& K = *ctx_->complex;
    for (std::size_t f = 0; f < K.num_facets(); ++f)
      parts_.emplace_back(static_cast<std::size_t>(K.facet_dim(f)) + 1, ctx_->l, ctx_->degree_cap);
  }

  const FormContextPtr& context() const { return ctx_; }
  const ComplexPtr& complex() const { return ctx_->complex; }
  std::size_t matrix_size() const { return ctx_->l; }
  std::size_t num_parts() const { return parts_.size(); }
  const LocalForm<F>& part(std::size_t f) const { return parts_.at(f); }
  LocalForm<F>& part(std::size_t f) { return parts_.at(f); }

  bool is_zero() const {
    for (const auto& p : parts_)
      if (!p.is_zero()) return false;
    return true;
  }

  /// Form degree if homogeneous and nonzero.
  std::optional<int> degree() const {
    std::optional<int> d;
    for (const auto& p : parts_)
      for (const auto& [m, c] : p.terms()) {
        if (d && *d != m.form_degree()) return std::nullopt;
        d = m.form_degree();
      }
    return d;
  }

  int max_poly_degree() const {
    int d = 0;
    for (const auto& p : parts_)
      for (const auto& [m, c] : p.terms()) d = std::max(d, m.poly_degree());
    return d;
  }

  PolyForm& operator+=(const PolyForm& o) {
    check(o);
    for (std::size_t f = 0; f < parts_.size(); ++f) parts_[f] += o.parts_[f];
    return *this;
  }
  PolyForm& operator-=(const PolyForm& o) {
    check(o);
    for (std::size_t f = 0; f < parts_.size(); ++f) parts_[f] -= o.parts_[f];
    return *this;
  }
  PolyForm& operator*=(const F& s) {
    for (auto& p : parts_) p *= s;
    return *this;
  }
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(PolyForm a, const F& s) { return a *= s; }
  friend PolyForm operator*(const F& s, PolyForm a) { return a *= s; }
  friend bool operator==(const PolyForm& a, const PolyForm& b) { return a.ctx_ == b.ctx_ && a.parts_ == b.parts_; }

  PolyForm part_of_degree(int k) const { return map_parts([k](const LocalForm<F>& p) { return p.part(k); }); }
  PolyForm mul_left(const Mat<F>& m) const { return map_parts([&](const LocalForm<F>& p) { return p.mul_left(m); }); }
  PolyForm mul_right(const Mat<F>& m) const { return map_parts([&](const LocalForm<F>& p) { return p.mul_right(m); }); }

  template <class Fn>
  PolyForm map_parts(Fn&& fn) const {
    PolyForm out(ctx_);
    for (std::size_t f = 0; f < parts_.size(); ++f) out.parts_[f] = fn(parts_[f]);
    return out;
  }

  /// Restriction of the form to simplex σ (its own barycentric chart), read from the owner facet.
  LocalForm<F> restrict_to(int k, std::size_t idx) const {
    const auto& own = complex()->owner(k, idx);
    return parts_[own.facet].restrict_to(own.local);
  }

  /// Checks that all facet components agree on shared faces.
  bool is_compatible() const {
    const auto& K = *complex();
    for (int k = 0; k <= K.dim(); ++k)
      for (std::size_t idx = 0; idx < K.count(k); ++idx) {
        const auto& s = K.simplex(k, idx);
        std::optional<LocalForm<F>> ref;
        for (std::size_t f = 0; f < K.num_facets(); ++f) {
          auto loc = K.local_positions(f, s);
          if (!loc) continue;
          auto r = parts_[f].restrict_to(*loc);
          if (!ref) ref = std::move(r);
          else if (!(*ref == r)) return false;
        }
      }
    return true;
  }

  // Global generators.
  static PolyForm constant(const FormContextPtr& ctx, const Mat<F>& c) {
    PolyForm out(ctx);
    for (std::size_t f = 0; f < out.parts_.size(); ++f)
      out.parts_[f] = LocalForm<F>::constant(out.parts_[f].nvars(), c, ctx->degree_cap);
    return out;
  }
  static PolyForm identity(const FormContextPtr& ctx) { return constant(ctx, Mat<F>::identity(ctx->l)); }
  /// Piecewise-linear hat function λ_v (the barycentric coordinate of vertex v) times c.
  static PolyForm hat(const FormContextPtr& ctx, std::uint32_t v, const Mat<F>& c) {
    PolyForm out(ctx);
    for (auto [f, pos] : ctx->complex->facets_of_vertex(v))
      out.parts_[f] = LocalForm<F>::lambda(out.parts_[f].nvars(), ctx->l, pos, c, ctx->degree_cap);
    return out;
  }
  static PolyForm hat(const FormContextPtr& ctx, std::uint32_t v) { return hat(ctx, v, Mat<F>::identity(ctx->l)); }
  static PolyForm dhat(const FormContextPtr& ctx, std::uint32_t v, const Mat<F>& c) {
    PolyForm out(ctx);
    for (auto [f, pos] : ctx->complex->facets_of_vertex(v))
      out.parts_[f] = LocalForm<F>::dlambda(out.parts_[f].nvars(), ctx->l, pos, c, ctx->degree_cap);
    return out;
  }
  static PolyForm dhat(const FormContextPtr& ctx, std::uint32_t v) { return dhat(ctx, v, Mat<F>::identity(ctx->l)); }

  template <class G>
  PolyForm<G> convert(const std::shared_ptr<const FormContext>& ctx) const {
    PolyForm<G> out(ctx);
    for (std::size_t f = 0; f < parts_.size(); ++f)
      for (const auto& [m, c] : parts_[f].terms()) out.part(f).add(m, c.template convert<G>());
    return out;
  }

 private:
  void check(const PolyForm& o) const {
    if (o.ctx_ != ctx_) throw StructuralError("PolyForm: context mismatch");
  }

  FormContextPtr ctx_;
  std::vector<LocalForm<F>> parts_;
};

template <class F>
PolyForm<F> wedge(const PolyForm<F>& a, const PolyForm<F>& b) {
  if (a.context() != b.context()) throw StructuralError("wedge: context mismatch");
  PolyForm<F> out(a.context());
  for (std::size_t f = 0; f < a.num_parts(); ++f) out.part(f) = wedge(a.part(f), b.part(f));
  return out;
}

template <class F>
PolyForm<F> exterior_derivative(const PolyForm<F>& w) {
  return w.map_parts([](const LocalForm<F>& p) { return p.d(); });
}

/// Graded commutator [a, b] = ab - (-1)^{|a||b|} ba for homogeneous parts.
template <class F>
PolyForm<F> graded_commutator(const PolyForm<F>& a, const PolyForm<F>& b) {
  PolyForm<F> out(a.context());
  const int top = a.complex()->dim();
  for (int i = 0; i <= top; ++i) {
    const auto ai = a.part_of_degree(i);
    if (ai.is_zero()) continue;
    for (int j = 0; j <= top; ++j) {
      const auto bj = b.part_of_degree(j);
      if (bj.is_zero()) continue;
      out += wedge(ai, bj);
      if ((i * j) % 2 == 0) out -= wedge(bj, ai);
      else out += wedge(bj, ai);
    }
  }
  return out;
}

}  // namespace cagt
