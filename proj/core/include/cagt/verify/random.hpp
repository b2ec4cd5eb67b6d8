#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cagt/gauge/simplicial.hpp"

namespace cagt::gen {

/// Seeded generators for property checks. All draws go through one mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(integer(0, static_cast<long>(n) - 1)); }
  bool coin() { return integer(0, 1) == 1; }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }

  /// Small rational p/q with |p| ≤ 3, 1 ≤ q ≤ 3, as a scalar of the backend.
  template <class F>
  F small_scalar(bool nonzero = false) {
    long p = integer(-3, 3);
    while (nonzero && p == 0) p = integer(-3, 3);
    return ScalarTraits<F>::from_ratio(p, integer(1, 3));
  }

  template <class F>
  Mat<F> matrix(std::size_t l) {
    Mat<F> m(l);
    for (std::size_t r = 0; r < l; ++r)
      for (std::size_t c = 0; c < l; ++c) m(r, c) = small_scalar<F>();
    return m;
  }
  /// Strictly upper triangular.
  template <class F>
  Mat<F> nilpotent(std::size_t l, bool nonzero = true) {
    Mat<F> m(l);
    for (std::size_t r = 0; r < l; ++r)
      for (std::size_t c = r + 1; c < l; ++c) m(r, c) = small_scalar<F>();
    if (nonzero && l > 1 && m.is_zero()) m(0, l - 1) = ScalarTraits<F>::one();
    return m;
  }

  /// Σ c E_rc λ_{v_1}⋯λ_{v_j} ∧ dλ_w..., a random polynomial form of the given form degree.
  template <class F>
  PolyForm<F> form(const FormContextPtr& ctx, int degree, int terms = 3, int max_poly = 2) {
    const auto& K = *ctx->complex;
    PolyForm<F> out(ctx);
    for (int t = 0; t < terms; ++t) {
      Mat<F> e = Mat<F>::unit(ctx->l, index(ctx->l), index(ctx->l)) * small_scalar<F>(true);
      PolyForm<F> w = PolyForm<F>::constant(ctx, e);
      const int p = static_cast<int>(integer(0, max_poly));
      for (int i = 0; i < p; ++i) w = wedge(w, PolyForm<F>::hat(ctx, static_cast<std::uint32_t>(index(K.num_vertices()))));
      for (int i = 0; i < degree; ++i) w = wedge(w, PolyForm<F>::dhat(ctx, static_cast<std::uint32_t>(index(K.num_vertices()))));
      out += w;
    }
    return out;
  }

  /// Scalar polynomial 0-form f (times the identity).
  template <class F>
  PolyForm<F> function(const FormContextPtr& ctx, int terms = 3, int max_poly = 2) {
    const auto& K = *ctx->complex;
    PolyForm<F> out(ctx);
    for (int t = 0; t < terms; ++t) {
      PolyForm<F> w = PolyForm<F>::identity(ctx) * small_scalar<F>(true);
      const int p = static_cast<int>(integer(1, max_poly));
      for (int i = 0; i < p; ++i) w = wedge(w, PolyForm<F>::hat(ctx, static_cast<std::uint32_t>(index(K.num_vertices()))));
      out += w;
    }
    return out;
  }

  /// γ = N df with N strictly upper triangular: flat, and [γ, ·] is nilpotent.
  template <class F>
  PolyForm<F> flat_nilpotent_gamma(const FormContextPtr& ctx) {
    return exterior_derivative(function<F>(ctx)).mul_left(nilpotent<F>(ctx->l));
  }

  /// Constant unipotent 1 + N.
  template <class F>
  GaugeElement<F> constant_unipotent(const FormContextPtr& ctx) {
    return GaugeElement<F>::constant(ctx, Mat<F>::identity(ctx->l) + nilpotent<F>(ctx->l));
  }
  /// Non-constant unipotent 1 + N f.
  template <class F>
  GaugeElement<F> polynomial_unipotent(const FormContextPtr& ctx) {
    return GaugeElement<F>::unipotent(function<F>(ctx).mul_left(nilpotent<F>(ctx->l)));
  }

  /// Random word of the given length over keys [0, n).
  Word word(std::size_t len, std::size_t n) {
    Word w(len);
    for (auto& k : w) k = static_cast<Key>(index(n));
    return w;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cagt::gen
