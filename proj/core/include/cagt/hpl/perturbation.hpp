#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cagt/hpl/contraction.hpp"

namespace cagt {

/// Key-level norm bounds entering the convergence gate.
struct GateInputs {
  double h = 0.0;       ///< ‖H‖
  double ip = 0.0;      ///< ‖ip‖
  double linear = 0.0;  ///< ‖δ₁‖ restricted to arity 1 (e.g. [γ, ·])
  double product = 0.0; ///< ‖m_2‖ as a map V ⊗ V → V
  double curvature = 0.0;  ///< ‖m_0(1)‖
  std::size_t max_length = 4;
};

/// Result of the convergence gate: a nonnegative majorant M of δ₁T(H) acting on the
/// tensor-length grading 0..N, with ‖(δ₁T(H))^k‖ ≤ ‖M^k‖_F.
struct GateReport {
  std::vector<std::vector<double>> majorant;
  double ratio = 0.0;         ///< upper bound on the spectral radius: min_k ‖M^k‖_F^{1/k}
  double delta1_norm = 0.0;   ///< Frobenius bound of the δ₁ majorant
  double frobenius = 0.0;     ///< ‖M‖_F, the plain norm bound
  std::string offending;      ///< the dominating block when the gate fails
  bool passed() const { return ratio < 1.0; }
};

namespace detail {

using Dense = std::vector<std::vector<double>>;

inline Dense dense_mul(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0.0)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline double frobenius(const Dense& a) {
  double s = 0.0;
  for (const auto& row : a)
    for (double x : row) s += x * x;
  return std::sqrt(s) * (1.0 + 1e-14);
}

}  // namespace detail

/// Builds the length majorant from key-level bounds. On length n, T(H) is bounded by
/// τ_n = ‖H‖ Σ_{r<n} ‖ip‖^r and δ₁ sends n → n+1, n, n−1 with bounds (n+1)‖m_0‖, n‖δ₁^lin‖, (n−1)‖m_2‖.
inline GateReport convergence_gate(const GateInputs& g) {
  const std::size_t N = g.max_length;
  detail::Dense m(N + 1, std::vector<double>(N + 1, 0.0)), d(N + 1, std::vector<double>(N + 1, 0.0));
  for (std::size_t n = 0; n <= N; ++n) {
    double tau = 0.0, pw = 1.0;
    for (std::size_t r = 0; r < n; ++r, pw *= g.ip) tau += pw * g.h;
    const double nn = static_cast<double>(n);
    if (n + 1 <= N) d[n + 1][n] = (nn + 1.0) * g.curvature;
    d[n][n] = nn * g.linear;
    if (n >= 2) d[n - 1][n] = (nn - 1.0) * g.product;
    for (std::size_t k = 0; k <= N; ++k) m[k][n] = d[k][n] * tau;
  }
  GateReport rep;
  rep.majorant = m;
  rep.delta1_norm = detail::frobenius(d);
  rep.frobenius = detail::frobenius(m);
  double best = rep.frobenius;
  auto pk = m;
  for (int k = 2; k <= 64 && best > 0.0; ++k) {
    pk = detail::dense_mul(pk, m);
    best = std::min(best, std::pow(detail::frobenius(pk), 1.0 / k));
  }
  rep.ratio = best;
  if (!rep.passed()) {
    double worst = -1.0;
    for (std::size_t i = 0; i <= N; ++i)
      for (std::size_t j = 0; j <= N; ++j)
        if (m[i][j] > worst) {
          worst = m[i][j];
          rep.offending = "length " + std::to_string(j) + " -> " + std::to_string(i) + " block bound " + std::to_string(worst);
        }
  }
  return rep;
}

/// ‖δ₁‖ Σ_{k>order} ‖M^k‖_F, using ‖M^{k+p}‖ ≤ ‖M^k‖ q with q = ‖M^p‖_F < 1.
inline double series_tail_bound(const GateReport& rep, int order) {
  if (!rep.passed()) return std::numeric_limits<double>::infinity();
  const auto& m = rep.majorant;
  if (detail::frobenius(m) == 0.0) return 0.0;
  int p = 1;
  auto mp = m;
  while (detail::frobenius(mp) >= 1.0) {
    mp = detail::dense_mul(mp, m);
    if (++p > 4096) return std::numeric_limits<double>::infinity();
  }
  const double q = detail::frobenius(mp);
  auto mk = m;
  for (int k = 1; k <= order; ++k) mk = detail::dense_mul(mk, m);
  double window = 0.0;
  for (int s = 0; s < p; ++s) {
    window += detail::frobenius(mk);
    mk = detail::dense_mul(mk, m);
  }
  return rep.delta1_norm * window / (1.0 - q);
}

enum class SeriesPath { nilpotent, gated };

struct TransferSettings {
  int order = 12;               ///< series order on the gated path
  std::size_t max_length = 4;   ///< tensor-length truncation N
  int nilpotency_cap = 64;      ///< step limit on the nilpotent path
};

/// The perturbation lemma on T(sV): Σ = Σ_k (δ₁T(H))^k δ₁ and the transferred data
///   δ₂ = TpΣTi, ĩ = Ti + THΣTi, p̃ = Tp + TpΣTH, H̃ = TH + THΣTH.
/// Words longer than N are dropped; `length_truncated()` reports whether that happened.
/// Not thread-safe (shared memo caches).
template <class F>
class Transfer {
 public:
  /// Without a passing gate only terminating series are accepted (the nilpotent path);
  /// with one, series are cut at `order` and the tail bound applies. A curved δ₁ needs the gate.
  Transfer(LiftedContraction<F> c, SuspendedTaylor<F> delta1, TransferSettings s = {},
           std::optional<GateReport> gate = std::nullopt, bool curved = false)
      : st_(std::make_shared<State>()) {
    st_->c = std::move(c);
    st_->delta1 = std::move(delta1);
    st_->settings = s;
    if (curved && !gate) throw StructuralError("Transfer: a curved perturbation needs a gate report");
    if (gate && !gate->passed() && curved)
      throw ConvergenceGateError("convergence gate failed: spectral bound " + std::to_string(gate->ratio) + " >= 1 (" +
                                     gate->offending + ")",
                                 gate->ratio);
    st_->gated = gate && gate->passed();
    if (st_->gated) st_->tail = series_tail_bound(*gate, s.order);
    st_->gate = gate;
    auto* raw = st_.get();
    st_->step = WordOp<F>([raw](const Word& w) { return raw->apply_delta1(raw->c.TH(TensorElem<F>::word(w))); });
    st_->sigma = WordOp<F>([raw](const Word& w) { return raw->sigma_word(w); });
    st_->delta2 = WordOp<F>([raw](const Word& w) { return raw->c.Tp(raw->sigma.apply(raw->c.Ti(TensorElem<F>::word(w)))); });
  }

  const LiftedContraction<F>& contraction() const { return st_->c; }
  const SuspendedTaylor<F>& delta1_taylor() const { return st_->delta1; }
  /// Nilpotent while every series evaluated so far terminated.
  SeriesPath path() const { return st_->all_terminated ? SeriesPath::nilpotent : SeriesPath::gated; }
  const std::optional<GateReport>& gate() const { return st_->gate; }
  const TransferSettings& settings() const { return st_->settings; }
  /// Tail bound of the series; 0 on the nilpotent path or when every evaluated series terminated.
  double tail_bound() const { return st_->all_terminated ? 0.0 : st_->tail; }
  bool length_truncated() const { return st_->overflow; }
  int max_terms() const { return st_->max_terms; }
  std::size_t cached_words() const { return st_->sigma.cache_size(); }

  TensorElem<F> delta1(const TensorElem<F>& x) const { return st_->apply_delta1(x); }
  TensorElem<F> sigma(const TensorElem<F>& x) const { return st_->sigma.apply(x); }
  /// d₁ + δ₁ on the big side.
  TensorElem<F> big_differential(const TensorElem<F>& x) const { return st_->c.d1(x) + delta1(x); }
  TensorElem<F> delta2(const TensorElem<F>& y) const { return st_->delta2.apply(y); }
  /// D̃ = d₂ + δ₂ on the small side.
  TensorElem<F> differential(const TensorElem<F>& y) const { return st_->c.d2(y) + delta2(y); }
  TensorElem<F> i_tilde(const TensorElem<F>& y) const {
    const auto iy = st_->c.Ti(y);
    return iy + st_->c.TH(sigma(iy));
  }
  TensorElem<F> p_tilde(const TensorElem<F>& x) const { return st_->c.Tp(x) + st_->c.Tp(sigma(st_->c.TH(x))); }
  TensorElem<F> h_tilde(const TensorElem<F>& x) const {
    const auto hx = st_->c.TH(x);
    return hx + st_->c.TH(sigma(hx));
  }

  /// The transferred contraction as operators between the perturbed complexes.
  ContractionOps<F> ops() const {
    auto self = *this;
    return {[self](const TensorElem<F>& x) { return self.p_tilde(x); },
            [self](const TensorElem<F>& y) { return self.i_tilde(y); },
            [self](const TensorElem<F>& x) { return self.h_tilde(x); },
            [self](const TensorElem<F>& x) { return self.big_differential(x); },
            [self](const TensorElem<F>& y) { return self.differential(y); }};
  }

 private:
  struct State {
    LiftedContraction<F> c;
    SuspendedTaylor<F> delta1;
    bool gated = false;
    TransferSettings settings;
    std::optional<GateReport> gate;
    double tail = 0.0;
    bool overflow = false;
    bool all_terminated = true;
    int max_terms = 0;
    WordOp<F> step, sigma, delta2;

    TensorElem<F> apply_delta1(const TensorElem<F>& x) {
      return apply_coderivation(delta1, x, settings.max_length, &overflow);
    }

    TensorElem<F> sigma_word(const Word& w) {
      auto term = apply_delta1(TensorElem<F>::word(w));
      TensorElem<F> acc = term;
      const int limit = gated ? settings.order : settings.nilpotency_cap;
      int k = 0;
      while (!term.is_zero() && k < limit) {
        term = step.apply(term);
        acc += term;
        ++k;
      }
      if (!term.is_zero()) {
        if (!gated)
          throw ConvergenceGateError("perturbation series did not terminate within " + std::to_string(limit) +
                                         " steps; δ₁H is not nilpotent here",
                                     std::numeric_limits<double>::infinity());
        all_terminated = false;
      }
      max_terms = std::max(max_terms, k + 1);
      return acc;
    }
  };
  std::shared_ptr<State> st_;
};

/// Runs the perturbation lemma for a certified lifted contraction and a perturbation δ₁.
template <class F>
Transfer<F> perturb(const LiftedContraction<F>& c, const SuspendedTaylor<F>& delta1, TransferSettings s = {},
                    std::optional<GateReport> gate = std::nullopt, bool curved = false) {
  return Transfer<F>(c, delta1, s, std::move(gate), curved);
}

/// φ̂ = p′ φ i.
template <class F>
LinOp<F> transfer_morphism(const LinOp<F>& phi, const LinOp<F>& p_target, const LinOp<F>& i_source) {
  return [=](const TensorElem<F>& y) { return p_target(phi(i_source(y))); };
}

struct CommuteReport {
  double residual = 0.0;
  bool exact_zero = true;
  bool ok = true;
};

/// Residual of φH − H′φ over samples; tolerance 0 demands exact zeros.
template <class F>
CommuteReport homotopy_commute_check(const LinOp<F>& phi, const LinOp<F>& h, const LinOp<F>& h_prime,
                                     const std::vector<TensorElem<F>>& samples, double tolerance) {
  CommuteReport rep;
  for (const auto& x : samples) {
    const auto r = phi(h(x)) - h_prime(phi(x));
    rep.residual = std::max(rep.residual, r.norm());
    if (!r.is_zero()) rep.exact_zero = false;
  }
  rep.ok = tolerance == 0.0 ? rep.exact_zero : rep.residual <= tolerance;
  return rep;
}

}  // namespace cagt
