#pragma once

#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "cagt/gauge/simplicial.hpp"

namespace cagt {

/// Curved dg structure D_γ on Ω(K, M_l) and its transfer to cochains along Dupont's contraction.
template <class F>
struct TransferredStructure {
  PolyForm<F> gamma;
  KeyVec<F> gamma_vec;
  bool curved = false;
  SuspendedTaylor<F> upstairs;  ///< D_γ = d + δ_γ
  std::optional<GateReport> gate;
  Transfer<F> engine;
};

struct GateOptions {
  /// Compute the norm gate even when γ is flat and the backend is exact.
  bool always = false;
  int probe_degree = 3;
};

template <class F>
GateReport gamma_gate_report(const SimplicialSetup<F>& s, const PolyForm<F>& gamma, std::size_t max_length, int probe_degree) {
  const auto pert = perturbation_from_gamma(s.forms, s.to_vec(gamma));
  return convergence_gate(gate_inputs(s, pert, max_length, probe_degree));
}

/// Transfers D_γ. Flat γ with the exact backend go through the nilpotent path unless
/// `opts.always`; otherwise the gate is computed first and a curved γ failing it is rejected
/// before any series term is evaluated.
template <class F>
TransferredStructure<F> transfer_structure(const SimplicialSetup<F>& s, const PolyForm<F>& gamma, TransferSettings st = {},
                                           GateOptions opts = {}) {
  if (!s.certificate.granted) throw HypothesisViolation("transfer_structure: contraction is not certified");
  const auto gv = s.to_vec(gamma);
  auto pert = perturbation_from_gamma(s.forms, gv);
  const bool curved = !pert.m(std::span<const Key>()).empty();
  std::optional<GateReport> gate;
  if (opts.always || curved || !ScalarTraits<F>::exact)
    gate = convergence_gate(gate_inputs(s, pert, st.max_length, opts.probe_degree));
  Transfer<F> engine(s.lifted, suspend_coderivation(pert), st, gate, curved);
  return {gamma, gv, curved, curved_dg_from_gamma(s.forms, gv).coderivation(), gate, std::move(engine)};
}

/// Admission into Γ_e: ‖γ‖_{L²} ≤ e and the convergence gate (flat γ bypass the norm condition).
struct GammaGateDecision {
  double norm = 0.0;
  double e = 0.0;
  double ratio = 0.0;
  bool flat = true;
  bool admitted = false;
  std::string reason;
};

template <class F>
GammaGateDecision gamma_gate(const SimplicialSetup<F>& s, const PolyForm<F>& gamma, double e, std::size_t max_length,
                             int probe_degree = 3) {
  GammaGateDecision d;
  d.e = e;
  d.norm = std::sqrt(std::max(0.0, ScalarTraits<F>::to_double(l2_norm_squared(gamma))));
  d.flat = curvature_form(gamma).is_zero();
  d.ratio = gamma_gate_report(s, gamma, max_length, probe_degree).ratio;
  const bool norm_ok = d.norm <= e;
  const bool series_ok = d.flat || d.ratio < 1.0;
  d.admitted = norm_ok && series_ok;
  if (!norm_ok) d.reason = "norm " + std::to_string(d.norm) + " > e = " + std::to_string(e);
  else if (!series_ok) d.reason = "gate ratio " + std::to_string(d.ratio) + " >= 1";
  return d;
}

/// Value of an action functional with its provenance.
struct ActionValue {
  double value = 0.0;
  std::string exact_value;  ///< "n/d" for exact backends
  std::string inner_product;
  std::string truncation;
  double error_bound = 0.0;
  bool exact = false;
};

template <class F>
ActionValue make_action_value(const F& v, std::string ip, std::string trunc, double err) {
  ActionValue a;
  a.value = ScalarTraits<F>::to_double(v);
  if constexpr (ScalarTraits<F>::exact) a.exact_value = v.get_str();
  a.inner_product = std::move(ip);
  a.truncation = std::move(trunc);
  a.error_bound = err;
  a.exact = ScalarTraits<F>::exact && err == 0.0;
  return a;
}

/// S(D) = ⟨D1, D1⟩ for a coderivation on T(sΩ) paired with the trace form.
template <class F>
F action(const SuspendedTaylor<F>& d, const std::function<F(Key, Key)>& pairing) {
  const auto d1 = apply_coderivation(d, TensorElem<F>::unit());
  return coalgebra_pairing(d1, d1, pairing);
}

template <class F>
ActionValue upstairs_action(const SimplicialSetup<F>& s, const PolyForm<F>& gamma) {
  const auto d = curved_dg_from_gamma(s.forms, s.to_vec(gamma)).coderivation();
  return make_action_value(action(d, s.pairing_fn()), "trace pairing ∫Tr(a∧⋆b)", "none", 0.0);
}

/// ρ(g): the coalgebra morphism with first Taylor coefficient c(g).
template <class F>
LinOp<F> gauge_representation(const SimplicialSetup<F>& s, const GaugeElement<F>& g) {
  const auto c = conjugation_op(s.fs, g);
  return [c](const TensorElem<F>& x) { return tensor_power(c, x); };
}

/// F^g with F^g_1 = c(g) and F^g_k = 0 for k > 1; same as gauge_representation.
template <class F>
LinOp<F> gauge_morphism(const SimplicialSetup<F>& s, const GaugeElement<F>& g) {
  return gauge_representation(s, g);
}

/// ⟨x, y⟩_{B,γ} = ⟨ĩx, ĩy⟩.
template <class F>
F transferred_inner_product(const SimplicialSetup<F>& s, const TransferredStructure<F>& t, const TensorElem<F>& x,
                            const TensorElem<F>& y) {
  return coalgebra_pairing(t.engine.i_tilde(x), t.engine.i_tilde(y), s.pairing_fn());
}

/// Smallest singular value of the length-1 Gram block ⟨ĩa, ĩb⟩ over cochain keys a, b.
template <class F>
double gram_min_singular_value(const SimplicialSetup<F>& s, const TransferredStructure<F>& t) {
  const std::size_t n = s.cs->size();
  std::vector<TensorElem<F>> it;
  for (Key k = 0; k < n; ++k) it.push_back(t.engine.i_tilde(TensorElem<F>::word({k})));
  Eigen::MatrixXd g(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      g(a, b) = ScalarTraits<F>::to_double(coalgebra_pairing(it[a], it[b], s.pairing_fn()));
  if (n == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(g).singularValues().minCoeff();
}

/// S̃_γ = ⟨D̃1, D̃1⟩_{B,γ}.
template <class F>
ActionValue transferred_action(const SimplicialSetup<F>& s, const TransferredStructure<F>& t) {
  const auto d1 = t.engine.differential(TensorElem<F>::unit());
  const F v = transferred_inner_product(s, t, d1, d1);
  std::string trunc = "N=" + std::to_string(t.engine.settings().max_length);
  if (t.engine.length_truncated()) trunc += " (words beyond N dropped)";
  if (t.engine.path() == SeriesPath::gated) trunc += ", series order " + std::to_string(t.engine.settings().order);
  return make_action_value(v, "⟨I_γ ·, I_γ ·⟩ over the trace pairing", trunc, t.engine.tail_bound());
}

/// ρ̃_{γ,γ′}(g) = P_{γ′} ρ(g) I_γ.
template <class F>
LinOp<F> transferred_gauge_map(const SimplicialSetup<F>& s, const TransferredStructure<F>& from,
                               const TransferredStructure<F>& to, const GaugeElement<F>& g) {
  const auto rho = gauge_representation(s, g);
  const auto e_from = from.engine, e_to = to.engine;
  return [rho, e_from, e_to](const TensorElem<F>& y) { return e_to.p_tilde(rho(e_from.i_tilde(y))); };
}

/// Residual of [H, c(g)] on form probes.
template <class F>
CommuteReport homotopy_gauge_commutator(const SimplicialSetup<F>& s, const GaugeElement<F>& g, int probe_degree = 2) {
  const auto c = conjugation_op(s.fs, g);
  const LinOp<F> phi = [c](const TensorElem<F>& x) { return tensor_power(c, x); };
  const auto h = s.key_contraction.h;
  const LinOp<F> hop = [h](const TensorElem<F>& x) {
    TensorElem<F> out;
    for (const auto& [w, coeff] : x.terms())
      for (const auto& [k, v] : h(w.at(0))) out.add(Word{k}, v * coeff);
    return out;
  };
  std::vector<TensorElem<F>> samples;
  for (Key k : probe_keys<F>(*s.fs, probe_degree)) samples.push_back(TensorElem<F>::word({k}));
  return homotopy_commute_check(phi, hop, hop, samples, ScalarTraits<F>::exact ? 0.0 : 1e-9);
}

/// Refuses gauge elements that do not commute with the homotopy; Dupont's H commutes with
/// constant 0-forms only.
template <class F>
void require_homotopy_commutes(const SimplicialSetup<F>& s, const GaugeElement<F>& g) {
  const auto r = homotopy_gauge_commutator(s, g);
  if (!r.ok)
    throw HypothesisViolation("[H, c(g)] ≠ 0 (residual " + std::to_string(r.residual) +
                              "); the transferred representation needs H to commute with c(g)");
}

/// Transferred gauge theory on the cochains: per-γ transferred structures and arrows
/// ρ̃_{γ,γ′}(g) for gauge elements commuting with H.
template <class F>
class TransferredGaugeTheory {
 public:
  TransferredGaugeTheory(const SimplicialSetup<F>& s, double e, TransferSettings st = {}, GateOptions opts = {})
      : s_(&s), e_(e), st_(st), opts_(opts) {
    if (!s.certificate.granted) throw HypothesisViolation("transferred gauge theory: contraction is not certified");
  }

  const SimplicialSetup<F>& setup() const { return *s_; }

  GammaGateDecision admit(const PolyForm<F>& gamma) const {
    return gamma_gate(*s_, gamma, e_, st_.max_length, opts_.probe_degree);
  }

  /// Transferred structure at an admitted γ (cached by γ).
  const TransferredStructure<F>& at(const PolyForm<F>& gamma) {
    for (auto& [g, t] : cache_)
      if (g == gamma) return t;
    const auto dec = admit(gamma);
    if (!dec.admitted) throw ConvergenceGateError("γ not admitted: " + dec.reason, dec.ratio);
    cache_.emplace_back(gamma, transfer_structure(*s_, gamma, st_, opts_));
    return cache_.back().second;
  }

  /// ρ̃ along the arrow (γ, g, g·γ).
  LinOp<F> arrow(const GaugeArrow<F>& a) {
    require_homotopy_commutes(*s_, a.g);
    const auto& from = at(a.source);
    const auto& to = at(a.target);
    return transferred_gauge_map(*s_, from, to, a.g);
  }

 private:
  const SimplicialSetup<F>* s_;
  double e_;
  TransferSettings st_;
  GateOptions opts_;
  std::deque<std::pair<PolyForm<F>, TransferredStructure<F>>> cache_;
};

template <class F>
TransferredGaugeTheory<F> transferred_gauge_theory(const SimplicialSetup<F>& s, double e, TransferSettings st = {},
                                                   GateOptions opts = {}) {
  return TransferredGaugeTheory<F>(s, e, st, opts);
}

struct ResidualEntry {
  double residual = 0.0;
  bool exact_zero = true;
};
using ResidualReport = std::map<std::string, ResidualEntry>;

template <class F>
void record_residual(ResidualReport& r, const std::string& name, const TensorElem<F>& v) {
  auto& e = r[name];
  e.residual = std::max(e.residual, v.norm());
  if (!v.is_zero()) e.exact_zero = false;
}

/// Residuals of P_{γ′}ρ(g) − ρ̃P_γ, ρ(g)I_γ − I_{γ′}ρ̃, P_γD_γI_γ − D̃_γ and ρ̃D̃_γ − D̃_{γ′}ρ̃.
template <class F>
ResidualReport naturality_check(const SimplicialSetup<F>& s, const TransferredStructure<F>& from,
                                const TransferredStructure<F>& to, const GaugeElement<F>& g,
                                const std::vector<TensorElem<F>>& big, const std::vector<TensorElem<F>>& small) {
  const auto rho = gauge_representation(s, g);
  const auto rt = transferred_gauge_map(s, from, to, g);
  ResidualReport r;
  for (const char* n : {"P'rho-rhotilde P", "rho I-I'rhotilde", "P D I-Dtilde", "rhotilde Dtilde-Dtilde'rhotilde"})
    r[n] = {};
  for (const auto& x : big) record_residual(r, "P'rho-rhotilde P", to.engine.p_tilde(rho(x)) - rt(from.engine.p_tilde(x)));
  for (const auto& y : small) {
    record_residual(r, "rho I-I'rhotilde", rho(from.engine.i_tilde(y)) - to.engine.i_tilde(rt(y)));
    const auto dy = from.engine.differential(y);
    record_residual(r, "P D I-Dtilde",
                    from.engine.p_tilde(apply_coderivation(from.upstairs, from.engine.i_tilde(y),
                                                           from.engine.settings().max_length)) -
                        dy);
    record_residual(r, "rhotilde Dtilde-Dtilde'rhotilde", rt(dy) - to.engine.differential(rt(y)));
  }
  return r;
}

}  // namespace cagt
