#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cagt/gauge/transferred.hpp"
#include "cagt/verify/random.hpp"

namespace cagt::verify {

/// Negative controls: each one breaks exactly one convention.
struct Tamper {
  bool koszul_sign = false;        ///< drop the Koszul sign when extending coderivations
  bool h_scale = false;            ///< use 2H instead of H
  bool drop_annihilation = false;  ///< add a term to H that violates Hi = 0, pH = 0, HH = 0
  bool any() const { return koszul_sign || h_scale || drop_annihilation; }
};

inline Tamper parse_tamper(const std::vector<std::string>& names) {
  Tamper t;
  for (const auto& n : names) {
    if (n == "koszul-sign") t.koszul_sign = true;
    else if (n == "h-scale") t.h_scale = true;
    else if (n == "drop-annihilation") t.drop_annihilation = true;
    else throw StructuralError("unknown tamper '" + n + "' (koszul-sign, h-scale, drop-annihilation)");
  }
  return t;
}

inline HomotopyVariant tamper_variant(const Tamper& t) {
  if (t.h_scale) return HomotopyVariant::scaled;
  if (t.drop_annihilation) return HomotopyVariant::non_special;
  return HomotopyVariant::dupont;
}

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::string failing;                    ///< first failing identity
  std::map<std::string, double> residuals;  ///< worst residual norm per identity
  std::vector<double> case_residuals;       ///< per random case, in generation order
  std::size_t cases = 0;
  std::string note;

  void record(const std::string& identity, double r, bool exact_zero) {
    auto& e = residuals[identity];
    e = std::max(e, r);
    if (!exact_zero && passed) {
      passed = false;
      failing = identity;
    }
  }
  template <class F>
  void record(const std::string& identity, const TensorElem<F>& v) {
    record(identity, v.norm(), v.is_zero());
  }
  void fail(const std::string& why) {
    passed = false;
    if (failing.empty()) failing = why;
  }
};

inline const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> names{"dupont-contraction", "curved-dg",        "coderivation-square",
                                              "cochain-leibniz",    "transfer",         "gauge-invariance",
                                              "naturality"};
  return names;
}

struct VerifyOptions {
  ComplexPtr complex;
  std::size_t l = 2;
  std::uint64_t seed = 1;
  int samples = 6;
  int degree_cap = 20;
  std::size_t max_length = 2;  ///< words of length 3 on Δ³ expand past memory
  Tamper tamper;
  std::vector<std::string> suites;  ///< empty: all
};

using Setup = SimplicialSetup<Rational>;

inline std::string join_names(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& x : v) out += (out.empty() ? "" : ", ") + x;
  return out;
}

/// Whole-structure residuals m_•∘m_• at arities 0..max_arity on random probe tuples, for random γ.
inline SuiteResult curved_dg_suite(const Setup& s, gen::Rng& rng, int gammas, int tuples_per_arity = 3,
                                   int max_arity = 4) {
  SuiteResult r;
  r.name = "curved-dg";
  const auto keys = probe_keys<Rational>(*s.fs, 1);
  for (int c = 0; c < gammas; ++c) {
    const auto gamma = rng.form<Rational>(s.ctx, 1);
    const auto st = curved_dg_from_gamma(s.forms, s.to_vec(gamma));
    double worst = 0.0;
    for (int n = 0; n <= max_arity; ++n)
      for (int t = 0; t < (n == 0 ? 1 : tuples_per_arity); ++t) {
        const Word w = rng.word(static_cast<std::size_t>(n), keys.size());
        Word args;
        for (Key i : w) args.push_back(keys[i]);
        const auto v = TensorElem<Rational>::from_vec(ainfty_residual(st.taylor, args));
        r.record("ainfty_residual n=" + std::to_string(n), v);
        worst = std::max(worst, v.norm());
        ++r.cases;
      }
    r.case_residuals.push_back(worst);
  }
  return r;
}

/// D_γ² = 0 on T(sΩ) for random γ and random words.
inline SuiteResult coderivation_square_suite(const Setup& s, gen::Rng& rng, int gammas, bool flip_koszul,
                                             int words = 4, std::size_t max_len = 3) {
  SuiteResult r;
  r.name = "coderivation-square";
  const auto keys = probe_keys<Rational>(*s.fs, 1);
  for (int c = 0; c < gammas; ++c) {
    const auto gamma = rng.form<Rational>(s.ctx, 1);
    const auto d = curved_dg_from_gamma(s.forms, s.to_vec(gamma)).coderivation();
    double worst = 0.0;
    for (int t = 0; t < words; ++t) {
      const Word w = rng.word(static_cast<std::size_t>(rng.integer(0, static_cast<long>(max_len))), keys.size());
      Word x;
      for (Key i : w) x.push_back(keys[i]);
      const auto once = apply_coderivation(d, TensorElem<Rational>::word(x), SIZE_MAX, nullptr, flip_koszul);
      const auto twice = apply_coderivation(d, once, SIZE_MAX, nullptr, flip_koszul);
      r.record("D^2=0", twice);
      worst = std::max(worst, twice.norm());
      ++r.cases;
    }
    r.case_residuals.push_back(worst);
  }
  return r;
}

namespace detail {

inline Cochain<Rational> random_cochain(const ComplexPtr& k, std::size_t l, int degree, gen::Rng& rng) {
  Cochain<Rational> c(k, l, degree);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = rng.matrix<Rational>(l);
  return c;
}

inline double cochain_norm(const Cochain<Rational>& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t a = 0; a < c.matrix_size(); ++a)
      for (std::size_t b = 0; b < c.matrix_size(); ++b) s += std::abs(c[i](a, b).get_d());
  return s;
}

}  // namespace detail

/// δ(a ∪ b) = δa ∪ b + (−1)^{|a|} a ∪ δb on random cochains.
inline SuiteResult cochain_leibniz_suite(const ComplexPtr& k, std::size_t l, gen::Rng& rng, int cases) {
  SuiteResult r;
  r.name = "cochain-leibniz";
  const int dim = k->dim();
  for (int c = 0; c < cases; ++c) {
    const int p = static_cast<int>(rng.integer(0, dim));
    const int q = static_cast<int>(rng.integer(0, dim - p));
    const auto a = detail::random_cochain(k, l, p, rng);
    const auto b = detail::random_cochain(k, l, q, rng);
    auto lhs = coboundary(cup_product(a, b));
    auto rhs = cup_product(coboundary(a), b);
    if (p % 2 == 0) rhs += cup_product(a, coboundary(b));
    else rhs -= cup_product(a, coboundary(b));
    const auto diff = lhs - rhs;
    const double n = detail::cochain_norm(diff);
    r.record("leibniz p=" + std::to_string(p) + " q=" + std::to_string(q), n, diff.is_zero());
    r.case_residuals.push_back(n);
    ++r.cases;
  }
  return r;
}

/// Dupont certificate on all cochain keys and form probes.
inline SuiteResult dupont_suite(const Setup& s) {
  SuiteResult r;
  r.name = "dupont-contraction";
  for (const auto& [name, v] : s.certificate.residuals) r.record(name, v, s.certificate.exact_zero.at(name));
  r.cases = s.certificate.residuals.size();
  return r;
}

/// A tensor of one or two random degree-≤1 probe forms.
inline TensorElem<Rational> probe_word(const Setup& s, gen::Rng& rng) {
  const auto probes = form_probes<Rational>(*s.fs, 1);
  auto w = probes[rng.index(probes.size())];
  if (rng.coin()) w = concat(w, probes[rng.index(probes.size())]);
  return w;
}

/// Transfer along a γ: D̃² = 0 on sampled words and the transferred contraction identities.
inline void check_transfer(SuiteResult& r, const Setup& s, const TransferredStructure<Rational>& t, gen::Rng& rng,
                           int samples, std::size_t max_length) {
  const std::size_t nk = s.cs->size();
  std::vector<TensorElem<Rational>> small{TensorElem<Rational>::unit()};
  for (Key k = 0; k < nk; ++k) small.push_back(TensorElem<Rational>::word({k}));
  for (int i = 0; i < samples; ++i)
    small.push_back(TensorElem<Rational>::word(rng.word(static_cast<std::size_t>(rng.integer(2, static_cast<long>(max_length))), nk)));
  for (const auto& y : small) r.record("Dtilde^2=0", t.engine.differential(t.engine.differential(y)));
  std::vector<TensorElem<Rational>> big{TensorElem<Rational>::unit()};
  for (int i = 0; i < samples; ++i) big.push_back(probe_word(s, rng));
  const auto cert = verify_special_contraction(t.engine.ops(), big, small, 0.0);
  for (const auto& [name, v] : cert.residuals) r.record("transferred " + name, v, cert.exact_zero.at(name));
  r.cases += small.size() + big.size();
}

inline SuiteResult transfer_suite(const Setup& s, gen::Rng& rng, int samples, std::size_t max_length) {
  SuiteResult r;
  r.name = "transfer";
  if (!s.certificate.granted) {
    r.fail("contraction not certified (" + join_names(s.certificate.failing()) + ")");
    return r;
  }
  const TransferSettings st{12, max_length, 64};
  check_transfer(r, s, transfer_structure(s, PolyForm<Rational>(s.ctx), st), rng, samples, max_length);
  check_transfer(r, s, transfer_structure(s, rng.flat_nilpotent_gamma<Rational>(s.ctx), st), rng, samples, max_length);
  return r;
}

/// S(g·γ) = S(γ) upstairs and F^g D_γ = D_{g·γ} F^g on random words.
inline SuiteResult gauge_invariance_suite(const Setup& s, gen::Rng& rng, int pairs, bool flip_koszul) {
  SuiteResult r;
  r.name = "gauge-invariance";
  const auto keys = probe_keys<Rational>(*s.fs, 1);
  for (int c = 0; c < pairs; ++c) {
    const auto gamma = rng.form<Rational>(s.ctx, 1);
    const auto g = rng.coin() ? rng.constant_unipotent<Rational>(s.ctx) : rng.polynomial_unipotent<Rational>(s.ctx);
    const auto target = gauge_act(gamma, g);
    const Rational s0 = action(curved_dg_from_gamma(s.forms, s.to_vec(gamma)).coderivation(), s.pairing_fn());
    const Rational s1 = action(curved_dg_from_gamma(s.forms, s.to_vec(target)).coderivation(), s.pairing_fn());
    const Rational delta = s1 - s0;
    r.record("S(g.gamma)-S(gamma)", std::abs(delta.get_d()), delta == 0);
    r.case_residuals.push_back(std::abs(delta.get_d()));
    const auto d0 = curved_dg_from_gamma(s.forms, s.to_vec(gamma)).coderivation();
    const auto d1 = curved_dg_from_gamma(s.forms, s.to_vec(target)).coderivation();
    const auto fg = gauge_morphism(s, g);
    Word x;
    for (Key j : rng.word(static_cast<std::size_t>(rng.integer(0, 2)), keys.size())) x.push_back(keys[j]);
    const auto w = TensorElem<Rational>::word(x);
    r.record("F^g D - D' F^g", fg(apply_coderivation(d0, w, SIZE_MAX, nullptr, flip_koszul)) -
                                   apply_coderivation(d1, fg(w), SIZE_MAX, nullptr, flip_koszul));
    ++r.cases;
  }
  return r;
}

/// Naturality, functoriality and isometry of ρ̃ for flat nilpotent γ and constant unipotent g.
inline SuiteResult naturality_suite(const Setup& s, gen::Rng& rng, int samples, std::size_t max_length) {
  SuiteResult r;
  r.name = "naturality";
  if (!s.certificate.granted) {
    r.fail("contraction not certified (" + join_names(s.certificate.failing()) + ")");
    return r;
  }
  const TransferSettings st{12, max_length, 64};
  const auto gamma = rng.flat_nilpotent_gamma<Rational>(s.ctx);
  const auto g1 = rng.constant_unipotent<Rational>(s.ctx);
  const auto g2 = rng.constant_unipotent<Rational>(s.ctx);
  const auto c1 = homotopy_gauge_commutator(s, g1), c2 = homotopy_gauge_commutator(s, g2);
  r.record("[H,c(g)]", std::max(c1.residual, c2.residual), c1.exact_zero && c2.exact_zero);
  const auto gamma1 = gauge_act(gamma, g1);
  const auto gamma2 = gauge_act(gamma1, g2);
  const auto t0 = transfer_structure(s, gamma, st);
  const auto t1 = transfer_structure(s, gamma1, st);
  const auto t2 = transfer_structure(s, gamma2, st);
  const std::size_t nk = s.cs->size();
  std::vector<TensorElem<Rational>> big, small{TensorElem<Rational>::unit()};
  for (int i = 0; i < samples; ++i) {
    small.push_back(TensorElem<Rational>::word(rng.word(static_cast<std::size_t>(rng.integer(1, static_cast<long>(max_length))), nk)));
    big.push_back(probe_word(s, rng));
  }
  for (const auto& [name, e] : naturality_check(s, t0, t1, g1, big, small)) r.record(name, e.residual, e.exact_zero);
  const auto r1 = transferred_gauge_map(s, t0, t1, g1);
  const auto r2 = transferred_gauge_map(s, t1, t2, g2);
  const auto r21 = transferred_gauge_map(s, t0, t2, g2 * g1);
  for (const auto& y : small) r.record("rho(g2)rho(g1)-rho(g2g1)", r2(r1(y)) - r21(y));
  for (std::size_t i = 0; i + 1 < small.size(); ++i) {
    const Rational a = transferred_inner_product(s, t1, r1(small[i]), r1(small[i + 1]));
    const Rational b = transferred_inner_product(s, t0, small[i], small[i + 1]);
    r.record("isometry", std::abs(Rational(a - b).get_d()), a == b);
  }
  r.cases = small.size() + big.size();
  return r;
}

/// Runs the selected suites with the exact backend; deterministic given the seed.
inline std::vector<SuiteResult> run_verify(const VerifyOptions& o) {
  const auto selected = o.suites.empty() ? all_suites() : o.suites;
  for (const auto& n : selected)
    if (std::find(all_suites().begin(), all_suites().end(), n) == all_suites().end())
      throw StructuralError("unknown suite '" + n + "'");
  const auto s = make_simplicial_setup<Rational>(o.complex, o.l, o.degree_cap, tamper_variant(o.tamper));
  std::vector<SuiteResult> out;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const auto& n = selected[i];
    // One stream per suite so that selecting suites does not shift the others.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : n) h = (h ^ ch) * 1099511628211ull;
    gen::Rng rng(o.seed ^ h);
    if (n == "dupont-contraction") out.push_back(dupont_suite(s));
    else if (n == "curved-dg") out.push_back(curved_dg_suite(s, rng, o.samples));
    else if (n == "coderivation-square") out.push_back(coderivation_square_suite(s, rng, o.samples, o.tamper.koszul_sign));
    else if (n == "cochain-leibniz") out.push_back(cochain_leibniz_suite(o.complex, o.l, rng, o.samples));
    else if (n == "transfer") out.push_back(transfer_suite(s, rng, o.samples, o.max_length));
    else if (n == "gauge-invariance") out.push_back(gauge_invariance_suite(s, rng, o.samples, o.tamper.koszul_sign));
    else if (n == "naturality") out.push_back(naturality_suite(s, rng, o.samples, o.max_length));
  }
  return out;
}

}  // namespace cagt::verify
