#include <gtest/gtest.h>

#include "cagt/gauge/transferred.hpp"
#include "cagt/verify/random.hpp"

using namespace cagt;
using R = Rational;

namespace {

const SimplicialSetup<R>& setup(int dim) {
  static std::map<int, SimplicialSetup<R>> cache;
  auto it = cache.find(dim);
  if (it == cache.end()) it = cache.emplace(dim, make_simplicial_setup<R>(standard_simplex(dim), 2)).first;
  return it->second;
}

std::vector<TensorElem<R>> small_samples(const SimplicialSetup<R>& s, gen::Rng& rng, int n, std::size_t max_len) {
  std::vector<TensorElem<R>> out{TensorElem<R>::unit()};
  for (int i = 0; i < n; ++i)
    out.push_back(TensorElem<R>::word(rng.word(static_cast<std::size_t>(rng.integer(1, static_cast<long>(max_len))), s.cs->size())));
  return out;
}

}  // namespace

TEST(GaugeTheory, IdentityArrowIsIdentity) {
  const auto& s = setup(1);
  auto theory = transferred_gauge_theory(s, 10.0, {12, 3, 64});
  const PolyForm<R> zero(s.ctx);
  const auto rho = theory.arrow(GaugeArrow<R>::make(zero, GaugeElement<R>::identity(s.ctx)));
  gen::Rng rng(61);
  for (const auto& y : small_samples(s, rng, 10, 3)) EXPECT_EQ(rho(y), y);
}

TEST(GaugeTheory, HomotopyDoesNotCommuteWithNonConstantGauge) {
  const auto& s = setup(2);
  const auto n = PolyForm<R>::hat(s.ctx, 1, Mat<R>::unit(2, 0, 1));
  const auto g = GaugeElement<R>::unipotent(n);
  const auto rep = homotopy_gauge_commutator(s, g);
  EXPECT_FALSE(rep.ok);
  EXPECT_GT(rep.residual, 0.0);
  auto theory = transferred_gauge_theory(s, 10.0, {12, 2, 64});
  EXPECT_THROW(theory.arrow(GaugeArrow<R>::make(PolyForm<R>(s.ctx), g)), HypothesisViolation);
  gen::Rng rng(62);
  EXPECT_TRUE(homotopy_gauge_commutator(s, rng.constant_unipotent<R>(s.ctx)).exact_zero);
}

TEST(GaugeTheory, NaturalityFunctorialityIsometryOnInterval) {
  const auto& s = setup(1);
  gen::Rng rng(63);
  const TransferSettings st{12, 3, 64};
  for (int t = 0; t < 3; ++t) {
    const auto gamma = rng.flat_nilpotent_gamma<R>(s.ctx);
    const auto g1 = rng.constant_unipotent<R>(s.ctx), g2 = rng.constant_unipotent<R>(s.ctx);
    auto theory = transferred_gauge_theory(s, 100.0, st);
    const auto a1 = GaugeArrow<R>::make(gamma, g1);
    const auto a2 = GaugeArrow<R>::make(a1.target, g2);
    const auto r1 = theory.arrow(a1), r2 = theory.arrow(a2), r21 = theory.arrow(compose(a2, a1));
    const auto ys = small_samples(s, rng, 12, 3);
    for (const auto& y : ys) EXPECT_EQ(r2(r1(y)), r21(y));
    const auto& t0 = theory.at(gamma);
    const auto& t1 = theory.at(a1.target);
    for (std::size_t i = 0; i + 1 < ys.size(); ++i)
      EXPECT_EQ(transferred_inner_product(s, t1, r1(ys[i]), r1(ys[i + 1])), transferred_inner_product(s, t0, ys[i], ys[i + 1]));
    std::vector<TensorElem<R>> big;
    const auto keys = probe_keys<R>(*s.fs, 2);
    for (int i = 0; i < 10; ++i) {
      Word w;
      for (Key j : rng.word(static_cast<std::size_t>(rng.integer(1, 2)), keys.size())) w.push_back(keys[j]);
      big.push_back(TensorElem<R>::word(w));
    }
    for (const auto& [name, e] : naturality_check(s, t0, t1, g1, big, ys)) EXPECT_TRUE(e.exact_zero) << name;
  }
}

TEST(GaugeTheory, CachedStructuresAreStable) {
  const auto& s = setup(1);
  gen::Rng rng(64);
  auto theory = transferred_gauge_theory(s, 100.0, {12, 2, 64});
  const auto g0 = rng.flat_nilpotent_gamma<R>(s.ctx);
  const auto* first = &theory.at(g0);
  for (int i = 0; i < 5; ++i) theory.at(rng.flat_nilpotent_gamma<R>(s.ctx));
  EXPECT_EQ(first, &theory.at(g0));
}

TEST(GaugeTheory, AdmissionChecksNormAndGate) {
  const auto& s = setup(2);
  const auto gamma = PolyForm<R>::dhat(s.ctx, 1, Mat<R>::unit(2, 0, 1)) * R(3);
  const auto tight = gamma_gate(s, gamma, 0.5, 2);
  EXPECT_FALSE(tight.admitted);
  EXPECT_NE(tight.reason.find("norm"), std::string::npos);
  EXPECT_TRUE(gamma_gate(s, gamma, 100.0, 2).admitted);
  const auto curved = wedge(PolyForm<R>::hat(s.ctx, 1), PolyForm<R>::dhat(s.ctx, 2)) * R(50);
  const auto d = gamma_gate(s, curved, 1e6, 2);
  EXPECT_FALSE(d.flat);
  EXPECT_FALSE(d.admitted);
  EXPECT_NE(d.reason.find("gate"), std::string::npos);
}

TEST(Action, UpstairsActionIsGaugeInvariant) {
  const auto& s = setup(2);
  gen::Rng rng(65);
  for (int t = 0; t < 5; ++t) {
    const auto gamma = rng.form<R>(s.ctx, 1);
    const auto g = rng.coin() ? rng.polynomial_unipotent<R>(s.ctx) : rng.constant_unipotent<R>(s.ctx);
    const auto a = upstairs_action(s, gamma), b = upstairs_action(s, gauge_act(gamma, g));
    EXPECT_EQ(a.exact_value, b.exact_value);
    EXPECT_TRUE(a.exact);
  }
}

TEST(Action, FlatGammaHasZeroAction) {
  const auto& s = setup(2);
  gen::Rng rng(66);
  const auto gamma = rng.flat_nilpotent_gamma<R>(s.ctx);
  EXPECT_EQ(upstairs_action(s, gamma).exact_value, "0");
  const auto t = transfer_structure(s, gamma, {12, 2, 64});
  EXPECT_EQ(transferred_action(s, t).exact_value, "0");
}

TEST(Action, GramBlockIsNondegenerate) {
  const auto& s = setup(1);
  gen::Rng rng(67);
  const auto t = transfer_structure(s, rng.flat_nilpotent_gamma<R>(s.ctx), {12, 2, 64});
  EXPECT_GT(gram_min_singular_value(s, t), 1e-6);
}
