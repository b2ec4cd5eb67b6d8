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

Word random_args(gen::Rng& rng, const std::vector<Key>& keys, std::size_t n) {
  Word w;
  for (Key i : rng.word(n, keys.size())) w.push_back(keys[i]);
  return w;
}

}  // namespace

TEST(CurvedDg, AInfinityRelationsHoldForRandomGamma) {
  const auto& s = setup(2);
  gen::Rng rng(41);
  const auto keys = probe_keys<R>(*s.fs, 1);
  for (int t = 0; t < 5; ++t) {
    const auto st = curved_dg_from_gamma(s.forms, s.to_vec(rng.form<R>(s.ctx, 1)));
    for (std::size_t n = 0; n <= 4; ++n)
      for (int c = 0; c < (n == 0 ? 1 : 4); ++c)
        EXPECT_TRUE(ainfty_residual(st.taylor, random_args(rng, keys, n)).empty()) << "n=" << n;
  }
}

TEST(CurvedDg, SquareOfM1IsCommutatorWithCurvature) {
  const auto& s = setup(2);
  gen::Rng rng(42);
  const auto gamma = rng.form<R>(s.ctx, 1);
  const auto st = curved_dg_from_gamma(s.forms, s.to_vec(gamma));
  const auto curv = curvature_form(gamma);
  EXPECT_TRUE(st.curved);
  EXPECT_EQ(TensorElem<R>::from_vec(st.curvature()), TensorElem<R>::from_vec(s.to_vec(curv)));
  for (int t = 0; t < 5; ++t) {
    const auto a = rng.form<R>(s.ctx, static_cast<int>(rng.integer(0, 1)));
    KeyVec<R> m1a;
    for (const auto& [k, c] : s.to_vec(a))
      for (const auto& [k2, c2] : st.taylor.m(std::span<const Key>(&k, 1))) add_to(m1a, k2, c * c2);
    KeyVec<R> m1m1a;
    for (const auto& [k, c] : m1a)
      for (const auto& [k2, c2] : st.taylor.m(std::span<const Key>(&k, 1))) add_to(m1m1a, k2, c * c2);
    EXPECT_EQ(TensorElem<R>::from_vec(m1m1a), TensorElem<R>::from_vec(s.to_vec(graded_commutator(curv, a))));
  }
}

TEST(CurvedDg, DroppingTheCurvatureBreaksTheRelations) {
  const auto& s = setup(2);
  gen::Rng rng(43);
  auto st = curved_dg_from_gamma(s.forms, s.to_vec(rng.form<R>(s.ctx, 1)));
  ASSERT_TRUE(st.curved);
  const auto m = st.taylor.m;
  st.taylor.m = [m](std::span<const Key> args) { return args.empty() ? KeyVec<R>{} : m(args); };
  const auto keys = probe_keys<R>(*s.fs, 1);
  bool broken = false;
  for (int c = 0; c < 20 && !broken; ++c) broken = !ainfty_residual(st.taylor, random_args(rng, keys, 1)).empty();
  EXPECT_TRUE(broken);
}

TEST(CurvedDg, ZeroGammaGivesTheDifferential) {
  const auto& s = setup(1);
  const auto st = curved_dg_from_gamma(s.forms, {});
  EXPECT_FALSE(st.curved);
  for (Key k : probe_keys<R>(*s.fs, 2)) EXPECT_EQ(st.taylor.m(std::span<const Key>(&k, 1)), s.forms.d(k));
}

TEST(Gauge, ActionIsALeftGroupAction) {
  const auto& s = setup(2);
  gen::Rng rng(44);
  for (int t = 0; t < 4; ++t) {
    const auto gamma = rng.form<R>(s.ctx, 1);
    const auto g1 = rng.polynomial_unipotent<R>(s.ctx), g2 = rng.constant_unipotent<R>(s.ctx);
    EXPECT_TRUE(gauge_act(gamma, g1 * g2) == gauge_act(gauge_act(gamma, g2), g1));
    EXPECT_TRUE(gauge_act(gamma, GaugeElement<R>::identity(s.ctx)) == gamma);
    // Curvature transforms by conjugation.
    EXPECT_TRUE(curvature_form(gauge_act(gamma, g1)) == wedge(wedge(g1.g(), curvature_form(gamma)), g1.inverse_form()));
  }
}

TEST(Gauge, ConstantElementConjugates) {
  const auto& s = setup(2);
  gen::Rng rng(45);
  const auto gamma = rng.form<R>(s.ctx, 1);
  Mat<R> m = Mat<R>::identity(2);
  m(1, 0) = R(2);
  m(0, 0) = R(3);
  const auto g = GaugeElement<R>::constant(s.ctx, m);
  EXPECT_TRUE(gauge_act(gamma, g) == gamma.mul_left(m).mul_right(m.inverse()));
}

// F^g D_γ = D_{g·γ} F^g blockwise, for polynomial g of degree ≤ 2 on Δ¹.
TEST(Gauge, GaugeMorphismIsAChainMap) {
  const auto& s = setup(1);
  gen::Rng rng(46);
  const auto keys = probe_keys<R>(*s.fs, 2);
  for (int t = 0; t < 4; ++t) {
    const auto gamma = rng.form<R>(s.ctx, 1);
    const auto g = rng.polynomial_unipotent<R>(s.ctx);
    const auto d0 = curved_dg_from_gamma(s.forms, s.to_vec(gamma)).coderivation();
    const auto d1 = curved_dg_from_gamma(s.forms, s.to_vec(gauge_act(gamma, g))).coderivation();
    const auto fg = gauge_morphism(s, g);
    for (std::size_t n = 0; n <= 3; ++n)
      for (int c = 0; c < 3; ++c) {
        const auto x = TensorElem<R>::word(random_args(rng, keys, n));
        EXPECT_TRUE((fg(apply_coderivation(d0, x)) - apply_coderivation(d1, fg(x))).is_zero()) << "length " << n;
      }
  }
}

TEST(Gauge, GaugeMorphismIsMultiplicative) {
  const auto& s = setup(1);
  gen::Rng rng(47);
  const auto keys = probe_keys<R>(*s.fs, 2);
  const auto g1 = rng.polynomial_unipotent<R>(s.ctx), g2 = rng.polynomial_unipotent<R>(s.ctx);
  const auto f12 = gauge_morphism(s, g1 * g2), f1 = gauge_morphism(s, g1), f2 = gauge_morphism(s, g2);
  for (int c = 0; c < 8; ++c) {
    const auto x = TensorElem<R>::word(random_args(rng, keys, static_cast<std::size_t>(rng.integer(0, 3))));
    EXPECT_EQ(f12(x), f1(f2(x)));
  }
  EXPECT_EQ(gauge_morphism(s, GaugeElement<R>::identity(s.ctx))(TensorElem<R>::word({keys[3], keys[5]})),
            TensorElem<R>::word({keys[3], keys[5]}));
}

TEST(Gauge, NonUnipotentInputIsRejected) {
  const auto& s = setup(1);
  EXPECT_THROW(GaugeElement<R>::unipotent(PolyForm<R>::hat(s.ctx, 0)), StructuralError);
}
