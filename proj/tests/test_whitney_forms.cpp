#include <gtest/gtest.h>

#include "cagt/forms/whitney.hpp"
#include "cagt/verify/random.hpp"
#include "oracles.hpp"

using namespace cagt;
using R = Rational;

namespace {

PolyForm<R> ip(const PolyForm<R>& w) {
  PolyForm<R> out(w.context());
  for (int k = 0; k <= w.complex()->dim(); ++k) out += whitney_map(w.context(), derham_map(w, k));
  return out;
}

struct Case {
  ComplexPtr complex;
  std::size_t l;
  const char* name;
};

std::vector<Case> cases() {
  std::vector<Case> out;
  for (std::size_t l : {1u, 2u}) {
    out.push_back({standard_simplex(1), l, "simplex1"});
    out.push_back({standard_simplex(2), l, "simplex2"});
    out.push_back({standard_simplex(3), l, "simplex3"});
    out.push_back({triangulated_circle(), l, "circle"});
  }
  return out;
}

}  // namespace

TEST(Integration, MonomialIntegralMatchesIteratedIntegration) {
  gen::Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const int n = static_cast<int>(rng.integer(1, 3));
    std::vector<int> a(static_cast<std::size_t>(n) + 1);
    for (auto& e : a) e = static_cast<int>(rng.integer(0, 4));
    R vol = 1;
    for (int k = 2; k <= n; ++k) vol /= k;
    EXPECT_EQ(simplex_monomial_integral<R>(a, vol), oracle::iterated_simplex_integral(a));
  }
}

TEST(Integration, IntervalGramOfVertexFunctions) {
  const auto ctx = make_form_context(standard_simplex(1), 1);
  const auto l0 = PolyForm<R>::hat(ctx, 0), l1 = PolyForm<R>::hat(ctx, 1);
  EXPECT_EQ(form_inner_product(l0, l0), R(1, 3));
  EXPECT_EQ(form_inner_product(l0, l1), R(1, 6));
  EXPECT_EQ(form_inner_product(l1, l1), R(1, 3));
}

TEST(Whitney, EdgeFormIntegratesToOne) {
  const auto k = standard_simplex(1);
  const auto ctx = make_form_context(k, 1);
  const auto c = Cochain<R>::indicator(k, 1, 1, 0, Mat<R>::identity(1));
  const auto w = whitney_map(ctx, c);
  const auto expected = wedge(PolyForm<R>::hat(ctx, 0), PolyForm<R>::dhat(ctx, 1)) -
                        wedge(PolyForm<R>::hat(ctx, 1), PolyForm<R>::dhat(ctx, 0));
  EXPECT_TRUE(w == expected);
  EXPECT_EQ(derham_map(w, 1), c);
}

TEST(Forms, DifferentialAndProductRules) {
  gen::Rng rng(12);
  for (const auto& c : cases()) {
    const auto ctx = make_form_context(c.complex, c.l);
    for (int t = 0; t < 4; ++t) {
      const int p = static_cast<int>(rng.integer(0, 1));
      const auto a = rng.form<R>(ctx, p), b = rng.form<R>(ctx, static_cast<int>(rng.integer(0, 1)));
      EXPECT_TRUE(exterior_derivative(exterior_derivative(a)).is_zero()) << c.name;
      auto rhs = wedge(exterior_derivative(a), b);
      if (p % 2 == 0) rhs += wedge(a, exterior_derivative(b));
      else rhs -= wedge(a, exterior_derivative(b));
      EXPECT_TRUE(exterior_derivative(wedge(a, b)) == rhs) << c.name;
    }
  }
}

TEST(Forms, ScalarFormsGradedCommute) {
  gen::Rng rng(13);
  const auto ctx = make_form_context(standard_simplex(3), 1);
  for (int t = 0; t < 6; ++t) {
    const auto a = rng.form<R>(ctx, 1), b = rng.form<R>(ctx, static_cast<int>(rng.integer(0, 2)));
    EXPECT_TRUE(graded_commutator(a, b).is_zero());
  }
}

// ip − 1 = dH + Hd, Hi = 0, pH = 0, HH = 0 and pi = 1 on random inputs.
TEST(Dupont, ContractionIdentitiesOnRandomInputs) {
  gen::Rng rng(14);
  for (const auto& c : cases()) {
    const auto ctx = make_form_context(c.complex, c.l);
    for (int t = 0; t < 3; ++t) {
      const auto w = rng.form<R>(ctx, static_cast<int>(rng.integer(0, c.complex->dim())));
      const auto h = dupont_homotopy(w);
      EXPECT_TRUE(ip(w) - w == exterior_derivative(h) + dupont_homotopy(exterior_derivative(w))) << c.name;
      EXPECT_TRUE(dupont_homotopy(h).is_zero()) << c.name;
      for (int k = 0; k <= c.complex->dim(); ++k) EXPECT_TRUE(derham_map(h, k).is_zero()) << c.name;
      const int k = static_cast<int>(rng.integer(0, c.complex->dim()));
      Cochain<R> co(c.complex, c.l, k);
      for (std::size_t i = 0; i < co.size(); ++i) co[i] = rng.matrix<R>(c.l);
      const auto iw = whitney_map(ctx, co);
      EXPECT_TRUE(dupont_homotopy(iw).is_zero()) << c.name;
      EXPECT_EQ(derham_map(iw, k), co) << c.name;
    }
  }
}

TEST(Dupont, NegativeControlVariantsBreakTheirIdentity) {
  gen::Rng rng(15);
  const auto scaled = make_form_context(standard_simplex(2), 1, 20, HomotopyVariant::scaled);
  const auto w = rng.form<R>(scaled, 1);
  EXPECT_FALSE(ip(w) - w == exterior_derivative(dupont_homotopy(w)) + dupont_homotopy(exterior_derivative(w)));

  // The extra term d κ_0κ_1κ_2 d only exists from dimension 3 on.
  const auto ns = make_form_context(standard_simplex(3), 1, 20, HomotopyVariant::non_special);
  const auto w2 = wedge(PolyForm<R>::hat(ns, 1), PolyForm<R>::dhat(ns, 2));
  const auto h2 = dupont_homotopy(w2);
  EXPECT_TRUE(ip(w2) - w2 == exterior_derivative(h2) + dupont_homotopy(exterior_derivative(w2)));
}
