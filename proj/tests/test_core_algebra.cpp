#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cagt/algebra/errors.hpp"
#include "cagt/algebra/graded.hpp"
#include "cagt/algebra/matrix.hpp"
#include "cagt/algebra/scalar.hpp"

using namespace cagt;

namespace {

Rational rnd(std::mt19937_64& g) {
  std::uniform_int_distribution<long> num(-4, 4), den(1, 3);
  return ScalarTraits<Rational>::from_ratio(num(g), den(g));
}

GradedMap<Rational> random_map(std::mt19937_64& g, const BasisPtr& src, const BasisPtr& tgt, int degree) {
  GradedMap<Rational> m(src, tgt, degree);
  for (std::size_t c = 0; c < src->size(); ++c)
    for (std::size_t r = 0; r < tgt->size(); ++r)
      if (tgt->degrees[r] == src->degrees[c] + degree) {
        const Rational x = rnd(g);
        if (x != 0) m.add(r, c, x);
      }
  return m;
}

}  // namespace

TEST(Scalar, RationalStringsAreCanonical) {
  EXPECT_EQ(to_string(parse_rational("3/6")), "1/2");
  EXPECT_EQ(to_string(parse_rational("-4/2")), "-2");
  EXPECT_EQ(ScalarTraits<Rational>::to_json_string(ScalarTraits<Rational>::from_ratio(7, 21)), "1/3");
}

TEST(Scalar, Float64TracksRounding) {
  const Float64 a(0.5), b(0.25);
  EXPECT_FALSE((a + b).inexact);
  EXPECT_FALSE((a * b).inexact);
  EXPECT_TRUE((Float64(1.0) / Float64(3.0)).inexact);
  EXPECT_TRUE((Float64(1e16) + Float64(1.0)).inexact);
}

TEST(Matrix, InverseAndDeterminantProperties) {
  std::mt19937_64 g(11);
  int tested = 0;
  for (int t = 0; t < 40; ++t) {
    Mat<Rational> a(3), b(3);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) {
        a(r, c) = rnd(g);
        b(r, c) = rnd(g);
      }
    EXPECT_EQ((a * b).determinant(), a.determinant() * b.determinant());
    EXPECT_EQ((a * b).trace(), (b * a).trace());
    if (a.determinant() == 0) continue;
    EXPECT_EQ(a * a.inverse(), Mat<Rational>::identity(3));
    ++tested;
  }
  EXPECT_GT(tested, 10);
}

TEST(Matrix, SingularInverseThrows) {
  Mat<Rational> a(2);
  a(0, 0) = 1;
  EXPECT_ANY_THROW(a.inverse());
}

// (f ⊗ g)(a ⊗ b) = (−1)^{|g||a|} f(a) ⊗ g(b), checked entry by entry.
TEST(GradedMap, KoszulTensorMatchesBruteForce) {
  std::mt19937_64 g(5);
  const auto v = make_basis({0, 1, 1, 2});
  for (int df = -1; df <= 1; ++df)
    for (int dg = -1; dg <= 1; ++dg) {
      const auto f = random_map(g, v, v, df);
      const auto h = random_map(g, v, v, dg);
      const auto t = koszul_tensor<Rational>({f, h});
      const std::size_t n = v->size();
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
              Rational want = f.at(x, a) * h.at(y, b);
              if ((dg * v->degrees[a]) % 2 != 0) want = -want;
              EXPECT_EQ(t.at(x * n + y, a * n + b), want);
            }
    }
}

// (f ⊗ g)(f' ⊗ g') = (−1)^{|g||f'|} (f f') ⊗ (g g').
TEST(GradedMap, InterchangeLawWithSign) {
  std::mt19937_64 g(9);
  const auto v = make_basis({0, 1, 1, 2, 3});
  for (int t = 0; t < 10; ++t) {
    const int d[4] = {static_cast<int>(g() % 3) - 1, static_cast<int>(g() % 3) - 1, static_cast<int>(g() % 3) - 1,
                      static_cast<int>(g() % 3) - 1};
    const auto f = random_map(g, v, v, d[0]), h = random_map(g, v, v, d[1]);
    const auto f2 = random_map(g, v, v, d[2]), h2 = random_map(g, v, v, d[3]);
    const auto lhs = compose(koszul_tensor<Rational>({f, h}), koszul_tensor<Rational>({f2, h2}));
    auto rhs = koszul_tensor<Rational>({compose(f, f2), compose(h, h2)});
    if ((d[1] * d[2]) % 2 != 0) rhs *= Rational(-1);
    EXPECT_TRUE(lhs == rhs);
  }
}

TEST(GradedMap, ComposeRejectsMismatchedBases) {
  const auto a = make_basis({0, 1}), b = make_basis({0, 1, 2});
  EXPECT_THROW(compose(GradedMap<Rational>(a, a, 0), GradedMap<Rational>(a, b, 0)), StructuralError);
}

TEST(GradedMap, OperatorNormBoundDominatesSamples) {
  std::mt19937_64 g(3);
  const auto v = make_basis({0, 0, 0, 0, 0, 0});
  std::normal_distribution<double> nd;
  for (int t = 0; t < 10; ++t) {
    const auto f = random_map(g, v, v, 0);
    const double bound = operator_norm_bound(f);
    for (int s = 0; s < 20; ++s) {
      std::vector<Rational> x(v->size());
      double nx = 0.0;
      for (auto& xi : x) {
        xi = ScalarTraits<Rational>::from_ratio(std::lround(nd(g) * 100), 100);
        nx += xi.get_d() * xi.get_d();
      }
      if (nx == 0.0) continue;
      double ny = 0.0;
      for (const auto& yi : f.apply(x)) ny += yi.get_d() * yi.get_d();
      EXPECT_LE(std::sqrt(ny), bound * std::sqrt(nx) * (1 + 1e-12));
    }
  }
}
