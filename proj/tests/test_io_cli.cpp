#include <gtest/gtest.h>

#include "cagt/io/json.hpp"

using namespace cagt;
using R = Rational;
using nlohmann::json;

TEST(Json, RationalsRoundTrip) {
  EXPECT_EQ(io::parse_rational(json("6/4")), R(3, 2));
  EXPECT_EQ(io::parse_rational(json(-7)), R(-7));
  EXPECT_EQ(io::scalar_to_json(ScalarTraits<R>::from_ratio(-3, 9)).get<std::string>(), "-1/3");
  EXPECT_THROW(io::parse_rational(json(0.5)), StructuralError);
  EXPECT_DOUBLE_EQ(ScalarTraits<Float64>::to_double(io::scalar_from_json<Float64>(json("1/4"))), 0.25);
}

TEST(Json, MatricesMustBeSquare) {
  const auto m = io::matrix_from_json<R>(json::parse(R"([["1", "1/2"], [0, 1]])"));
  EXPECT_EQ(m(0, 1), R(1, 2));
  EXPECT_THROW(io::matrix_from_json<R>(json::parse(R"([[1, 2]])")), StructuralError);
}

TEST(Json, FormTermsBuildWedgesOfHatFunctions) {
  const auto ctx = make_form_context(standard_simplex(2), 2);
  const auto w = io::form_from_json<R>(ctx, json::parse(R"([
    {"coefficient": "2/3", "row": 0, "col": 1, "factors": ["lambda1", "dlambda2"]},
    {"row": 1, "col": 0, "factors": ["dlambda0"]}])"));
  const auto want = wedge(PolyForm<R>::hat(ctx, 1, Mat<R>::unit(2, 0, 1) * R(2, 3)), PolyForm<R>::dhat(ctx, 2)) +
                    PolyForm<R>::dhat(ctx, 0, Mat<R>::unit(2, 1, 0));
  EXPECT_TRUE(w == want);
  EXPECT_THROW(io::form_from_json<R>(ctx, json::parse(R"([{"row": 0, "col": 0, "factors": ["mu1"]}])")),
               StructuralError);
}

TEST(Json, GaugeElements) {
  const auto ctx = make_form_context(standard_simplex(1), 2);
  const auto g = io::gauge_from_json<R>(ctx, json::parse(R"({"kind": "constant", "matrix": [[1, 2], [0, 1]]})"));
  EXPECT_TRUE(g.is_constant());
  const auto u = io::gauge_from_json<R>(
      ctx, json::parse(R"({"kind": "unipotent", "n": [{"row": 0, "col": 1, "factors": ["lambda1"]}]})"));
  EXPECT_FALSE(u.is_constant());
  EXPECT_TRUE(wedge(u.g(), u.inverse_form()) == PolyForm<R>::identity(ctx));
  EXPECT_THROW(io::gauge_from_json<R>(ctx, json::parse(R"({"kind": "rotation"})")), StructuralError);
}

TEST(Json, BuiltinComplexes) {
  EXPECT_EQ(io::load_complex("builtin:simplex3")->dim(), 3);
  EXPECT_EQ(io::load_complex("builtin:circle")->dim(), 1);
  EXPECT_THROW(io::load_complex("builtin:torus"), StructuralError);
}
