#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace cagt {

/// Exact rational scalar. GMP keeps every result in canonical form.
using Rational = mpq_class;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

/// IEEE double that remembers whether any operation producing it rounded.
///
/// Rounding is detected with error-free transforms (TwoSum for addition,
/// fma residuals for multiplication and division), so the flag is exact:
/// `inexact == false` guarantees the value equals the real-number result.
struct Float64 {
  double v = 0.0;
  bool inexact = false;

  Float64() = default;
  Float64(double x) : v(x) {}  // NOLINT(google-explicit-constructor)
  Float64(int x) : v(x) {}     // NOLINT(google-explicit-constructor)
  Float64(double x, bool flag) : v(x), inexact(flag) {}

  friend Float64 operator+(Float64 a, Float64 b) {
    const double s = a.v + b.v;
    const double bb = s - a.v;
    const double err = (a.v - (s - bb)) + (b.v - bb);
    return {s, a.inexact || b.inexact || err != 0.0};
  }
  friend Float64 operator-(Float64 a, Float64 b) { return a + Float64{-b.v, b.inexact}; }
  friend Float64 operator-(Float64 a) { return {-a.v, a.inexact}; }
  friend Float64 operator*(Float64 a, Float64 b) {
    const double p = a.v * b.v;
    const double err = std::fma(a.v, b.v, -p);
    return {p, a.inexact || b.inexact || err != 0.0};
  }
  friend Float64 operator/(Float64 a, Float64 b) {
    if (b.v == 0.0) throw std::domain_error("Float64: division by zero");
    const double q = a.v / b.v;
    const double err = std::fma(q, b.v, -a.v);
    return {q, a.inexact || b.inexact || err != 0.0};
  }
  Float64& operator+=(Float64 b) { return *this = *this + b; }
  Float64& operator-=(Float64 b) { return *this = *this - b; }
  Float64& operator*=(Float64 b) { return *this = *this * b; }
  Float64& operator/=(Float64 b) { return *this = *this / b; }

  friend bool operator==(Float64 a, Float64 b) { return a.v == b.v; }
  friend bool operator!=(Float64 a, Float64 b) { return a.v != b.v; }
  friend std::ostream& operator<<(std::ostream& os, Float64 x) { return os << x.v; }
};

/// Uniform access to the two scalar backends used by every templated engine.
template <class F>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational from_rational(const Rational& q) { return q; }
  static Rational from_int(long n) { return Rational(n); }
  static Rational from_ratio(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
  }
  static std::string to_json_string(const Rational& x) { return to_string(x); }
  /// |x| rounded up to the next double.
  static double abs_upper(const Rational& x) {
    const double d = std::fabs(x.get_d());
    return d == 0.0 && sgn(x) == 0 ? 0.0 : std::nextafter(d, std::numeric_limits<double>::infinity());
  }
  static bool inexact(const Rational&) { return false; }
};

template <>
struct ScalarTraits<Float64> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float64";
  static Float64 zero() { return Float64(0.0); }
  static Float64 one() { return Float64(1.0); }
  static bool is_zero(const Float64& x) { return x.v == 0.0; }
  static double to_double(const Float64& x) { return x.v; }
  static Float64 from_rational(const Rational& q) {
    const double d = q.get_d();
    return {d, Rational(d) != q};
  }
  static Float64 from_int(long n) { return Float64(static_cast<double>(n)); }
  static Float64 from_ratio(long n, long d) { return Float64(double(n)) / Float64(double(d)); }
  static std::string to_json_string(const Float64& x);
  static double abs_upper(const Float64& x) { return std::fabs(x.v); }
  static bool inexact(const Float64& x) { return x.inexact; }
};

}  // namespace cagt
