#include "cagt/algebra/scalar.hpp"

#include <cstdio>

#include "cagt/algebra/errors.hpp"

namespace cagt {

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ') t.push_back(ch);
  if (t.empty()) throw StructuralError("parse_rational: empty string");
  // Decimal notation is accepted and converted exactly ("0.25" -> 1/4).
  if (auto dot = t.find('.'); dot != std::string::npos && t.find('/') == std::string::npos) {
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    mpz_class den = 1;
    for (std::size_t k = dot + 1; k < t.size(); ++k) den *= 10;
    Rational q;
    try {
      q = Rational(mpz_class(digits), den);
    } catch (const std::invalid_argument&) {
      throw StructuralError("parse_rational: bad number '" + text + "'");
    }
    q.canonicalize();
    return q;
  }
  Rational q;
  if (q.set_str(t, 10) != 0) throw StructuralError("parse_rational: bad number '" + text + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string ScalarTraits<Float64>::to_json_string(const Float64& x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x.v);
  return buf;
}

}  // namespace cagt
