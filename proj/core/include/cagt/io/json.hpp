#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cagt/gauge/transferred.hpp"

namespace cagt::io {

using json = nlohmann::ordered_json;

/// Rationals as "n/d" strings, floats as numbers.
template <class F>
json scalar_to_json(const F& x) {
  if constexpr (ScalarTraits<F>::exact) return ScalarTraits<F>::to_json_string(x);
  else return ScalarTraits<F>::to_double(x);
}

inline Rational parse_rational(const json& j) {
  if (j.is_string()) {
    Rational q(j.get<std::string>());
    q.canonicalize();
    return q;
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw StructuralError("expected a rational as \"n/d\" string or integer, got " + j.dump());
}

template <class F>
F scalar_from_json(const json& j) {
  if constexpr (ScalarTraits<F>::exact) {
    return parse_rational(j);
  } else {
    if (j.is_number()) return F(j.get<double>());
    return ScalarTraits<F>::from_rational(parse_rational(j));
  }
}

template <class F>
Mat<F> matrix_from_json(const json& j) {
  const std::size_t n = j.size();
  Mat<F> m(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (j[r].size() != n) throw StructuralError("matrix must be square");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = scalar_from_json<F>(j[r][c]);
  }
  return m;
}

/// Complex from {"vertices": [[x, ..], ..], "facets": [[v0, ..], ..]} or a builtin name.
inline ComplexPtr load_complex(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) {
    const std::string name = spec.substr(8);
    if (name == "interval" || name == "simplex1") return standard_simplex(1);
    if (name == "simplex2") return standard_simplex(2);
    if (name == "simplex3") return standard_simplex(3);
    if (name == "circle") return triangulated_circle();
    throw StructuralError("unknown builtin complex '" + name + "'");
  }
  std::ifstream in(spec);
  if (!in) throw std::runtime_error("cannot read complex file " + spec);
  const json j = json::parse(in);
  std::vector<std::vector<Rational>> coords;
  for (const auto& v : j.at("vertices")) {
    coords.emplace_back();
    for (const auto& x : v) coords.back().push_back(parse_rational(x));
  }
  std::vector<Simplex> facets;
  for (const auto& f : j.at("facets")) facets.push_back(f.get<Simplex>());
  return build_complex(facets, coords);
}

/// γ from a list of terms {"coefficient": "p/q", "row": r, "col": c, "factors": ["lambda1", "dlambda2"]},
/// each the wedge of hat functions λ_v and their differentials dλ_v times coefficient·E_rc.
template <class F>
PolyForm<F> form_from_json(const FormContextPtr& ctx, const json& terms) {
  PolyForm<F> out(ctx);
  for (const auto& t : terms) {
    Mat<F> e = Mat<F>::unit(ctx->l, t.at("row").get<std::size_t>(), t.at("col").get<std::size_t>());
    e *= scalar_from_json<F>(t.value("coefficient", json(1)));
    PolyForm<F> w = PolyForm<F>::constant(ctx, e);
    for (const auto& f : t.value("factors", json::array())) {
      const auto s = f.get<std::string>();
      PolyForm<F> factor(ctx);
      if (s.rfind("dlambda", 0) == 0) factor = PolyForm<F>::dhat(ctx, static_cast<std::uint32_t>(std::stoul(s.substr(7))));
      else if (s.rfind("lambda", 0) == 0) factor = PolyForm<F>::hat(ctx, static_cast<std::uint32_t>(std::stoul(s.substr(6))));
      else throw StructuralError("unknown form generator '" + s + "'");
      w = wedge(w, factor);
    }
    out += w;
  }
  return out;
}

/// {"kind": "constant", "matrix": [[..]]} or {"kind": "unipotent", "n": <form terms>}.
template <class F>
GaugeElement<F> gauge_from_json(const FormContextPtr& ctx, const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") return GaugeElement<F>::constant(ctx, matrix_from_json<F>(j.at("matrix")));
  if (kind == "unipotent") return GaugeElement<F>::unipotent(form_from_json<F>(ctx, j.at("n")));
  throw StructuralError("unknown gauge element kind '" + kind + "'");
}

inline json certificate_to_json(const Certificate& c) {
  json j;
  j["granted"] = c.granted;
  j["tolerance"] = c.tolerance;
  json r = json::object();
  for (const auto& [name, v] : c.residuals) r[name] = {{"residual", v}, {"exact_zero", c.exact_zero.at(name)}};
  j["residuals"] = r;
  j["failing"] = c.failing();
  return j;
}

inline json gate_to_json(const GateReport& g) {
  return {{"ratio", g.ratio}, {"frobenius_bound", g.frobenius}, {"delta1_bound", g.delta1_norm}, {"passed", g.passed()},
          {"offending", g.offending}, {"majorant", g.majorant}};
}

inline json gamma_gate_to_json(const GammaGateDecision& d) {
  return {{"norm", d.norm}, {"e", d.e}, {"ratio", d.ratio}, {"flat", d.flat}, {"admitted", d.admitted}, {"reason", d.reason}};
}

inline json action_to_json(const ActionValue& a) {
  json j{{"value", a.value}};
  if (!a.exact_value.empty()) j["exact"] = a.exact_value;
  j["inner_product"] = a.inner_product;
  j["truncation"] = a.truncation;
  j["error_bound"] = a.error_bound;
  j["is_exact"] = a.exact;
  return j;
}

inline json residuals_to_json(const ResidualReport& r) {
  json j = json::object();
  for (const auto& [name, e] : r) j[name] = {{"residual", e.residual}, {"exact_zero", e.exact_zero}};
  return j;
}

/// Taylor data of D̃ on the cochain basis: m̃_k(y_1..y_k) for arity ≤ max_arity, non-zero entries only.
template <class F>
json transferred_taylor_to_json(const SimplicialSetup<F>& s, const TransferredStructure<F>& t, std::size_t max_arity,
                                std::size_t max_entries = 20000) {
  const auto basis = s.cs->basis();
  const DegreeFn deg = s.cs->degree_fn();
  const std::size_t nk = s.cs->size();
  json out = json::array();
  std::size_t emitted = 0;
  bool complete = true;
  for (std::size_t k = 0; k <= max_arity && complete; ++k) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < k; ++i) count *= nk;
    for (std::size_t idx = 0; idx < count; ++idx) {
      const Word w = index_word(idx, k, nk);
      const auto dy = t.engine.differential(TensorElem<F>::word(w));
      KeyVec<F> v = dy.to_vec();
      if (v.empty()) continue;
      bool neg = suspension_sign_odd(w, deg);
      if (k == 0) neg = !neg;
      json entry;
      json in = json::array();
      for (Key key : w) in.push_back(basis->labels[key]);
      entry["inputs"] = in;
      json val = json::object();
      for (const auto& [key, c] : v) val[basis->labels[key]] = scalar_to_json<F>(neg ? F(-c) : c);
      entry["value"] = val;
      out.push_back(entry);
      if (++emitted >= max_entries) {
        complete = false;
        break;
      }
    }
  }
  return {{"max_arity", max_arity}, {"complete", complete}, {"entries", out}};
}

template <class F>
json transfer_to_json(const SimplicialSetup<F>& s, const TransferredStructure<F>& t, std::size_t taylor_arity) {
  json j;
  // Path, tail and truncation describe the series evaluated so far.
  const auto taylor = transferred_taylor_to_json(s, t, taylor_arity);
  j["path"] = t.engine.path() == SeriesPath::nilpotent ? "nilpotent path" : "gated series";
  j["curved"] = t.curved;
  j["series_terms"] = t.engine.max_terms();
  j["tail_bound"] = t.engine.tail_bound();
  j["length_truncated"] = t.engine.length_truncated();
  if (t.gate) j["gate"] = gate_to_json(*t.gate);
  j["taylor"] = taylor;
  return j;
}

inline void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace cagt::io
