#pragma once

#include <map>
#include <string>
#include <vector>

#include "cagt/coalgebra/coderivation.hpp"

namespace cagt {

/// Chain contraction (p, i, H) between (C_1, d_1) and (C_2, d_2), as operators on tensor elements.
template <class F>
struct ContractionOps {
  LinOp<F> p, i, h, d1, d2;
};

/// Residuals of the special-contraction identities on sample inputs.
struct Certificate {
  /// Identity name → largest ℓ² residual over the samples.
  std::map<std::string, double> residuals;
  /// Identity name → every sampled residual vanished exactly.
  std::map<std::string, bool> exact_zero;
  double tolerance = 0.0;
  bool granted = false;

  std::vector<std::string> failing() const {
    std::vector<std::string> out;
    for (const auto& [name, r] : residuals)
      if (tolerance == 0.0 ? !exact_zero.at(name) : r > tolerance) out.push_back(name);
    return out;
  }
};

namespace detail {

template <class F>
void record(Certificate& c, const std::string& name, const TensorElem<F>& r) {
  auto [it, fresh] = c.residuals.emplace(name, 0.0);
  it->second = std::max(it->second, r.norm());
  auto [jt, fresh2] = c.exact_zero.emplace(name, true);
  if (!r.is_zero()) jt->second = false;
}

}  // namespace detail

/// Checks pi = 1, ip − 1 = dH + Hd, Hi = 0, pH = 0, H² = 0, plus the chain-map
/// conditions p d_1 = d_2 p and i d_2 = d_1 i, on the given samples of C_1 and C_2.
/// A tolerance of 0 demands exact zeros.
template <class F>
Certificate verify_special_contraction(const ContractionOps<F>& c, const std::vector<TensorElem<F>>& big,
                                       const std::vector<TensorElem<F>>& small, double tolerance) {
  Certificate cert;
  cert.tolerance = tolerance;
  for (const char* n : {"pi=1", "ip-1=dH+Hd", "Hi=0", "pH=0", "HH=0", "pd=dp", "di=id"}) {
    cert.residuals[n] = 0.0;
    cert.exact_zero[n] = true;
  }
  for (const auto& y : small) {
    const auto iy = c.i(y);
    detail::record(cert, "pi=1", c.p(iy) - y);
    detail::record(cert, "Hi=0", c.h(iy));
    detail::record(cert, "di=id", c.d1(iy) - c.i(c.d2(y)));
  }
  for (const auto& x : big) {
    const auto hx = c.h(x);
    detail::record(cert, "ip-1=dH+Hd", c.i(c.p(x)) - x - c.d1(hx) - c.h(c.d1(x)));
    detail::record(cert, "pH=0", c.p(hx));
    detail::record(cert, "HH=0", c.h(hx));
    detail::record(cert, "pd=dp", c.p(c.d1(x)) - c.d2(c.p(x)));
  }
  cert.granted = cert.failing().empty();
  return cert;
}

/// Key-level contraction data on V (big) and W (small): degree-0 p, i, degree −1 h, differentials.
template <class F>
struct KeyContraction {
  KeyOp<F> p, i, h, d_big, d_small;
  DegreeFn degree_big, degree_small;  ///< unsuspended
};

/// The lifted special contraction (T(p), T(i), T(H)) on the tensor coalgebras:
/// T(p) = p^{⊗n}, T(i) = i^{⊗n}, T(H) = Σ (ip)^{⊗r} ⊗ h ⊗ 1^{⊗t} with h = sHs⁻¹,
/// and differentials the coderivations extending d.
template <class F>
struct LiftedContraction {
  KeyContraction<F> base;
  KeyOp<F> ip;
  DegreeFn sdeg_big, sdeg_small;
  SuspendedTaylor<F> d_big_coder, d_small_coder;

  TensorElem<F> Tp(const TensorElem<F>& x) const { return tensor_power(base.p, x); }
  TensorElem<F> Ti(const TensorElem<F>& y) const { return tensor_power(base.i, y); }
  TensorElem<F> TH(const TensorElem<F>& x) const { return one_sided_extension(ip, base.h, sdeg_big, x); }
  TensorElem<F> d1(const TensorElem<F>& x) const { return apply_coderivation(d_big_coder, x); }
  TensorElem<F> d2(const TensorElem<F>& y) const { return apply_coderivation(d_small_coder, y); }

  ContractionOps<F> ops() const {
    const auto self = *this;
    return {[self](const TensorElem<F>& x) { return self.Tp(x); }, [self](const TensorElem<F>& y) { return self.Ti(y); },
            [self](const TensorElem<F>& x) { return self.TH(x); }, [self](const TensorElem<F>& x) { return self.d1(x); },
            [self](const TensorElem<F>& y) { return self.d2(y); }};
  }
};

template <class F>
SuspendedTaylor<F> differential_coderivation(const KeyOp<F>& d, const DegreeFn& degree) {
  TaylorFamily<F> t;
  t.min_arity = 1;
  t.max_arity = 1;
  t.base_degree = 2;
  t.degree = degree;
  t.m = [d](std::span<const Key> a) { return a.size() == 1 ? d(a[0]) : KeyVec<F>{}; };
  return suspend_coderivation(std::move(t));
}

/// Lifts a certified key-level contraction to T(sV). Refuses an uncertified one.
template <class F>
LiftedContraction<F> tensor_lift(const KeyContraction<F>& c, const Certificate& cert) {
  if (!cert.granted) throw HypothesisViolation("tensor_lift: input contraction is not certified");
  LiftedContraction<F> out;
  out.base = c;
  out.ip = KeyOp<F>([p = c.p, i = c.i](Key k) { return i.apply(p(k)); });
  const DegreeFn db = c.degree_big, ds = c.degree_small;
  out.sdeg_big = [db](Key k) { return db(k) - 1; };
  out.sdeg_small = [ds](Key k) { return ds(k) - 1; };
  out.d_big_coder = differential_coderivation(c.d_big, c.degree_big);
  out.d_small_coder = differential_coderivation(c.d_small, c.degree_small);
  return out;
}

/// Key-level contraction as operators on length-one tensors (for certification on V itself).
template <class F>
ContractionOps<F> key_contraction_ops(const KeyContraction<F>& c) {
  auto lift = [](KeyOp<F> op) {
    return [op](const TensorElem<F>& x) {
      TensorElem<F> out;
      for (const auto& [w, coeff] : x.terms()) {
        if (w.size() != 1) throw StructuralError("key contraction applied to a word of length ≠ 1");
        for (const auto& [k, c] : op(w[0])) out.add(Word{k}, c * coeff);
      }
      return out;
    };
  };
  return {lift(c.p), lift(c.i), lift(c.h), lift(c.d_big), lift(c.d_small)};
}

}  // namespace cagt
