#include "cagt/complex/simplicial_complex.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "cagt/algebra/errors.hpp"

namespace cagt {

namespace {

Rational factorial(int n) {
  Rational f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// All non-empty subsets of s, preserving order.
void add_faces(const Simplex& s, std::vector<std::set<Simplex>>& by_dim) {
  const std::size_t n = s.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Simplex f;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) f.push_back(s[i]);
    by_dim[f.size() - 1].insert(std::move(f));
  }
}

FacetGeometry facet_geometry(const std::vector<std::vector<Rational>>& coords, const Simplex& s) {
  const std::size_t n = s.size() - 1;
  const auto& v0 = coords[s[0]];
  FacetGeometry g;
  g.metric = Mat<Rational>(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Rational dot = 0;
      for (std::size_t x = 0; x < v0.size(); ++x) dot += (coords[s[a + 1]][x] - v0[x]) * (coords[s[b + 1]][x] - v0[x]);
      g.metric(a, b) = dot;
    }
  const Rational det = n == 0 ? Rational(1) : g.metric.determinant();
  if (sgn(det) <= 0) {
    std::string t;
    for (auto v : s) t += std::to_string(v) + " ";
    throw GeometryError("degenerate simplex (zero volume): " + t);
  }
  g.covector_metric = n == 0 ? Mat<Rational>(0) : g.metric.inverse();
  const Rational nf = factorial(static_cast<int>(n));
  g.volume_squared = det / (nf * nf);
  g.volume = exact_sqrt(g.volume_squared);
  g.volume_float = std::sqrt(g.volume_squared.get_d());
  return g;
}

}  // namespace

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
  Rational r(n, d);
  r.canonicalize();
  return r;
}

SimplicialComplex::SimplicialComplex(std::vector<std::vector<Rational>> coords, const std::vector<Simplex>& facets)
    : coords_(std::move(coords)) {
  if (facets.empty()) throw StructuralError("build_complex: no facets");
  const std::size_t amb = coords_.empty() ? 0 : coords_.front().size();
  for (const auto& c : coords_)
    if (c.size() != amb) throw StructuralError("build_complex: inconsistent coordinate dimension");

  std::size_t max_size = 0;
  std::vector<Simplex> sorted;
  for (auto f : facets) {
    if (f.empty()) throw StructuralError("build_complex: empty facet");
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end()) throw StructuralError("build_complex: repeated vertex in facet");
    for (auto v : f)
      if (v >= coords_.size()) throw StructuralError("build_complex: facet references undeclared vertex " + std::to_string(v));
    if (f.size() > 31) throw StructuralError("build_complex: simplex dimension too large");
    max_size = std::max(max_size, f.size());
    sorted.push_back(std::move(f));
  }

  std::vector<std::set<Simplex>> by_dim(max_size);
  for (const auto& f : sorted) add_faces(f, by_dim);
  if (by_dim[0].size() != coords_.size()) throw StructuralError("build_complex: dangling vertex not covered by any facet");

  simplices_.resize(max_size);
  index_.resize(max_size);
  for (std::size_t k = 0; k < max_size; ++k) {
    simplices_[k].assign(by_dim[k].begin(), by_dim[k].end());
    for (std::size_t i = 0; i < simplices_[k].size(); ++i) index_[k][simplices_[k][i]] = i;
  }

  // Maximal simplices: those not a proper face of a listed facet.
  std::set<Simplex> maximal(sorted.begin(), sorted.end());
  for (const auto& f : sorted)
    for (const auto& g : sorted)
      if (g.size() > f.size() && std::includes(g.begin(), g.end(), f.begin(), f.end())) maximal.erase(f);
  // Order facets by (dimension descending, lexicographic) for a stable layout.
  facets_.assign(maximal.begin(), maximal.end());
  std::stable_sort(facets_.begin(), facets_.end(), [](const Simplex& a, const Simplex& b) { return a.size() > b.size(); });
  for (const auto& f : facets_) geometry_.push_back(facet_geometry(coords_, f));

  owners_.resize(max_size);
  for (std::size_t k = 0; k < max_size; ++k)
    for (const auto& s : simplices_[k]) {
      bool found = false;
      for (std::size_t f = 0; f < facets_.size() && !found; ++f)
        if (auto loc = local_positions(f, s)) {
          owners_[k].push_back(Owner{f, *loc});
          found = true;
        }
      if (!found) throw StructuralError("build_complex: simplex without owner facet");
    }
}

std::optional<std::size_t> SimplicialComplex::find(const Simplex& s) const {
  if (s.empty() || s.size() > index_.size()) return std::nullopt;
  const auto& idx = index_[s.size() - 1];
  auto it = idx.find(s);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

std::optional<std::vector<std::size_t>> SimplicialComplex::local_positions(std::size_t f, const Simplex& s) const {
  const auto& fac = facets_.at(f);
  std::vector<std::size_t> loc;
  for (auto v : s) {
    auto it = std::lower_bound(fac.begin(), fac.end(), v);
    if (it == fac.end() || *it != v) return std::nullopt;
    loc.push_back(static_cast<std::size_t>(it - fac.begin()));
  }
  return loc;
}

std::vector<std::pair<std::size_t, std::size_t>> SimplicialComplex::facets_of_vertex(std::uint32_t v) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t f = 0; f < facets_.size(); ++f)
    if (auto loc = local_positions(f, Simplex{v})) out.emplace_back(f, loc->front());
  return out;
}

std::optional<Rational> SimplicialComplex::total_top_volume() const {
  Rational total = 0;
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    if (facet_dim(f) != dim()) continue;
    if (!geometry_[f].volume) return std::nullopt;
    total += *geometry_[f].volume;
  }
  return total;
}

Rational SimplicialComplex::total_top_volume_squared_sum() const {
  Rational total = 0;
  for (std::size_t f = 0; f < facets_.size(); ++f)
    if (facet_dim(f) == dim()) total += geometry_[f].volume_squared;
  return total;
}

ComplexPtr build_complex(const std::vector<Simplex>& facets, const std::vector<std::vector<Rational>>& coords) {
  return std::make_shared<const SimplicialComplex>(coords, facets);
}

ComplexPtr standard_simplex(int n) {
  if (n < 0) throw StructuralError("standard_simplex: negative dimension");
  std::vector<std::vector<Rational>> coords(n + 1, std::vector<Rational>(std::max(n, 1), Rational(0)));
  for (int k = 1; k <= n; ++k) coords[k][k - 1] = 1;
  Simplex s;
  for (int k = 0; k <= n; ++k) s.push_back(static_cast<std::uint32_t>(k));
  return build_complex({s}, coords);
}

ComplexPtr triangulated_circle() {
  return build_complex({{0, 1}, {1, 2}, {0, 2}}, {{Rational(0), Rational(0)}, {Rational(3), Rational(0)}, {Rational(0), Rational(4)}});
}

ComplexPtr barycentric_subdivide(const ComplexPtr& k, int depth) {
  if (depth < 0) throw StructuralError("barycentric_subdivide: negative depth");
  ComplexPtr cur = k;
  for (int step = 0; step < depth; ++step) {
    const auto& K = *cur;
    // One new vertex per simplex of K, numbered by (dimension, index).
    std::vector<std::vector<std::size_t>> vid(K.dim() + 1);
    std::vector<std::vector<Rational>> coords;
    for (int d = 0; d <= K.dim(); ++d)
      for (std::size_t i = 0; i < K.count(d); ++i) {
        const auto& s = K.simplex(d, i);
        std::vector<Rational> c(K.ambient_dim(), Rational(0));
        for (auto v : s)
          for (std::size_t x = 0; x < c.size(); ++x) c[x] += K.coords(v)[x];
        for (auto& x : c) x /= static_cast<long>(s.size());
        vid[d].push_back(coords.size());
        coords.push_back(std::move(c));
      }
    // Maximal flags inside each facet: vertex orderings of the facet.
    std::vector<Simplex> facets;
    for (std::size_t f = 0; f < K.num_facets(); ++f) {
      Simplex fac = K.facet(f);
      std::vector<std::uint32_t> perm = fac;
      do {
        Simplex flag;
        for (std::size_t len = 1; len <= perm.size(); ++len) {
          Simplex face(perm.begin(), perm.begin() + static_cast<long>(len));
          std::sort(face.begin(), face.end());
          flag.push_back(static_cast<std::uint32_t>(vid[len - 1][*K.find(face)]));
        }
        std::sort(flag.begin(), flag.end());
        facets.push_back(std::move(flag));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    cur = build_complex(facets, coords);
  }
  return cur;
}

}  // namespace cagt
