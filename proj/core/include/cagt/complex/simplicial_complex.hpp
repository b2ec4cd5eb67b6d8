#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "cagt/algebra/matrix.hpp"
#include "cagt/algebra/scalar.hpp"

namespace cagt {

/// Vertex tuple in strictly increasing global order.
using Simplex = std::vector<std::uint32_t>;

/// Metric data of one maximal simplex, in the reduced barycentric chart
/// x = v_0 + Σ_{k≥1} λ_k (v_k - v_0).
struct FacetGeometry {
  Mat<Rational> metric;                ///< J^T J, the Gram matrix of edge vectors v_k - v_0
  Mat<Rational> covector_metric;       ///< (J^T J)^{-1}, pairing of dλ_1..dλ_n
  Rational volume_squared;             ///< det(J^T J) / (n!)^2
  std::optional<Rational> volume;      ///< exact volume when volume_squared is a rational square
  double volume_float = 0.0;
};

/// Oriented simplicial complex with affine geometry.
///
/// Simplices are ordered tuples of vertex indices; orientation is induced by
/// the global vertex order and the i-th face of σ carries the sign (-1)^i.
class SimplicialComplex {
 public:
  /// Closes `facets` under faces. Throws StructuralError on bad or dangling
  /// vertices and GeometryError on zero-volume maximal simplices.
  SimplicialComplex(std::vector<std::vector<Rational>> coords, const std::vector<Simplex>& facets);

  std::size_t num_vertices() const { return coords_.size(); }
  std::size_t ambient_dim() const { return coords_.empty() ? 0 : coords_.front().size(); }
  int dim() const { return static_cast<int>(simplices_.size()) - 1; }
  std::size_t count(int k) const { return k < 0 || k > dim() ? 0 : simplices_[k].size(); }
  const std::vector<Simplex>& simplices(int k) const { return simplices_.at(k); }
  const Simplex& simplex(int k, std::size_t idx) const { return simplices_.at(k).at(idx); }
  std::optional<std::size_t> find(const Simplex& s) const;
  const std::vector<Rational>& coords(std::size_t v) const { return coords_.at(v); }

  /// Maximal simplices, addressed by facet id.
  std::size_t num_facets() const { return facets_.size(); }
  const Simplex& facet(std::size_t f) const { return facets_.at(f); }
  int facet_dim(std::size_t f) const { return static_cast<int>(facets_.at(f).size()) - 1; }
  const FacetGeometry& geometry(std::size_t f) const { return geometry_.at(f); }
  /// Facets containing vertex v together with its local position.
  std::vector<std::pair<std::size_t, std::size_t>> facets_of_vertex(std::uint32_t v) const;

  /// Canonical owner facet of a simplex and the local positions of its vertices there.
  struct Owner {
    std::size_t facet;
    std::vector<std::size_t> local;
  };
  const Owner& owner(int k, std::size_t idx) const { return owners_.at(k).at(idx); }
  /// Local positions of σ's vertices inside facet f, if σ ⊂ f.
  std::optional<std::vector<std::size_t>> local_positions(std::size_t f, const Simplex& s) const;

  /// Sum of volumes of maximal simplices of top dimension.
  Rational total_top_volume_squared_sum() const;
  std::optional<Rational> total_top_volume() const;

  const std::vector<Simplex>& facet_list() const { return facets_; }

 private:
  std::vector<std::vector<Rational>> coords_;
  std::vector<std::vector<Simplex>> simplices_;
  std::vector<std::map<Simplex, std::size_t>> index_;
  std::vector<Simplex> facets_;
  std::vector<FacetGeometry> geometry_;
  std::vector<std::vector<Owner>> owners_;
};

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

ComplexPtr build_complex(const std::vector<Simplex>& facets, const std::vector<std::vector<Rational>>& coords);

/// Standard embedded n-simplex: vertex 0 at the origin, vertex k at e_k.
ComplexPtr standard_simplex(int n);
/// Boundary of a 3-4-5 right triangle: a triangulated circle with rational edge lengths.
ComplexPtr triangulated_circle();

/// depth-fold barycentric subdivision; new vertices are barycenters ordered by
/// (dimension of the originating simplex, its index).
ComplexPtr barycentric_subdivide(const ComplexPtr& k, int depth);

/// Exact square root of a non-negative rational, if it is a perfect square.
std::optional<Rational> exact_sqrt(const Rational& q);

}  // namespace cagt
