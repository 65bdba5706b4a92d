#pragma once

#include "femnet/affine.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace femnet {

/// Conforming simplicial grid in dimension 1, 2 or 3.
///
/// Immutable after construction; all queries are read-only.
class SimplicialMesh {
 public:
  struct Options {
    bool check_conformity = true;
    double degeneracy_tol = 1e-12;  // relative to (max edge length)^d
  };

  /// Validates and precomputes vertex -> simplex adjacency.
  /// Throws DegenerateSimplex, NonConforming or InvalidInput.
  static SimplicialMesh build(std::vector<Vec> vertices, std::vector<std::vector<int>> simplices,
                              std::optional<std::vector<bool>> boundary = std::nullopt);
  static SimplicialMesh build(std::vector<Vec> vertices, std::vector<std::vector<int>> simplices,
                              std::optional<std::vector<bool>> boundary, const Options& options);

  int dim() const { return dim_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_simplices() const { return static_cast<int>(simplices_.size()); }

  const Vec& vertex(int i) const { return vertices_[i]; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<int>& simplex(int k) const { return simplices_[k]; }
  const std::vector<std::vector<int>>& simplices() const { return simplices_; }
  const std::vector<bool>& boundary() const { return boundary_; }

  /// Indices of simplices containing vertex i, ascending.
  const std::vector<int>& incident(int i) const { return incident_[i]; }

  /// Barycentric coordinates of x with respect to simplex k.
  Vec barycentric(int k, const Vec& x) const;
  bool simplex_contains(int k, const Vec& x, double tol = 1e-10) const;
  /// First simplex containing x, if any.
  std::optional<int> locate(const Vec& x, double tol = 1e-10) const;

  double simplex_volume(int k) const;
  /// Simplex k as { x : barycentric_j(x) >= 0 for all j }.
  Polyhedron simplex_polyhedron(int k) const;
  Box bounding_box() const;

  /// Uniform random point in the union of simplices (volume weighted).
  template <class Rng>
  Vec sample_point(Rng& rng) const;

 private:
  SimplicialMesh() = default;

  int dim_ = 0;
  std::vector<Vec> vertices_;
  std::vector<std::vector<int>> simplices_;
  std::vector<bool> boundary_;
  std::vector<std::vector<int>> incident_;
  std::vector<Mat> bary_;  // inverse of the (d+1)x(d+1) vertex matrix per simplex
  std::vector<double> cumulative_volume_;
};

/// Vertex star: incident simplices and the global affine extension of
/// the nodal basis function on each of them.
struct VertexStar {
  int center = -1;
  std::vector<int> incident;
  std::vector<AffineFunc> local_affines;
};

VertexStar vertex_star(const SimplicialMesh& mesh, int i);

/// True iff the union of the simplices incident to vertex i is convex
/// (half-space test on every boundary facet of the star, tolerance 1e-10).
bool is_locally_convex(const SimplicialMesh& mesh, int i);

/// Inner half-spaces of the boundary facets of the star G(i). For a locally
/// convex vertex their intersection is exactly G(i).
std::vector<HalfSpace> star_facet_halfspaces(const SimplicialMesh& mesh, int i);

/// Maximum number of simplices sharing one vertex.
int compute_kh(const SimplicialMesh& mesh);

/// Inradius / circumradius for every simplex; 1 for intervals.
std::vector<double> shape_regularity(const SimplicialMesh& mesh);

/// Nodal basis function phi_i evaluated through the vertex star.
double nodal_basis(const SimplicialMesh& mesh, const VertexStar& star, const Vec& x);

/// Piecewise-linear interpolant sum_i coeffs[i] phi_i(x); zero outside the mesh.
double fem_interpolant(const SimplicialMesh& mesh, std::span<const double> coeffs, const Vec& x);

template <class Rng>
Vec SimplicialMesh::sample_point(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double target = unif(rng) * cumulative_volume_.back();
  const auto it = std::lower_bound(cumulative_volume_.begin(), cumulative_volume_.end(), target);
  const int k = std::min<int>(static_cast<int>(it - cumulative_volume_.begin()), num_simplices() - 1);
  // Uniform barycentric weights via normalized exponentials.
  std::exponential_distribution<double> ex(1.0);
  Vec w(dim_ + 1);
  for (int j = 0; j <= dim_; ++j) w(j) = ex(rng);
  w /= w.sum();
  Vec x = Vec::Zero(dim_);
  for (int j = 0; j <= dim_; ++j) x += w(j) * vertices_[simplices_[k][j]];
  return x;
}

}  // namespace femnet
