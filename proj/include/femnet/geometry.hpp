#pragma once

#include "femnet/affine.hpp"

#include <optional>
#include <vector>

// Low-dimensional polytope helpers: interval / convex polygon clipping for the
// d <= 2 arrangement code, brute-force vertex enumeration for any d.

namespace femnet::geometry {

/// A bounded convex cell in dimension 1 or 2. In 1D `vertices` holds the two
/// interval endpoints; in 2D the polygon vertices in counter-clockwise order.
struct ConvexCell {
  std::vector<Vec> vertices;
  Polyhedron constraints;  // half-spaces that carved the cell (box included)

  double measure() const;  // length or area
  Vec centroid() const;    // mean of the vertices
};

ConvexCell box_cell(const Box& box);

/// Part of the cell where h >= 0; empty optional when that part has measure
/// below min_measure.
std::optional<ConvexCell> clip(const ConvexCell& cell, const HalfSpace& h, double min_measure = 1e-12);

/// Splits every cell by the hyperplane { h = 0 }; cells it does not cross are kept whole.
std::vector<ConvexCell> split_all(const std::vector<ConvexCell>& cells, const HalfSpace& h, double min_measure = 1e-12);

/// Vertices of { x : all half-spaces hold } by brute force over d-subsets of
/// the constraints. Exact duplicates within 1e-9 are merged.
std::vector<Vec> enumerate_vertices(const Polyhedron& p, int dim, double tol = 1e-9);

}  // namespace femnet::geometry
