#pragma once

#include "femnet/cpwl.hpp"
#include "femnet/mesh.hpp"

#include <random>
#include <string>
#include <vector>

// Mesh and CPWL generators shared by the unit tests and the acceptance suite.

namespace femnet::testing {

/// Chain of n nodes on [0, 1]; interior nodes jittered when `jitter` > 0.
SimplicialMesh chain_1d(int n, std::mt19937_64& rng, double jitter = 0.0);

/// nx x ny squares on [0,1]^2, each cut by the same diagonal (k_h = 6).
SimplicialMesh diagonal_grid(int nx, int ny);

/// nx x ny squares, each split into four triangles through its center.
SimplicialMesh criss_cross_grid(int nx, int ny);

/// Delaunay triangulation (brute-force empty-circumcircle test) of n points
/// in convex position on a random ellipse plus their centroid.
SimplicialMesh convex_delaunay(int n, std::mt19937_64& rng);

/// n^3 cubes on [0,1]^3, each split into 6 tetrahedra along the main
/// diagonal (Freudenthal / Kuhn subdivision, k_h = 24 at interior vertices).
SimplicialMesh freudenthal_cube(int n);

struct NamedMesh {
  std::string name;
  SimplicialMesh mesh;
};

/// The locally convex corpus used for deep-pathway checks (>= 20 meshes).
std::vector<NamedMesh> mesh_corpus(std::mt19937_64& rng);

/// max_k min_{i in s_k} l_i for random affines and clauses in dimension d,
/// tabulated on [-1,1]^d. The result has at most `max_pieces` pieces.
CpwlPieces random_cpwl(int d, int max_pieces, std::mt19937_64& rng);

/// Uniform sample in the box.
Vec sample_box(const Box& box, std::mt19937_64& rng);

/// Random affine function with entries in [-scale, scale].
AffineFunc random_affine(int d, std::mt19937_64& rng, double scale = 1.0);

}  // namespace femnet::testing
