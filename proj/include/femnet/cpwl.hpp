#pragma once

#include "femnet/affine.hpp"
#include "femnet/geometry.hpp"
#include "femnet/mesh.hpp"

#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace femnet {

/// CPWL function as an explicit piece list. Each region is a convex
/// polyhedron; `region_piece[r]` names the affine used on region r, so a
/// piece whose domain is not convex (the zero piece of a hat) may own several
/// regions. An empty `region_piece` means region r carries piece r.
struct CpwlPieces {
  int dim = 0;
  std::vector<AffineFunc> pieces;
  std::vector<Polyhedron> regions;
  std::vector<int> region_piece;
  std::optional<Box> domain;  // nullopt: all of R^d

  int piece_of(int region) const { return region_piece.empty() ? region : region_piece[region]; }
  int num_regions() const { return static_cast<int>(regions.size()); }
};

/// f(x) = max_k min_{i in clauses[k]} pieces[i](x). Indices are 0-based.
struct LatticeForm {
  std::vector<AffineFunc> pieces;
  std::vector<std::vector<int>> clauses;

  int dim() const { return pieces.empty() ? 0 : pieces.front().dim(); }
};

/// One cell of the arrangement of all difference hyperplanes, with the
/// ascending order of the piece values inside it.
struct OrderedCell {
  geometry::ConvexCell cell;
  std::vector<int> order;
};

struct UniqueOrderPartition {
  std::vector<OrderedCell> cells;
};

/// Throws OutsideDomain when x lies outside the domain box or every region.
double eval_pieces(const CpwlPieces& f, const Vec& x);
double eval_lattice(const LatticeForm& f, const Vec& x);

/// Structural checks plus sampled coverage and continuity (at the vertices of
/// every bounded region). Throws InvalidInput with the first violation found.
void validate_pieces(const CpwlPieces& f, std::mt19937_64& rng, int samples = 2000);

/// d <= 2 only. Requires a domain box.
/// Throws DimensionUnsupported, DuplicatePieces or InvalidInput.
UniqueOrderPartition unique_order_partition(const CpwlPieces& f);

/// Ascending order of the piece values at x (ties by index).
std::vector<int> value_order(const std::vector<AffineFunc>& pieces, const Vec& x);

/// One clause per cell: s_k = { i : l_i >= l_k at the cell centroid }.
/// Throws AmbiguousActivePiece.
LatticeForm lattice_from_unique_order(const CpwlPieces& f, const UniqueOrderPartition& p);

/// One clause per region, membership decided at the vertices of region
/// intersected with the domain box. Throws UnboundedRegionUnsupported without a box.
LatticeForm lattice_from_convex_regions(const CpwlPieces& f);

/// Removes clauses that are exactly identical as index sets.
LatticeForm dedup_clauses(const LatticeForm& f);

/// Continuous 1D function on [knots.front(), knots.back()] with the given
/// slope per interval and value `start_value` at the left end.
CpwlPieces cpwl_1d_from_slopes(const std::vector<double>& knots, const std::vector<double>& slopes,
                               double start_value);

/// For a 1D path whose first line l_0 dominates its last line l_r at both
/// ends of [0, 1], returns the index p (in left-to-right order) of the
/// minimal-slope line, which satisfies b_p >= b_0 and k_p + b_p <= k_r + b_r.
/// Throws PreconditionViolated.
int verify_1d_path_lemma(const CpwlPieces& p);

/// Builds a piece list from an arbitrary CPWL evaluator whose pieces are
/// among `candidates`: the arrangement cells of the candidates are labelled
/// with the matching candidate at their centroid. Only used candidates are kept.
CpwlPieces tabulate_pieces(const std::vector<AffineFunc>& candidates,
                           const std::function<double(const Vec&)>& evaluator, const Box& box);

/// The nodal basis function of a locally convex vertex as a piece list on
/// `box`: one region per incident simplex plus convex cells covering the
/// rest of the box with the zero piece. Equal affines share a piece.
CpwlPieces hat_as_pieces(const SimplicialMesh& mesh, const VertexStar& star, const Box& box);

}  // namespace femnet
