#include "femnet/cpwl.hpp"

#include "femnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace femnet {

namespace {

constexpr double kContainTol = 1e-10;
constexpr double kMatchTol = 1e-9;

// Smallest normalized slack of x over the region's half-spaces.
double depth_in(const Polyhedron& p, const Vec& x) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& h : p.halfspaces) {
    const double n = h.normal.norm();
    worst = std::min(worst, n > 0 ? h.value(x) / n : h.offset);
  }
  return worst;
}

Polyhedron with_box(const Polyhedron& p, const std::optional<Box>& box) {
  Polyhedron out = p;
  if (box) {
    const auto b = box->as_polyhedron();
    out.halfspaces.insert(out.halfspaces.end(), b.halfspaces.begin(), b.halfspaces.end());
  }
  return out;
}

void check_dims(const CpwlPieces& f) {
  if (f.dim < 1) throw Error(ErrorKind::InvalidInput, "cpwl: dim must be positive");
  if (f.pieces.empty()) throw Error(ErrorKind::EmptyList, "cpwl: no pieces");
  for (const auto& p : f.pieces)
    if (p.dim() != f.dim || !p.gradient.allFinite() || !std::isfinite(p.offset))
      throw Error(ErrorKind::InvalidInput, "cpwl: piece of wrong dimension or non-finite");
  if (f.domain && (f.domain->dim() != f.dim || (f.domain->hi - f.domain->lo).minCoeff() <= 0))
    throw Error(ErrorKind::InvalidInput, "cpwl: bad domain box");
}

void require_distinct(const std::vector<AffineFunc>& pieces) {
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j)
      if (nearly_equal(pieces[i], pieces[j]))
        throw Error(ErrorKind::DuplicatePieces,
                    "pieces " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
}

double value_scale(double v) { return std::max(1.0, std::abs(v)); }

}  // namespace

double eval_pieces(const CpwlPieces& f, const Vec& x) {
  if (x.size() != f.dim) throw Error(ErrorKind::DimensionMismatch, "eval_pieces: point dimension");
  if (f.domain && !f.domain->contains(x, 1e-12)) throw Error(ErrorKind::OutsideDomain, "point outside domain box");
  int best = -1;
  double best_depth = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < f.num_regions(); ++r) {
    const double d = depth_in(f.regions[r], x);
    if (d > best_depth) {
      best_depth = d;
      best = r;
    }
  }
  if (best < 0 || best_depth < -kContainTol) throw Error(ErrorKind::OutsideDomain, "point in no region");
  return f.pieces[f.piece_of(best)](x);
}

double eval_lattice(const LatticeForm& f, const Vec& x) {
  double result = -std::numeric_limits<double>::infinity();
  for (const auto& clause : f.clauses) {
    double m = std::numeric_limits<double>::infinity();
    for (int i : clause) m = std::min(m, f.pieces[i](x));
    result = std::max(result, m);
  }
  return result;
}

void validate_pieces(const CpwlPieces& f, std::mt19937_64& rng, int samples) {
  check_dims(f);
  if (f.regions.empty()) throw Error(ErrorKind::InvalidInput, "cpwl: no regions");
  if (!f.region_piece.empty()) {
    if (f.region_piece.size() != f.regions.size())
      throw Error(ErrorKind::InvalidInput, "cpwl: region_piece length differs from region count");
    for (int p : f.region_piece)
      if (p < 0 || p >= static_cast<int>(f.pieces.size()))
        throw Error(ErrorKind::InvalidInput, "cpwl: region_piece index out of range");
  } else if (f.regions.size() != f.pieces.size()) {
    throw Error(ErrorKind::InvalidInput, "cpwl: one region per piece expected");
  }
  for (const auto& r : f.regions)
    for (const auto& h : r.halfspaces)
      if (h.normal.size() != f.dim) throw Error(ErrorKind::InvalidInput, "cpwl: half-space of wrong dimension");

  const Box box = f.domain ? *f.domain : Box{Vec::Constant(f.dim, -10.0), Vec::Constant(f.dim, 10.0)};
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Vec x(f.dim);
    for (int j = 0; j < f.dim; ++j) x(j) = box.lo(j) + unif(rng) * (box.hi(j) - box.lo(j));
    bool covered = false;
    for (const auto& r : f.regions)
      if (r.contains(x, kContainTol)) {
        covered = true;
        break;
      }
    if (!covered) {
      std::ostringstream os;
      os << "cpwl: regions do not cover sample point " << x.transpose();
      throw Error(ErrorKind::InvalidInput, os.str());
    }
  }

  if (!f.domain) return;
  for (int r = 0; r < f.num_regions(); ++r) {
    const auto verts = geometry::enumerate_vertices(with_box(f.regions[r], f.domain), f.dim);
    const auto& lr = f.pieces[f.piece_of(r)];
    for (const auto& v : verts)
      for (int q = 0; q < f.num_regions(); ++q) {
        if (q == r || !f.regions[q].contains(v, 1e-9)) continue;
        const double a = lr(v), b = f.pieces[f.piece_of(q)](v);
        if (std::abs(a - b) > 1e-10 * value_scale(a)) {
          std::ostringstream os;
          os << "cpwl: discontinuity between regions " << r << " and " << q << " at " << v.transpose();
          throw Error(ErrorKind::InvalidInput, os.str());
        }
      }
  }
}

std::vector<int> value_order(const std::vector<AffineFunc>& pieces, const Vec& x) {
  std::vector<double> v(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) v[i] = pieces[i](x);
  std::vector<int> order(pieces.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] < v[b]; });
  return order;
}

UniqueOrderPartition unique_order_partition(const CpwlPieces& f) {
  if (f.dim > 2) throw Error(ErrorKind::DimensionUnsupported, "unique-order partition supports d <= 2");
  check_dims(f);
  if (!f.domain) throw Error(ErrorKind::InvalidInput, "unique-order partition needs a domain box");
  require_distinct(f.pieces);

  std::vector<geometry::ConvexCell> cells{geometry::box_cell(*f.domain)};
  const int m = static_cast<int>(f.pieces.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const AffineFunc diff = f.pieces[i] - f.pieces[j];
      if (diff.is_constant()) continue;  // parallel pieces never swap order
      cells = geometry::split_all(cells, HalfSpace{diff.gradient, diff.offset});
    }

  UniqueOrderPartition out;
  out.cells.reserve(cells.size());
  for (auto& c : cells) {
    OrderedCell oc;
    oc.order = value_order(f.pieces, c.centroid());
    oc.cell = std::move(c);
    out.cells.push_back(std::move(oc));
  }
  return out;
}

LatticeForm lattice_from_unique_order(const CpwlPieces& f, const UniqueOrderPartition& p) {
  LatticeForm out;
  out.pieces = f.pieces;
  for (const auto& oc : p.cells) {
    const Vec x = oc.cell.centroid();
    const double fx = eval_pieces(f, x);
    int active = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(f.pieces.size()); ++i) {
      const double e = std::abs(f.pieces[i](x) - fx);
      if (e < best) {
        best = e;
        active = i;
      }
    }
    if (best > kMatchTol * value_scale(fx)) {
      std::ostringstream os;
      os << "no piece matches f at cell centroid " << x.transpose();
      throw Error(ErrorKind::AmbiguousActivePiece, os.str());
    }
    const auto pos = std::find(oc.order.begin(), oc.order.end(), active);
    std::vector<int> clause(pos, oc.order.end());
    std::sort(clause.begin(), clause.end());
    out.clauses.push_back(std::move(clause));
  }
  return out;
}

LatticeForm lattice_from_convex_regions(const CpwlPieces& f) {
  check_dims(f);
  if (!f.domain) throw Error(ErrorKind::UnboundedRegionUnsupported, "convex-region lattice needs a domain box");
  LatticeForm out;
  out.pieces = f.pieces;
  const int m = static_cast<int>(f.pieces.size());
  for (int r = 0; r < f.num_regions(); ++r) {
    const auto verts = geometry::enumerate_vertices(with_box(f.regions[r], f.domain), f.dim);
    if (static_cast<int>(verts.size()) < f.dim + 1) continue;  // empty or flat after clipping
    const int k = f.piece_of(r);
    std::vector<int> clause;
    for (int i = 0; i < m; ++i) {
      bool above = true;
      for (const auto& v : verts) {
        const double lk = f.pieces[k](v);
        if (f.pieces[i](v) - lk < -kMatchTol * value_scale(lk)) {
          above = false;
          break;
        }
      }
      if (above) clause.push_back(i);
    }
    out.clauses.push_back(std::move(clause));
  }
  return out;
}

LatticeForm dedup_clauses(const LatticeForm& f) {
  LatticeForm out;
  out.pieces = f.pieces;
  std::set<std::vector<int>> seen;
  for (const auto& c : f.clauses) {
    std::vector<int> key = c;
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second) out.clauses.push_back(c);
  }
  return out;
}

CpwlPieces cpwl_1d_from_slopes(const std::vector<double>& knots, const std::vector<double>& slopes,
                               double start_value) {
  if (knots.size() < 2 || slopes.size() + 1 != knots.size())
    throw Error(ErrorKind::InvalidInput, "need one slope per interval");
  CpwlPieces f;
  f.dim = 1;
  f.domain = Box{Vec::Constant(1, knots.front()), Vec::Constant(1, knots.back())};
  double y = start_value;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    if (!(knots[i + 1] > knots[i])) throw Error(ErrorKind::KnotOrderViolated, "knots must increase");
    const AffineFunc l(Vec::Constant(1, slopes[i]), y - slopes[i] * knots[i]);
    int idx = -1;
    for (std::size_t j = 0; j < f.pieces.size(); ++j)
      if (nearly_equal(f.pieces[j], l)) idx = static_cast<int>(j);
    if (idx < 0) {
      idx = static_cast<int>(f.pieces.size());
      f.pieces.push_back(l);
    }
    Polyhedron interval;
    interval.halfspaces.push_back({Vec::Constant(1, 1.0), -knots[i]});
    interval.halfspaces.push_back({Vec::Constant(1, -1.0), knots[i + 1]});
    f.regions.push_back(interval);
    f.region_piece.push_back(idx);
    y += slopes[i] * (knots[i + 1] - knots[i]);
  }
  return f;
}

int verify_1d_path_lemma(const CpwlPieces& p) {
  if (p.dim != 1) throw Error(ErrorKind::DimensionMismatch, "path lemma is one-dimensional");
  // Regions in left-to-right order.
  std::vector<std::pair<double, int>> left;
  for (int r = 0; r < p.num_regions(); ++r) {
    double lo = -std::numeric_limits<double>::infinity();
    for (const auto& h : p.regions[r].halfspaces)
      if (h.normal(0) > 0) lo = std::max(lo, -h.offset / h.normal(0));
    left.emplace_back(lo, r);
  }
  std::sort(left.begin(), left.end());
  std::vector<double> k, b;
  for (const auto& [lo, r] : left) {
    const auto& l = p.pieces[p.piece_of(r)];
    k.push_back(l.gradient(0));
    b.push_back(l.offset);
  }
  const std::size_t r = k.size() - 1;
  if (r == 0 || !(b[0] > b[r]) || !(k[0] + b[0] > k[r] + b[r]))
    throw Error(ErrorKind::PreconditionViolated, "first line must dominate the last at t = 0 and t = 1");
  const int w = static_cast<int>(std::min_element(k.begin(), k.end()) - k.begin());
  const double tol = 1e-12 * std::max({1.0, std::abs(b[0]), std::abs(k[r] + b[r])});
  if (b[w] < b[0] - tol || k[w] + b[w] > k[r] + b[r] + tol)
    throw Error(ErrorKind::IdentityCheckFailed, "minimal-slope line does not separate l_0 and l_r");
  return w;
}

CpwlPieces tabulate_pieces(const std::vector<AffineFunc>& candidates,
                           const std::function<double(const Vec&)>& evaluator, const Box& box) {
  CpwlPieces all;
  all.dim = box.dim();
  all.pieces = candidates;
  all.domain = box;
  const auto part = unique_order_partition(all);

  CpwlPieces f;
  f.dim = box.dim();
  f.domain = box;
  std::map<int, int> used;
  for (const auto& oc : part.cells) {
    const Vec x = oc.cell.centroid();
    const double fx = evaluator(x);
    int active = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
      const double e = std::abs(candidates[i](x) - fx);
      if (e < best) {
        best = e;
        active = i;
      }
    }
    if (best > kMatchTol * value_scale(fx))
      throw Error(ErrorKind::AmbiguousActivePiece, "evaluator is not affine with a candidate piece on a cell");
    auto [it, inserted] = used.try_emplace(active, static_cast<int>(f.pieces.size()));
    if (inserted) f.pieces.push_back(candidates[active]);
    f.regions.push_back(oc.cell.constraints);
    f.region_piece.push_back(it->second);
  }
  return f;
}

CpwlPieces hat_as_pieces(const SimplicialMesh& mesh, const VertexStar& star, const Box& box) {
  if (!is_locally_convex(mesh, star.center))
    throw Error(ErrorKind::NotLocallyConvex, "vertex " + std::to_string(star.center) + " has a non-convex star");
  const int d = mesh.dim();
  CpwlPieces f;
  f.dim = d;
  f.domain = box;
  auto piece_index = [&](const AffineFunc& l) {
    for (std::size_t j = 0; j < f.pieces.size(); ++j)
      if (nearly_equal(f.pieces[j], l)) return static_cast<int>(j);
    f.pieces.push_back(l);
    return static_cast<int>(f.pieces.size()) - 1;
  };
  for (std::size_t s = 0; s < star.incident.size(); ++s) {
    f.regions.push_back(mesh.simplex_polyhedron(star.incident[s]));
    f.region_piece.push_back(piece_index(star.local_affines[s]));
  }
  const int zero = piece_index(AffineFunc::constant(d, 0.0));
  // Complement of the star inside the box: outside facet j, inside facets 0..j-1.
  const auto facets = star_facet_halfspaces(mesh, star.center);
  const auto box_poly = box.as_polyhedron();
  for (std::size_t j = 0; j < facets.size(); ++j) {
    Polyhedron cell = box_poly;
    for (std::size_t q = 0; q < j; ++q) cell.halfspaces.push_back(facets[q]);
    cell.halfspaces.push_back({-facets[j].normal, -facets[j].offset});
    if (static_cast<int>(geometry::enumerate_vertices(cell, d).size()) < d + 1) continue;
    f.regions.push_back(cell);
    f.region_piece.push_back(zero);
  }
  return f;
}

}  // namespace femnet
