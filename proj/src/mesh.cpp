#include "femnet/mesh.hpp"

#include "femnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace femnet {

namespace {

constexpr double kGeomTol = 1e-10;
constexpr double kInterpTol = 1e-12;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Mat edge_matrix(const std::vector<Vec>& vs, const std::vector<int>& simplex) {
  const int d = static_cast<int>(vs[simplex[0]].size());
  Mat e(d, static_cast<int>(simplex.size()) - 1);
  for (int j = 1; j < static_cast<int>(simplex.size()); ++j) e.col(j - 1) = vs[simplex[j]] - vs[simplex[0]];
  return e;
}

/// Unit normal of the hyperplane through the given d points in R^d.
Vec facet_normal(const std::vector<Vec>& pts) {
  const int d = static_cast<int>(pts[0].size());
  if (d == 1) return Vec::Ones(1);
  Mat e(d, d - 1);
  for (int j = 1; j < d; ++j) e.col(j - 1) = pts[j] - pts[0];
  Eigen::FullPivLU<Mat> lu(e.transpose());
  Mat ker = lu.kernel();
  Vec n = ker.col(0);
  return n / n.norm();
}

/// Candidate separating directions for two simplices (d <= 3).
std::vector<Vec> separating_axes(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  const int d = static_cast<int>(a[0].size());
  std::vector<Vec> axes;
  if (d == 1) {
    axes.push_back(Vec::Ones(1));
    return axes;
  }
  auto add_facet_normals = [&](const std::vector<Vec>& s) {
    for (int skip = 0; skip <= d; ++skip) {
      std::vector<Vec> pts;
      for (int j = 0; j <= d; ++j)
        if (j != skip) pts.push_back(s[j]);
      axes.push_back(facet_normal(pts));
    }
  };
  add_facet_normals(a);
  add_facet_normals(b);
  if (d == 3) {
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = k + 1; l < 4; ++l) {
            Eigen::Vector3d ea = a[j] - a[i];
            Eigen::Vector3d eb = b[l] - b[k];
            Eigen::Vector3d c = ea.cross(eb);
            if (c.norm() > 1e-12) axes.push_back(c.normalized());
          }
  }
  return axes;
}

}  // namespace

SimplicialMesh SimplicialMesh::build(std::vector<Vec> vertices, std::vector<std::vector<int>> simplices,
                                     std::optional<std::vector<bool>> boundary) {
  return build(std::move(vertices), std::move(simplices), std::move(boundary), Options{});
}

SimplicialMesh SimplicialMesh::build(std::vector<Vec> vertices, std::vector<std::vector<int>> simplices,
                                     std::optional<std::vector<bool>> boundary, const Options& options) {
  if (vertices.empty() || simplices.empty()) throw Error(ErrorKind::InvalidInput, "mesh needs vertices and simplices");
  const int d = static_cast<int>(vertices[0].size());
  if (d < 1 || d > 3) throw Error(ErrorKind::DimensionUnsupported, "mesh dimension must be 1, 2 or 3");
  for (const auto& v : vertices) {
    if (v.size() != d) throw Error(ErrorKind::InvalidInput, "vertex dimension mismatch");
    if (!v.allFinite()) throw Error(ErrorKind::InvalidInput, "non-finite vertex coordinate");
  }

  SimplicialMesh m;
  m.dim_ = d;
  m.vertices_ = std::move(vertices);
  m.simplices_ = std::move(simplices);
  const int nv = m.num_vertices();
  const int ns = m.num_simplices();

  for (int k = 0; k < ns; ++k) {
    const auto& s = m.simplices_[k];
    if (static_cast<int>(s.size()) != d + 1)
      throw Error(ErrorKind::InvalidInput, "simplex " + std::to_string(k) + " must have d+1 vertices");
    for (int v : s)
      if (v < 0 || v >= nv) throw Error(ErrorKind::InvalidInput, "vertex index out of range in simplex " + std::to_string(k));
    const std::set<int> unique(s.begin(), s.end());
    if (static_cast<int>(unique.size()) != d + 1)
      throw Error(ErrorKind::DegenerateSimplex, "simplex " + std::to_string(k) + " repeats a vertex");

    const Mat e = edge_matrix(m.vertices_, s);
    double max_edge = 0.0;
    for (int i = 0; i <= d; ++i)
      for (int j = i + 1; j <= d; ++j) max_edge = std::max(max_edge, (m.vertices_[s[i]] - m.vertices_[s[j]]).norm());
    const double det = e.determinant();
    if (std::abs(det) <= options.degeneracy_tol * std::pow(max_edge, d))
      throw Error(ErrorKind::DegenerateSimplex, "simplex " + std::to_string(k) + " has (near) zero volume");

    Mat vm(d + 1, d + 1);
    for (int j = 0; j <= d; ++j) {
      vm.block(0, j, d, 1) = m.vertices_[s[j]];
      vm(d, j) = 1.0;
    }
    m.bary_.push_back(vm.inverse());
  }

  m.incident_.assign(nv, {});
  for (int k = 0; k < ns; ++k)
    for (int v : m.simplices_[k]) m.incident_[v].push_back(k);

  if (options.check_conformity) {
    // Pairwise: no foreign vertex inside the other simplex, and interiors separated
    // by some facet/edge-cross axis. Quadratic in the simplex count.
    std::vector<Box> boxes;
    for (int k = 0; k < ns; ++k) {
      Vec lo = m.vertices_[m.simplices_[k][0]], hi = lo;
      for (int v : m.simplices_[k]) {
        lo = lo.cwiseMin(m.vertices_[v]);
        hi = hi.cwiseMax(m.vertices_[v]);
      }
      boxes.push_back({lo, hi});
    }
    for (int a = 0; a < ns; ++a) {
      for (int b = a + 1; b < ns; ++b) {
        if (((boxes[a].hi - boxes[b].lo).array() < -kGeomTol).any() ||
            ((boxes[b].hi - boxes[a].lo).array() < -kGeomTol).any())
          continue;
        const auto& sa = m.simplices_[a];
        const auto& sb = m.simplices_[b];
        auto foreign_inside = [&](const std::vector<int>& from, int into) {
          const auto& target = m.simplices_[into];
          for (int v : from) {
            if (std::find(target.begin(), target.end(), v) != target.end()) continue;
            if (m.simplex_contains(into, m.vertices_[v], kGeomTol)) return true;
          }
          return false;
        };
        if (foreign_inside(sa, b) || foreign_inside(sb, a))
          throw Error(ErrorKind::NonConforming,
                      "simplices " + std::to_string(a) + " and " + std::to_string(b) + " meet in a hanging vertex");
        std::vector<Vec> pa, pb;
        for (int v : sa) pa.push_back(m.vertices_[v]);
        for (int v : sb) pb.push_back(m.vertices_[v]);
        bool separated = false;
        for (const Vec& axis : separating_axes(pa, pb)) {
          double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
          for (const auto& p : pa) {
            amin = std::min(amin, axis.dot(p));
            amax = std::max(amax, axis.dot(p));
          }
          for (const auto& p : pb) {
            bmin = std::min(bmin, axis.dot(p));
            bmax = std::max(bmax, axis.dot(p));
          }
          if (amax <= bmin + kGeomTol || bmax <= amin + kGeomTol) {
            separated = true;
            break;
          }
        }
        if (!separated)
          throw Error(ErrorKind::NonConforming,
                      "simplices " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
      }
    }
  }

  if (boundary) {
    if (static_cast<int>(boundary->size()) != nv) throw Error(ErrorKind::InvalidInput, "boundary marker count mismatch");
    m.boundary_ = std::move(*boundary);
  } else {
    // A vertex is on the boundary iff it lies on a facet owned by a single simplex.
    std::map<std::vector<int>, int> facet_count;
    for (const auto& s : m.simplices_)
      for (int skip = 0; skip <= d; ++skip) {
        std::vector<int> f;
        for (int j = 0; j <= d; ++j)
          if (j != skip) f.push_back(s[j]);
        std::sort(f.begin(), f.end());
        ++facet_count[f];
      }
    m.boundary_.assign(nv, false);
    for (const auto& [f, c] : facet_count)
      if (c == 1)
        for (int v : f) m.boundary_[v] = true;
  }

  double acc = 0.0;
  for (int k = 0; k < ns; ++k) {
    acc += m.simplex_volume(k);
    m.cumulative_volume_.push_back(acc);
  }
  return m;
}

Vec SimplicialMesh::barycentric(int k, const Vec& x) const {
  Vec xh(dim_ + 1);
  xh.head(dim_) = x;
  xh(dim_) = 1.0;
  return bary_[k] * xh;
}

bool SimplicialMesh::simplex_contains(int k, const Vec& x, double tol) const {
  return (barycentric(k, x).array() >= -tol).all();
}

std::optional<int> SimplicialMesh::locate(const Vec& x, double tol) const {
  for (int k = 0; k < num_simplices(); ++k)
    if (simplex_contains(k, x, tol)) return k;
  return std::nullopt;
}

Polyhedron SimplicialMesh::simplex_polyhedron(int k) const {
  Polyhedron p;
  for (int j = 0; j <= dim_; ++j) p.halfspaces.push_back({bary_[k].block(j, 0, 1, dim_).transpose(), bary_[k](j, dim_)});
  return p;
}

double SimplicialMesh::simplex_volume(int k) const {
  return std::abs(edge_matrix(vertices_, simplices_[k]).determinant()) / factorial(dim_);
}

Box SimplicialMesh::bounding_box() const {
  Vec lo = vertices_[0], hi = vertices_[0];
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

VertexStar vertex_star(const SimplicialMesh& mesh, int i) {
  if (i < 0 || i >= mesh.num_vertices()) throw Error(ErrorKind::InvalidInput, "vertex index out of range");
  const int d = mesh.dim();
  VertexStar star;
  star.center = i;
  star.incident = mesh.incident(i);
  for (int k : star.incident) {
    const auto& s = mesh.simplex(k);
    // Rows [x_j^T 1] for the simplex vertices; right-hand side is the nodal indicator of i.
    Mat a(d + 1, d + 1);
    Vec rhs(d + 1);
    for (int j = 0; j <= d; ++j) {
      a.block(j, 0, 1, d) = mesh.vertex(s[j]).transpose();
      a(j, d) = 1.0;
      rhs(j) = (s[j] == i) ? 1.0 : 0.0;
    }
    Eigen::FullPivLU<Mat> lu(a);
    if (!lu.isInvertible()) throw Error(ErrorKind::SingularSystem, "interpolation system singular on simplex " + std::to_string(k));
    Vec sol = lu.solve(rhs);
    if ((a * sol - rhs).cwiseAbs().maxCoeff() > kInterpTol)
      throw Error(ErrorKind::SingularSystem, "interpolation residual too large on simplex " + std::to_string(k));
    star.local_affines.emplace_back(sol.head(d), sol(d));
  }
  return star;
}

namespace {

struct StarFacets {
  std::vector<HalfSpace> inner;  // unit normals
  std::vector<Vec> anchor;
  std::set<int> star_vertices;
};

StarFacets star_facets(const SimplicialMesh& mesh, int i) {
  const int d = mesh.dim();
  StarFacets out;
  std::map<std::vector<int>, std::pair<int, int>> facets;  // sorted facet -> (count, opposite vertex)
  for (int k : mesh.incident(i)) {
    const auto& s = mesh.simplex(k);
    out.star_vertices.insert(s.begin(), s.end());
    for (int skip = 0; skip <= d; ++skip) {
      std::vector<int> f;
      for (int j = 0; j <= d; ++j)
        if (j != skip) f.push_back(s[j]);
      std::sort(f.begin(), f.end());
      auto& entry = facets[f];
      entry.first += 1;
      entry.second = s[skip];
    }
  }
  for (const auto& [f, info] : facets) {
    if (info.first != 1) continue;
    std::vector<Vec> pts;
    for (int v : f) pts.push_back(mesh.vertex(v));
    Vec n = facet_normal(pts);
    if (n.dot(mesh.vertex(info.second) - pts[0]) < 0) n = -n;
    out.inner.push_back({n, -n.dot(pts[0])});
    out.anchor.push_back(pts[0]);
  }
  return out;
}

}  // namespace

std::vector<HalfSpace> star_facet_halfspaces(const SimplicialMesh& mesh, int i) {
  if (i < 0 || i >= mesh.num_vertices()) throw Error(ErrorKind::InvalidInput, "vertex index out of range");
  return star_facets(mesh, i).inner;
}

bool is_locally_convex(const SimplicialMesh& mesh, int i) {
  if (i < 0 || i >= mesh.num_vertices()) throw Error(ErrorKind::InvalidInput, "vertex index out of range");
  if (mesh.incident(i).empty()) return false;
  const StarFacets f = star_facets(mesh, i);
  for (std::size_t j = 0; j < f.inner.size(); ++j)
    for (int v : f.star_vertices)
      if (f.inner[j].normal.dot(mesh.vertex(v) - f.anchor[j]) < -kGeomTol) return false;
  return true;
}

int compute_kh(const SimplicialMesh& mesh) {
  std::size_t kh = 0;
  for (int i = 0; i < mesh.num_vertices(); ++i) kh = std::max(kh, mesh.incident(i).size());
  return static_cast<int>(kh);
}

std::vector<double> shape_regularity(const SimplicialMesh& mesh) {
  const int d = mesh.dim();
  std::vector<double> out;
  out.reserve(mesh.num_simplices());
  for (int k = 0; k < mesh.num_simplices(); ++k) {
    if (d == 1) {
      out.push_back(1.0);
      continue;
    }
    const auto& s = mesh.simplex(k);
    const double vol = mesh.simplex_volume(k);
    double facet_sum = 0.0;
    for (int skip = 0; skip <= d; ++skip) {
      std::vector<Vec> pts;
      for (int j = 0; j <= d; ++j)
        if (j != skip) pts.push_back(mesh.vertex(s[j]));
      Mat e(d, d - 1);
      for (int j = 1; j < d; ++j) e.col(j - 1) = pts[j] - pts[0];
      facet_sum += std::sqrt((e.transpose() * e).determinant()) / factorial(d - 1);
    }
    const double inradius = d * vol / facet_sum;
    Mat a(d, d);
    Vec rhs(d);
    const Vec& v0 = mesh.vertex(s[0]);
    for (int j = 1; j <= d; ++j) {
      const Vec& vj = mesh.vertex(s[j]);
      a.row(j - 1) = 2.0 * (vj - v0).transpose();
      rhs(j - 1) = vj.squaredNorm() - v0.squaredNorm();
    }
    const Vec center = a.fullPivLu().solve(rhs);
    const double circumradius = (center - v0).norm();
    out.push_back(inradius / circumradius);
  }
  return out;
}

double nodal_basis(const SimplicialMesh& mesh, const VertexStar& star, const Vec& x) {
  for (std::size_t j = 0; j < star.incident.size(); ++j)
    if (mesh.simplex_contains(star.incident[j], x, kGeomTol)) return star.local_affines[j](x);
  return 0.0;
}

double fem_interpolant(const SimplicialMesh& mesh, std::span<const double> coeffs, const Vec& x) {
  if (static_cast<int>(coeffs.size()) != mesh.num_vertices())
    throw Error(ErrorKind::DimensionMismatch, "one coefficient per vertex expected");
  const auto k = mesh.locate(x);
  if (!k) return 0.0;
  const Vec lambda = mesh.barycentric(*k, x);
  double v = 0.0;
  const auto& s = mesh.simplex(*k);
  for (int j = 0; j <= mesh.dim(); ++j) v += coeffs[s[j]] * lambda(j);
  return v;
}

}  // namespace femnet
