#include "femnet/geometry.hpp"

#include "femnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace femnet::geometry {

namespace {

constexpr double kOnLine = 1e-13;

HalfSpace normalized(const HalfSpace& h) {
  const double n = h.normal.norm();
  if (n == 0.0) return h;
  return {h.normal / n, h.offset / n};
}

double polygon_area(const std::vector<Vec>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec& p = v[i];
    const Vec& q = v[(i + 1) % v.size()];
    a += p(0) * q(1) - q(0) * p(1);
  }
  return 0.5 * std::abs(a);
}

}  // namespace

double ConvexCell::measure() const {
  if (vertices.empty()) return 0.0;
  if (vertices.front().size() == 1) return vertices.size() == 2 ? std::abs(vertices[1](0) - vertices[0](0)) : 0.0;
  if (vertices.size() < 3) return 0.0;
  return polygon_area(vertices);
}

Vec ConvexCell::centroid() const {
  Vec c = Vec::Zero(vertices.front().size());
  for (const auto& v : vertices) c += v;
  return c / static_cast<double>(vertices.size());
}

ConvexCell box_cell(const Box& box) {
  ConvexCell cell;
  cell.constraints = box.as_polyhedron();
  if (box.dim() == 1) {
    cell.vertices = {box.lo, box.hi};
  } else if (box.dim() == 2) {
    Vec a(2), b(2), c(2), d(2);
    a << box.lo(0), box.lo(1);
    b << box.hi(0), box.lo(1);
    c << box.hi(0), box.hi(1);
    d << box.lo(0), box.hi(1);
    cell.vertices = {a, b, c, d};
  } else {
    throw Error(ErrorKind::DimensionUnsupported, "cell clipping supports d <= 2");
  }
  return cell;
}

std::optional<ConvexCell> clip(const ConvexCell& cell, const HalfSpace& h_in, double min_measure) {
  const HalfSpace h = normalized(h_in);
  ConvexCell out;
  out.constraints = cell.constraints;
  out.constraints.halfspaces.push_back(h);
  const int d = static_cast<int>(h.normal.size());

  if (d == 1) {
    double a = cell.vertices[0](0), b = cell.vertices[1](0);
    if (h.normal(0) == 0.0) {
      if (h.offset < 0.0) return std::nullopt;
    } else {
      const double r = -h.offset / h.normal(0);
      if (h.normal(0) > 0) a = std::max(a, r);
      else b = std::min(b, r);
    }
    if (b - a <= min_measure) return std::nullopt;
    out.vertices = {Vec::Constant(1, a), Vec::Constant(1, b)};
    return out;
  }

  const auto& v = cell.vertices;
  const std::size_t n = v.size();
  std::vector<double> val(n);
  for (std::size_t i = 0; i < n; ++i) val[i] = h.value(v[i]);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    if (val[i] >= -kOnLine) out.vertices.push_back(v[i]);
    if ((val[i] > kOnLine && val[j] < -kOnLine) || (val[i] < -kOnLine && val[j] > kOnLine)) {
      const double t = val[i] / (val[i] - val[j]);
      out.vertices.push_back(v[i] + t * (v[j] - v[i]));
    }
  }
  // Drop repeated consecutive points.
  std::vector<Vec> cleaned;
  for (const auto& p : out.vertices)
    if (cleaned.empty() || (p - cleaned.back()).norm() > 1e-14) cleaned.push_back(p);
  while (cleaned.size() > 1 && (cleaned.front() - cleaned.back()).norm() <= 1e-14) cleaned.pop_back();
  out.vertices = std::move(cleaned);
  if (out.vertices.size() < 3 || out.measure() <= min_measure) return std::nullopt;
  return out;
}

std::vector<ConvexCell> split_all(const std::vector<ConvexCell>& cells, const HalfSpace& h_in, double min_measure) {
  const HalfSpace h = normalized(h_in);
  std::vector<ConvexCell> out;
  out.reserve(cells.size() * 2);
  const HalfSpace neg{-h.normal, -h.offset};
  for (const auto& c : cells) {
    double lo = 1e300, hi = -1e300;
    for (const auto& v : c.vertices) {
      lo = std::min(lo, h.value(v));
      hi = std::max(hi, h.value(v));
    }
    if (lo >= -kOnLine || hi <= kOnLine) {
      out.push_back(c);
      continue;
    }
    if (auto a = clip(c, h, min_measure)) out.push_back(std::move(*a));
    if (auto b = clip(c, neg, min_measure)) out.push_back(std::move(*b));
  }
  return out;
}

std::vector<Vec> enumerate_vertices(const Polyhedron& p, int dim, double tol) {
  const auto& hs = p.halfspaces;
  const int n = static_cast<int>(hs.size());
  std::vector<Vec> out;
  if (n < dim) return out;
  std::vector<int> idx(dim);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == dim) {
      Mat a(dim, dim);
      Vec b(dim);
      for (int r = 0; r < dim; ++r) {
        a.row(r) = hs[idx[r]].normal.transpose();
        b(r) = -hs[idx[r]].offset;
      }
      Eigen::FullPivLU<Mat> lu(a);
      if (!lu.isInvertible()) return;
      const Vec x = lu.solve(b);
      if (!x.allFinite()) return;
      for (const auto& h : hs)
        if (h.value(x) < -tol * std::max(1.0, h.normal.norm())) return;
      for (const auto& y : out)
        if ((y - x).norm() < tol) return;
      out.push_back(x);
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace femnet::geometry
