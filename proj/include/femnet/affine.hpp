#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace femnet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// x -> gradient . x + offset
struct AffineFunc {
  Vec gradient;
  double offset = 0.0;

  AffineFunc() = default;
  AffineFunc(Vec g, double b) : gradient(std::move(g)), offset(b) {}

  static AffineFunc constant(int dim, double value) { return {Vec::Zero(dim), value}; }

  int dim() const { return static_cast<int>(gradient.size()); }

  double operator()(const Vec& x) const { return gradient.dot(x) + offset; }

  AffineFunc operator+(const AffineFunc& o) const { return {gradient + o.gradient, offset + o.offset}; }
  AffineFunc operator-(const AffineFunc& o) const { return {gradient - o.gradient, offset - o.offset}; }
  AffineFunc operator*(double s) const { return {gradient * s, offset * s}; }

  bool is_constant() const { return gradient.isZero(0.0); }
};

inline AffineFunc operator*(double s, const AffineFunc& f) { return f * s; }

/// Componentwise comparison of gradient and offset, used for piece distinctness.
inline bool nearly_equal(const AffineFunc& a, const AffineFunc& b, double tol = 1e-12) {
  if (a.dim() != b.dim()) return false;
  if (std::abs(a.offset - b.offset) >= tol) return false;
  return ((a.gradient - b.gradient).array().abs() < tol).all();
}

inline bool exactly_equal(const AffineFunc& a, const AffineFunc& b) {
  return a.dim() == b.dim() && a.offset == b.offset && a.gradient == b.gradient;
}

/// Half-space { x : normal . x + offset >= 0 }.
struct HalfSpace {
  Vec normal;
  double offset = 0.0;

  double value(const Vec& x) const { return normal.dot(x) + offset; }
  bool contains(const Vec& x, double tol) const { return value(x) >= -tol; }
};

/// Convex polyhedron as a half-space intersection.
struct Polyhedron {
  std::vector<HalfSpace> halfspaces;

  bool contains(const Vec& x, double tol) const {
    for (const auto& h : halfspaces)
      if (!h.contains(x, tol)) return false;
    return true;
  }
};

/// Axis-aligned box [lo, hi].
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x, double tol) const {
    return ((x - lo).array() >= -tol).all() && ((hi - x).array() >= -tol).all();
  }
  Polyhedron as_polyhedron() const;
};

inline Polyhedron Box::as_polyhedron() const {
  Polyhedron p;
  const int d = dim();
  for (int i = 0; i < d; ++i) {
    Vec n = Vec::Zero(d);
    n(i) = 1.0;
    p.halfspaces.push_back({n, -lo(i)});
    p.halfspaces.push_back({-n, hi(i)});
  }
  return p;
}

}  // namespace femnet
