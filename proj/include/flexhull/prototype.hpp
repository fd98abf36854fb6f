#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "flexhull/polynomial.hpp"

namespace flexhull {

using EdgeMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Convex polygon {x | A x <= b} with unit-norm rows, b > 0 (origin strictly
/// inside), and its vertices in counter-clockwise order. Vertex k is the
/// intersection of edge `order[k]` with the next edge counter-clockwise, where
/// the walk starts at row 0.
class PrototypePolygon {
 public:
  /// Rows are normalized to unit length (b is rescaled with them). Throws
  /// Error(invalid_argument) for unbounded polygons, non-positive offsets, or
  /// redundant rows.
  PrototypePolygon(EdgeMatrix normals, Eigen::VectorXd offsets);

  int edge_count() const { return static_cast<int>(offsets_.size()); }
  const EdgeMatrix& normals() const { return normals_; }
  const Eigen::VectorXd& offsets() const { return offsets_; }
  Point normal(int i) const { return normals_.row(i).transpose(); }
  double offset(int i) const { return offsets_[i]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  /// Rows meeting at vertex k, as (first, second) in CCW order.
  const std::vector<std::pair<int, int>>& vertex_edges() const { return vertex_edges_; }

  double area() const;
  bool contains(const Point& x, double tol = 0.0) const;
  /// Structural equality of (A, b) within tol.
  bool same_as(const PrototypePolygon& other, double tol = 1e-12) const;

 private:
  EdgeMatrix normals_;
  Eigen::VectorXd offsets_;
  std::vector<Point> vertices_;
  std::vector<std::pair<int, int>> vertex_edges_;
};

using PrototypePtr = std::shared_ptr<const PrototypePolygon>;

/// Regular n-gon with unit apothem. Normals point at angles
/// rotation + 2 pi k / n. For even n rows are grouped in opposite pairs
/// (angle, angle + pi), so n = 4 reproduces A = [1 -1 0 0; 0 0 1 -1]^T.
PrototypePtr regular_prototype(int n_edges, double rotation = 0.0);

/// Prototype from raw (A, b).
PrototypePtr custom_prototype(EdgeMatrix normals, Eigen::VectorXd offsets);

/// H[alpha, beta; F0] = alpha * F0 + beta.
struct Homothet {
  PrototypePtr proto;
  double alpha = 1.0;
  Point beta = Point::Zero();
};

struct HalfspaceForm {
  EdgeMatrix normals;
  Eigen::VectorXd rhs;
};

/// rhs_i = alpha b_i + a_i . beta.
HalfspaceForm homothet_halfspaces(const Homothet& h);
/// alpha v_i + beta, prototype order preserved.
std::vector<Point> homothet_vertices(const Homothet& h);
bool homothet_contains(const Homothet& h, const Point& x, double tol = 0.0);

/// Points spaced along the closed vertex loop of a homothet, vertices
/// included; `per_edge` points per edge.
std::vector<Point> homothet_edge_samples(const Homothet& h, int per_edge);

/// Polygon as an explicit list of half-planes (normal . x <= offset) plus its
/// vertex loop, used for clipping homothets by cells.
struct ConvexPolygon {
  std::vector<Point> vertices;  // CCW
  double area() const;
};

/// Sutherland-Hodgman clip of a convex polygon by a half-plane.
ConvexPolygon clip(const ConvexPolygon& poly, const Point& normal, double offset);

/// Euclidean distance from x to a convex polygon given by CCW vertices
/// (zero inside).
double distance_to_polygon(const std::vector<Point>& ccw_vertices, const Point& x);

}  // namespace flexhull
