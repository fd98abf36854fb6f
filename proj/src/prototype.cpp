#include "flexhull/prototype.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "flexhull/errors.hpp"

namespace flexhull {

namespace {

constexpr double kVertexTol = 1e-9;

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double shoelace(const std::vector<Point>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

Point intersect(const Point& n1, double b1, const Point& n2, double b2) {
  const double det = cross(n1, n2);
  return Point((b1 * n2.y() - b2 * n1.y()) / det, (n1.x() * b2 - n2.x() * b1) / det);
}

double segment_distance(const Point& a, const Point& b, const Point& x) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((x - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + t * ab - x).norm();
}

}  // namespace

PrototypePolygon::PrototypePolygon(EdgeMatrix normals, Eigen::VectorXd offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
  const int n = static_cast<int>(normals_.rows());
  if (n < 3) throw Error(ErrorCode::invalid_argument, "prototype needs at least 3 edges");
  if (offsets_.size() != n) throw Error(ErrorCode::invalid_argument, "prototype A and b sizes differ");
  for (int i = 0; i < n; ++i) {
    const double len = normals_.row(i).norm();
    if (!(len > 0.0)) throw Error(ErrorCode::invalid_argument, "prototype has a zero normal");
    normals_.row(i) /= len;
    offsets_[i] /= len;
    if (!(offsets_[i] > 0.0))
      throw Error(ErrorCode::invalid_argument, "prototype must contain the origin strictly (b_i > 0)");
  }

  // Walk the edges counter-clockwise by normal angle, starting at row 0.
  std::vector<double> angle(n);
  for (int i = 0; i < n; ++i) {
    double a = std::atan2(normals_(i, 1), normals_(i, 0)) - std::atan2(normals_(0, 1), normals_(0, 0));
    while (a < 0.0) a += 2.0 * std::numbers::pi;
    angle[i] = a;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return angle[a] < angle[b]; });

  for (int k = 0; k < n; ++k) {
    const int i = order[k];
    const int j = order[(k + 1) % n];
    double gap = angle[j] - angle[i];
    if (k + 1 == n) gap += 2.0 * std::numbers::pi;
    if (!(gap > 1e-12 && gap < std::numbers::pi - 1e-12))
      throw Error(ErrorCode::invalid_argument, "prototype polygon is unbounded or has parallel duplicate edges");
    vertices_.push_back(intersect(normal(i), offsets_[i], normal(j), offsets_[j]));
    vertex_edges_.emplace_back(i, j);
  }

  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    const Eigen::VectorXd slack = offsets_ - normals_ * vertices_[k];
    for (int r = 0; r < n; ++r) {
      const bool own = r == vertex_edges_[k].first || r == vertex_edges_[k].second;
      if (!own && slack[r] <= kVertexTol)
        throw Error(ErrorCode::invalid_argument, "prototype has a redundant or degenerate edge");
    }
  }
}

double PrototypePolygon::area() const { return shoelace(vertices_); }

bool PrototypePolygon::contains(const Point& x, double tol) const {
  return ((normals_ * x - offsets_).array() <= tol).all();
}

bool PrototypePolygon::same_as(const PrototypePolygon& other, double tol) const {
  if (edge_count() != other.edge_count()) return false;
  return (normals_ - other.normals_).cwiseAbs().maxCoeff() <= tol &&
         (offsets_ - other.offsets_).cwiseAbs().maxCoeff() <= tol;
}

PrototypePtr regular_prototype(int n_edges, double rotation) {
  if (n_edges < 3) throw Error(ErrorCode::invalid_argument, "regular prototype needs n_edges >= 3");
  EdgeMatrix a(n_edges, 2);
  auto set_row = [&](int row, double theta) {
    a(row, 0) = std::cos(theta);
    a(row, 1) = std::sin(theta);
    // Snap round-off so axis-aligned normals are exact.
    for (int c = 0; c < 2; ++c)
      if (std::abs(a(row, c)) < 1e-15) a(row, c) = 0.0;
  };
  const double step = 2.0 * std::numbers::pi / n_edges;
  if (n_edges % 2 == 0) {
    for (int k = 0; k < n_edges / 2; ++k) {
      set_row(2 * k, rotation + step * k);
      set_row(2 * k + 1, rotation + step * k + std::numbers::pi);
    }
  } else {
    for (int k = 0; k < n_edges; ++k) set_row(k, rotation + step * k);
  }
  return std::make_shared<const PrototypePolygon>(a, Eigen::VectorXd::Ones(n_edges));
}

PrototypePtr custom_prototype(EdgeMatrix normals, Eigen::VectorXd offsets) {
  return std::make_shared<const PrototypePolygon>(std::move(normals), std::move(offsets));
}

HalfspaceForm homothet_halfspaces(const Homothet& h) {
  if (!(h.alpha > 0.0)) throw Error(ErrorCode::invalid_argument, "homothet alpha must be > 0");
  return HalfspaceForm{h.proto->normals(), h.alpha * h.proto->offsets() + h.proto->normals() * h.beta};
}

std::vector<Point> homothet_vertices(const Homothet& h) {
  if (!(h.alpha > 0.0)) throw Error(ErrorCode::invalid_argument, "homothet alpha must be > 0");
  std::vector<Point> out;
  out.reserve(h.proto->vertices().size());
  for (const auto& v : h.proto->vertices()) out.push_back(h.alpha * v + h.beta);
  return out;
}

bool homothet_contains(const Homothet& h, const Point& x, double tol) {
  const auto form = homothet_halfspaces(h);
  return ((form.normals * x - form.rhs).array() <= tol).all();
}

std::vector<Point> homothet_edge_samples(const Homothet& h, int per_edge) {
  const auto v = homothet_vertices(h);
  std::vector<Point> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    for (int k = 0; k < per_edge; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / per_edge));
  }
  return out;
}

double ConvexPolygon::area() const { return vertices.size() < 3 ? 0.0 : shoelace(vertices); }

ConvexPolygon clip(const ConvexPolygon& poly, const Point& normal, double offset) {
  ConvexPolygon out;
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    const double sa = normal.dot(a) - offset;
    const double sb = normal.dot(b) - offset;
    if (sa <= 0.0) out.vertices.push_back(a);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) out.vertices.push_back(a + (b - a) * (sa / (sa - sb)));
  }
  return out;
}

double distance_to_polygon(const std::vector<Point>& v, const Point& x) {
  bool inside = true;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (cross(v[(i + 1) % v.size()] - v[i], x - v[i]) < 0.0) inside = false;
  if (inside) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) best = std::min(best, segment_distance(v[i], v[(i + 1) % v.size()], x));
  return best;
}

}  // namespace flexhull
