#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flexhull/polynomial.hpp"

namespace flexhull {

/// Closed half-plane {x | normal . x <= offset}.
struct HalfPlane {
  Point normal = Point::Zero();
  double offset = 0.0;

  bool contains(const Point& x, double tol = 0.0) const { return normal.dot(x) <= offset + tol; }
};

struct BoundingBox {
  double p_min = 0.0;
  double p_max = 0.0;
  double q_min = 0.0;
  double q_max = 0.0;

  Point center() const { return Point(0.5 * (p_min + p_max), 0.5 * (q_min + q_max)); }
  /// Larger of the two half-widths; the normalization length of the domain.
  double half_width() const;
  double diagonal() const;
  bool contains(const Point& x, double tol = 0.0) const;
};

/// One basic semialgebraic piece {x | g_j(x) >= 0 for all j}.
struct BasicSet {
  std::vector<Polynomial2> constraints;
  std::string label;
  /// Exact coordinates of a single-point piece.
  std::optional<Point> point;
  /// Polyhedral cell of the plane owned by this piece. When every piece of a
  /// union carries a cell, the cells tile the plane and each piece lies in its
  /// own cell, which lets inner containment be certified piece by piece.
  std::vector<HalfPlane> cell;

  bool contains(const Point& x, double tol = 0.0) const;
};

enum class DomainKind { continuous, discrete };

/// Device family and rated parameters a domain was built from.
struct DerSpec {
  std::string type;
  std::map<std::string, double> params;
};

/// Union of basic semialgebraic sets: the admissible (p, q) operating points
/// of a device. Positive p, q denote consumption; negative, generation.
class FlexDomain {
 public:
  /// Validates the pieces and, for continuous domains, runs the compactness
  /// probe over [-4 * probe_scale, 4 * probe_scale]^2. When `bbox` is absent it
  /// is estimated from the probe.
  FlexDomain(std::vector<BasicSet> pieces, DomainKind kind, std::optional<BoundingBox> bbox,
             double probe_scale, std::optional<DerSpec> spec = std::nullopt);

  const std::vector<BasicSet>& pieces() const { return pieces_; }
  DomainKind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == DomainKind::discrete; }
  const BoundingBox& bounding_box() const { return bbox_; }
  /// One interior anchor point per piece (the point itself for point pieces).
  const std::vector<Point>& anchors() const { return anchors_; }
  /// Approximate per-piece extents from interior samples (exact for point
  /// pieces). Used for numerical scaling only, never for membership.
  const std::vector<BoundingBox>& piece_boxes() const { return piece_boxes_; }
  const std::optional<DerSpec>& spec() const { return spec_; }
  /// True when every piece carries a cell (see BasicSet::cell).
  bool has_cells() const;

  bool contains(const Point& x, double tol = 0.0) const;

 private:
  std::vector<BasicSet> pieces_;
  DomainKind kind_;
  BoundingBox bbox_;
  std::vector<Point> anchors_;
  std::vector<BoundingBox> piece_boxes_;
  std::optional<DerSpec> spec_;
};

FlexDomain make_battery(double p_max, double s);
FlexDomain make_pv(double p_max, double s);

struct WindParams {
  double p_max = 0.0;
  double p0 = 0.0;
  double q0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  /// Coefficient of p^2 in the stator/rotor current limits.
  double rotor_coupling = 1.0;
};
FlexDomain make_wind(const WindParams& w);

FlexDomain make_ac(double p_max, double gamma);

/// Domain from raw pieces. `scale` is a characteristic rating used to size
/// the compactness probe.
FlexDomain make_custom(std::vector<BasicSet> pieces, double scale);

bool contains(const FlexDomain& d, const Point& x, double tol);

/// At least n points on the boundary of a continuous domain, found by
/// bisecting rays cast from each piece anchor.
std::vector<Point> sample_boundary(const FlexDomain& d, std::size_t n);

/// n points drawn uniformly from the domain (rejection inside the bounding
/// box; uniform over the point set for discrete domains).
std::vector<Point> sample_interior(const FlexDomain& d, std::size_t n, std::uint64_t seed);

}  // namespace flexhull
