#include "flexhull/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "flexhull/errors.hpp"

namespace flexhull {

namespace {

constexpr std::uint64_t kProbeSeed = 0x5eedf1e7ULL;
constexpr int kProbeSamples = 100000;
constexpr int kAnchorDraws = 200000;
constexpr int kAnchorTarget = 2000;
constexpr int kRayBisectionSteps = 60;

[[noreturn]] void reject(const std::string& what) { throw Error(ErrorCode::invalid_argument, what); }

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Polynomial2 P() { return Polynomial2::p(); }
Polynomial2 Q() { return Polynomial2::q(); }
Polynomial2 C(double c) { return Polynomial2::constant(c); }

}  // namespace

double BoundingBox::half_width() const { return 0.5 * std::max(p_max - p_min, q_max - q_min); }

double BoundingBox::diagonal() const { return std::hypot(p_max - p_min, q_max - q_min); }

bool BoundingBox::contains(const Point& x, double tol) const {
  return x.x() >= p_min - tol && x.x() <= p_max + tol && x.y() >= q_min - tol && x.y() <= q_max + tol;
}

bool BasicSet::contains(const Point& x, double tol) const {
  for (const auto& g : constraints)
    if (g.evaluate(x) < -tol) return false;
  return true;
}

FlexDomain::FlexDomain(std::vector<BasicSet> pieces, DomainKind kind, std::optional<BoundingBox> bbox,
                       double probe_scale, std::optional<DerSpec> spec)
    : pieces_(std::move(pieces)), kind_(kind), spec_(std::move(spec)) {
  if (pieces_.empty()) reject("domain needs at least one piece");
  for (const auto& piece : pieces_) {
    if (piece.constraints.empty()) reject("piece '" + piece.label + "' has no constraints");
    if (kind_ == DomainKind::discrete && !piece.point)
      reject("discrete domain piece '" + piece.label + "' lacks exact point coordinates");
    if (kind_ == DomainKind::continuous && piece.point)
      reject("continuous domain piece '" + piece.label + "' is a single point");
  }

  if (kind_ == DomainKind::discrete) {
    BoundingBox b{pieces_[0].point->x(), pieces_[0].point->x(), pieces_[0].point->y(), pieces_[0].point->y()};
    for (const auto& piece : pieces_) {
      b.p_min = std::min(b.p_min, piece.point->x());
      b.p_max = std::max(b.p_max, piece.point->x());
      b.q_min = std::min(b.q_min, piece.point->y());
      b.q_max = std::max(b.q_max, piece.point->y());
      anchors_.push_back(*piece.point);
      piece_boxes_.push_back(BoundingBox{piece.point->x(), piece.point->x(), piece.point->y(), piece.point->y()});
    }
    if (b.half_width() == 0.0) {
      // A single admissible point: give the box unit extent so that
      // normalization stays well defined.
      b.p_min -= 0.5;
      b.p_max += 0.5;
      b.q_min -= 0.5;
      b.q_max += 0.5;
    }
    bbox_ = b;
    return;
  }

  if (!(probe_scale > 0.0)) reject("probe scale must be positive");

  // Compactness probe.
  const double box = 4.0 * probe_scale;
  std::mt19937_64 rng(kProbeSeed);
  std::uniform_real_distribution<double> u(-box, box);
  bool any = false;
  BoundingBox seen{0, 0, 0, 0};
  for (int i = 0; i < kProbeSamples; ++i) {
    const Point x(u(rng), u(rng));
    if (!contains(x)) continue;
    if (std::max(std::abs(x.x()), std::abs(x.y())) >= 0.99 * box)
      reject("domain is not compact: admissible point found on the probe boundary");
    if (!any) {
      seen = BoundingBox{x.x(), x.x(), x.y(), x.y()};
      any = true;
    }
    seen.p_min = std::min(seen.p_min, x.x());
    seen.p_max = std::max(seen.p_max, x.x());
    seen.q_min = std::min(seen.q_min, x.y());
    seen.q_max = std::max(seen.q_max, x.y());
  }

  if (bbox) {
    bbox_ = *bbox;
  } else {
    if (!any) reject("domain probe found no admissible points");
    // Probe samples are about 8 * scale / sqrt(N) apart; pad by a few spacings.
    const double pad = 0.05 * probe_scale;
    bbox_ = BoundingBox{seen.p_min - pad, seen.p_max + pad, seen.q_min - pad, seen.q_max + pad};
  }

  // Interior anchors, one per piece.
  std::vector<Point> sum(pieces_.size(), Point::Zero());
  std::vector<std::vector<Point>> accepted(pieces_.size());
  std::uniform_real_distribution<double> up(bbox_.p_min, bbox_.p_max);
  std::uniform_real_distribution<double> uq(bbox_.q_min, bbox_.q_max);
  for (int i = 0; i < kAnchorDraws; ++i) {
    const Point x(up(rng), uq(rng));
    bool done = true;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      if (accepted[k].size() >= static_cast<std::size_t>(kAnchorTarget)) continue;
      done = false;
      if (pieces_[k].contains(x)) {
        accepted[k].push_back(x);
        sum[k] += x;
      }
    }
    if (done) break;
  }
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    if (accepted[k].empty()) reject("piece '" + pieces_[k].label + "' has empty interior");
    BoundingBox pb{accepted[k][0].x(), accepted[k][0].x(), accepted[k][0].y(), accepted[k][0].y()};
    for (const auto& x : accepted[k]) {
      pb.p_min = std::min(pb.p_min, x.x());
      pb.p_max = std::max(pb.p_max, x.x());
      pb.q_min = std::min(pb.q_min, x.y());
      pb.q_max = std::max(pb.q_max, x.y());
    }
    const double pad = 0.1 * std::max(pb.half_width(), 1e-6 * bbox_.half_width());
    piece_boxes_.push_back(BoundingBox{pb.p_min - pad, pb.p_max + pad, pb.q_min - pad, pb.q_max + pad});
    Point centroid = sum[k] / static_cast<double>(accepted[k].size());
    if (!pieces_[k].contains(centroid)) {
      // Non-convex piece: fall back to the accepted sample nearest the centroid.
      auto best = std::min_element(accepted[k].begin(), accepted[k].end(), [&](const Point& a, const Point& b) {
        return (a - centroid).squaredNorm() < (b - centroid).squaredNorm();
      });
      centroid = *best;
    }
    anchors_.push_back(centroid);
  }
}

bool FlexDomain::has_cells() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const BasicSet& s) { return !s.cell.empty(); });
}

bool FlexDomain::contains(const Point& x, double tol) const {
  for (const auto& piece : pieces_)
    if (piece.contains(x, tol)) return true;
  return false;
}

bool contains(const FlexDomain& d, const Point& x, double tol) { return d.contains(x, tol); }

FlexDomain make_battery(double p_max, double s) {
  if (!(p_max > 0.0)) reject("battery: p_max must be > 0 (got " + fmt_num(p_max) + ")");
  if (!(s > p_max)) reject("battery: requires s > p_max (got s=" + fmt_num(s) + ", p_max=" + fmt_num(p_max) + ")");
  BasicSet set;
  set.label = "battery";
  set.constraints = {C(s * s) - P() * P() - Q() * Q(), C(p_max * p_max) - P() * P()};
  return FlexDomain({set}, DomainKind::continuous, BoundingBox{-p_max, p_max, -s, s}, s,
                    DerSpec{"battery", {{"p_max", p_max}, {"s", s}}});
}

FlexDomain make_pv(double p_max, double s) {
  if (!(p_max > 0.0)) reject("pv: p_max must be > 0 (got " + fmt_num(p_max) + ")");
  if (!(s > p_max)) reject("pv: requires s > p_max (got s=" + fmt_num(s) + ", p_max=" + fmt_num(p_max) + ")");
  BasicSet set;
  set.label = "pv";
  set.constraints = {C(s * s) - P() * P() - Q() * Q(), -p_max * P() - P() * P()};
  return FlexDomain({set}, DomainKind::continuous, BoundingBox{-p_max, 0.0, -s, s}, s,
                    DerSpec{"pv", {{"p_max", p_max}, {"s", s}}});
}

FlexDomain make_wind(const WindParams& w) {
  if (!(w.rotor_coupling > 0.0)) reject("wind: rotor_coupling must be > 0");
  if (!(w.p_max > 0.0)) reject("wind: p_max must be > 0");
  if (!(w.p0 > 0.0 && w.p0 < w.p_max)) reject("wind: requires 0 < p0 < p_max");
  if (!(w.q0 > 0.0)) reject("wind: requires q0 > 0");
  const double rated = std::sqrt(w.rotor_coupling) * w.p_max;
  if (!(w.s1 > rated)) reject("wind: requires s1 > sqrt(rotor_coupling) * p_max");
  if (!(w.s2 > rated)) reject("wind: requires s2 > sqrt(rotor_coupling) * p_max");
  if (!(w.q0 < std::min(w.s1, w.s2))) reject("wind: requires q0 < min(s1, s2)");

  const double k = w.rotor_coupling;
  const Polynomial2 strip = -(P() * P()) - (w.p0 + w.p_max) * P() - C(w.p0 * w.p_max);

  BasicSet near;
  near.label = "wind-near-origin";
  near.constraints = {-(P() * P()) - w.p0 * P(), C(w.q0 * w.q0) - Q() * Q()};
  near.cell = {HalfPlane{Point(-1.0, 0.0), w.p0}};

  BasicSet upper;
  upper.label = "wind-upper";
  upper.constraints = {strip, Q(), C(w.s2 * w.s2) - k * (P() * P()) - Q() * Q()};
  upper.cell = {HalfPlane{Point(1.0, 0.0), -w.p0}, HalfPlane{Point(0.0, -1.0), 0.0}};

  BasicSet lower;
  lower.label = "wind-lower";
  lower.constraints = {strip, -Q(), C(w.s1 * w.s1) - k * (P() * P()) - Q() * Q()};
  lower.cell = {HalfPlane{Point(1.0, 0.0), -w.p0}, HalfPlane{Point(0.0, 1.0), 0.0}};

  // q extremes of the curved pieces sit at the smallest |p|, i.e. p = -p0.
  const double q_hi = std::max(w.q0, std::sqrt(w.s2 * w.s2 - k * w.p0 * w.p0));
  const double q_lo = -std::max(w.q0, std::sqrt(w.s1 * w.s1 - k * w.p0 * w.p0));
  return FlexDomain({near, upper, lower}, DomainKind::continuous, BoundingBox{-w.p_max, 0.0, q_lo, q_hi},
                    std::max({w.p_max, w.s1, w.s2}),
                    DerSpec{"wind",
                            {{"p_max", w.p_max},
                             {"p0", w.p0},
                             {"q0", w.q0},
                             {"s1", w.s1},
                             {"s2", w.s2},
                             {"rotor_coupling", w.rotor_coupling}}});
}

FlexDomain make_ac(double p_max, double gamma) {
  if (!(p_max > 0.0)) reject("ac: p_max must be > 0");
  if (!(gamma > 0.0)) reject("ac: gamma must be > 0");
  BasicSet off;
  off.label = "ac-off";
  off.constraints = {-(P() * P()), -(Q() * Q())};
  off.point = Point(0.0, 0.0);
  const Polynomial2 dp = P() - C(p_max);
  const Polynomial2 dq = Q() - C(gamma * p_max);
  BasicSet on;
  on.label = "ac-on";
  on.constraints = {-(dp * dp), -(dq * dq)};
  on.point = Point(p_max, gamma * p_max);
  return FlexDomain({off, on}, DomainKind::discrete, std::nullopt, p_max,
                    DerSpec{"ac", {{"p_max", p_max}, {"gamma", gamma}}});
}

FlexDomain make_custom(std::vector<BasicSet> pieces, double scale) {
  if (pieces.empty()) reject("custom: at least one piece required");
  const bool all_points =
      std::all_of(pieces.begin(), pieces.end(), [](const BasicSet& s) { return s.point.has_value(); });
  const bool any_point =
      std::any_of(pieces.begin(), pieces.end(), [](const BasicSet& s) { return s.point.has_value(); });
  if (any_point && !all_points) reject("custom: cannot mix point pieces with continuous pieces");
  const DomainKind kind = all_points ? DomainKind::discrete : DomainKind::continuous;
  return FlexDomain(std::move(pieces), kind, std::nullopt, scale, DerSpec{"custom", {{"scale", scale}}});
}

std::vector<Point> sample_boundary(const FlexDomain& d, std::size_t n) {
  if (d.is_discrete()) reject("sample_boundary: discrete domains have no boundary");
  if (n < 8) reject("sample_boundary: n must be >= 8");
  const auto& anchors = d.anchors();
  const std::size_t per_piece = (n + anchors.size() - 1) / anchors.size();
  const double reach = 2.0 * d.bounding_box().diagonal() + 1.0;
  std::vector<Point> out;
  out.reserve(per_piece * anchors.size());
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    const Point& a = anchors[k];
    // Stagger pieces so their rays do not share directions.
    const double phase = static_cast<double>(k) / static_cast<double>(anchors.size());
    for (std::size_t r = 0; r < per_piece; ++r) {
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(r) + 0.5 * phase + 0.25) /
                           static_cast<double>(per_piece);
      const Point dir(std::cos(theta), std::sin(theta));
      double lo = 0.0;
      double hi = reach;
      for (int it = 0; it < kRayBisectionSteps; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (d.contains(a + mid * dir)) lo = mid;
        else hi = mid;
      }
      out.push_back(a + lo * dir);
    }
  }
  return out;
}

std::vector<Point> sample_interior(const FlexDomain& d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(n);
  if (d.is_discrete()) {
    std::uniform_int_distribution<std::size_t> pick(0, d.pieces().size() - 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(*d.pieces()[pick(rng)].point);
    return out;
  }
  const auto& b = d.bounding_box();
  std::uniform_real_distribution<double> up(b.p_min, b.p_max);
  std::uniform_real_distribution<double> uq(b.q_min, b.q_max);
  while (out.size() < n) {
    const Point x(up(rng), uq(rng));
    if (d.contains(x)) out.push_back(x);
  }
  return out;
}

}  // namespace flexhull
