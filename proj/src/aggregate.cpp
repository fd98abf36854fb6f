#include "flexhull/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "flexhull/errors.hpp"

namespace flexhull {

namespace {

void require_pair(const Homothet& outer, const Homothet& inner) {
  if (!outer.proto || !inner.proto) throw Error(ErrorCode::invalid_argument, "homothet without prototype");
  if (!same_prototype(outer, inner)) throw Error(ErrorCode::prototype_mismatch, "homothets use different prototypes");
}

}  // namespace

bool same_prototype(const Homothet& a, const Homothet& b) {
  if (a.proto == b.proto) return true;
  return a.proto && b.proto && a.proto->same_as(*b.proto, 1e-12);
}

Homothet aggregate(const std::vector<Homothet>& homothets) {
  if (homothets.empty()) throw Error(ErrorCode::invalid_argument, "aggregate of an empty list");
  Homothet sum;
  sum.proto = homothets.front().proto;
  if (!sum.proto) throw Error(ErrorCode::invalid_argument, "homothet without prototype");
  sum.alpha = 0.0;
  sum.beta = Point::Zero();
  for (std::size_t i = 0; i < homothets.size(); ++i) {
    const auto& h = homothets[i];
    if (!same_prototype(h, homothets.front()))
      throw Error(ErrorCode::prototype_mismatch,
                  "homothet " + std::to_string(i) + " does not share the prototype of homothet 0");
    sum.alpha += h.alpha;
    sum.beta += h.beta;
  }
  return sum;
}

FleetApprox make_fleet_approx(std::vector<DerApprox> per_der, bool allow_partial_inner) {
  if (per_der.empty()) throw Error(ErrorCode::invalid_argument, "fleet has no members");
  FleetApprox fleet;
  std::vector<Homothet> outers, inners;
  for (const auto& m : per_der) {
    outers.push_back(m.outer);
    if (m.inner) inners.push_back(*m.inner);
  }
  fleet.aggregate_outer = aggregate(outers);
  const bool complete = inners.size() == per_der.size();
  if (!inners.empty() && (complete || allow_partial_inner)) {
    fleet.aggregate_inner = aggregate(inners);
    if (!same_prototype(*fleet.aggregate_inner, fleet.aggregate_outer))
      throw Error(ErrorCode::prototype_mismatch, "inner and outer homothets use different prototypes");
    fleet.partial_inner = !complete;
  }
  fleet.per_der = std::move(per_der);
  return fleet;
}

double distance_metric(const Homothet& outer, const Homothet& inner) {
  require_pair(outer, inner);
  if (outer.alpha < inner.alpha)
    throw Error(ErrorCode::invalid_argument, "distance metric needs outer alpha >= inner alpha");
  const double da = outer.alpha - inner.alpha;
  const Point db = outer.beta - inner.beta;
  double worst = 0.0;
  for (const auto& v : outer.proto->vertices()) worst = std::max(worst, (da * v + db).norm());
  return worst;
}

double area_metric(const Homothet& outer, const Homothet& inner) {
  require_pair(outer, inner);
  if (!(inner.alpha > 0.0) || inner.alpha > outer.alpha)
    throw Error(ErrorCode::invalid_argument, "area metric needs 0 < inner alpha <= outer alpha");
  const double r = inner.alpha / outer.alpha;
  return r * r;
}

}  // namespace flexhull
