#include "flexhull/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "flexhull/errors.hpp"

namespace flexhull::oracle {

namespace {

constexpr int kRaySteps = 60;
constexpr int kGoldenSteps = 80;

Point unit(const Point& a) {
  const double n = a.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::invalid_argument, "support direction must be nonzero");
  return a / n;
}

double param(const DerSpec& s, const char* key) { return s.params.at(key); }

// Farthest point of piece k along direction theta from its anchor.
Point ray_exit(const BasicSet& piece, const Point& anchor, double theta, double reach) {
  const Point dir(std::cos(theta), std::sin(theta));
  double lo = 0.0, hi = reach;
  for (int it = 0; it < kRaySteps; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (piece.contains(anchor + mid * dir)) lo = mid;
    else hi = mid;
  }
  return anchor + lo * dir;
}

void consider(SupportEstimate& best, const Point& x) {
  const double v = best.direction.dot(x);
  if (v > best.value) {
    best.value = v;
    best.argmax = x;
  }
}

// Maximizer of a . x on the ellipse kappa p^2 + q^2 = r^2.
Point ellipse_point(const Point& a, double kappa, double r) {
  const double lambda = r / std::sqrt(a.x() * a.x() / kappa + a.y() * a.y());
  return Point(lambda * a.x() / kappa, lambda * a.y());
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over seed + golden-ratio stride
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SupportEstimate support_estimate(const FlexDomain& d, const Point& a, std::size_t n) {
  SupportEstimate best;
  best.direction = unit(a);
  best.value = -std::numeric_limits<double>::infinity();
  if (d.is_discrete()) {
    for (const auto& piece : d.pieces()) consider(best, *piece.point);
    return best;
  }
  const auto& pieces = d.pieces();
  const std::size_t per_piece = std::max<std::size_t>(8, (n + pieces.size() - 1) / pieces.size());
  const double reach = 2.0 * d.bounding_box().diagonal() + 1.0;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(per_piece);
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const Point& anchor = d.anchors()[k];
    auto f = [&](double theta) { return best.direction.dot(ray_exit(pieces[k], anchor, theta, reach)); };
    double top = -std::numeric_limits<double>::infinity();
    double top_theta = 0.0;
    for (std::size_t r = 0; r < per_piece; ++r) {
      const double theta = step * static_cast<double>(r);
      const double v = f(theta);
      if (v > top) {
        top = v;
        top_theta = theta;
      }
    }
    consider(best, ray_exit(pieces[k], anchor, top_theta, reach));
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = top_theta - step, hi = top_theta + step;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < kGoldenSteps; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = f(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = f(x1);
      }
    }
    consider(best, ray_exit(pieces[k], anchor, 0.5 * (lo + hi), reach));
  }
  return best;
}

std::optional<SupportEstimate> support_closed_form(const FlexDomain& d, const Point& a) {
  if (!d.spec()) return std::nullopt;
  const DerSpec& s = *d.spec();
  SupportEstimate best;
  best.direction = unit(a);
  best.value = -std::numeric_limits<double>::infinity();
  const Point u = best.direction;

  if (s.type == "battery" || s.type == "pv") {
    const double pmax = param(s, "p_max"), rating = param(s, "s");
    const double p_lo = -pmax;
    const double p_hi = s.type == "battery" ? pmax : 0.0;
    const Point arc = rating * u;
    if (arc.x() >= p_lo && arc.x() <= p_hi) consider(best, arc);
    for (double p : {p_lo, p_hi}) {
      const double h = std::sqrt(std::max(0.0, rating * rating - p * p));
      consider(best, Point(p, h));
      consider(best, Point(p, -h));
    }
    return best;
  }
  if (s.type == "ac") {
    consider(best, Point::Zero());
    consider(best, Point(param(s, "p_max"), param(s, "gamma") * param(s, "p_max")));
    return best;
  }
  if (s.type == "wind") {
    const double pmax = param(s, "p_max"), p0 = param(s, "p0"), q0 = param(s, "q0");
    const double s1 = param(s, "s1"), s2 = param(s, "s2"), kappa = param(s, "rotor_coupling");
    for (double p : {-p0, 0.0})
      for (double q : {-q0, q0}) consider(best, Point(p, q));
    struct Half {
      double radius, sign;
    };
    for (const Half& half : {Half{s2, 1.0}, Half{s1, -1.0}}) {
      for (double p : {-pmax, -p0}) {
        consider(best, Point(p, 0.0));
        consider(best, Point(p, half.sign * std::sqrt(half.radius * half.radius - kappa * p * p)));
      }
      const Point e = ellipse_point(u, kappa, half.radius);
      if (e.x() >= -pmax && e.x() <= -p0 && half.sign * e.y() >= 0.0) consider(best, e);
    }
    return best;
  }
  return std::nullopt;
}

double support(const FlexDomain& d, const Point& a, std::size_t n) {
  if (const auto exact = support_closed_form(d, a)) return exact->value;
  return support_estimate(d, a, n).value;
}

Homothet outer_fit_from_supports(const PrototypePtr& proto, const Eigen::VectorXd& h) {
  if (!proto) throw Error(ErrorCode::invalid_argument, "prototype is null");
  const int m = proto->edge_count();
  if (h.size() != m) throw Error(ErrorCode::invalid_argument, "one support value per prototype edge is required");
  const double tol = 1e-9 * (1.0 + h.cwiseAbs().maxCoeff());

  auto feasible = [&](double alpha, const Point& beta) {
    for (int i = 0; i < m; ++i)
      if (alpha * proto->offset(i) + proto->normal(i).dot(beta) < h[i] - tol) return false;
    return true;
  };

  double best_alpha = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        Eigen::Matrix3d A;
        Eigen::Vector3d rhs;
        const std::array<int, 3> rows{i, j, k};
        for (int r = 0; r < 3; ++r) {
          A.row(r) << proto->offset(rows[r]), proto->normal(rows[r]).x(), proto->normal(rows[r]).y();
          rhs[r] = h[rows[r]];
        }
        const auto lu = A.fullPivLu();
        if (!lu.isInvertible()) continue;
        const Eigen::Vector3d x = lu.solve(rhs);
        if (x[0] < best_alpha && feasible(x[0], x.tail<2>())) best_alpha = x[0];
      }
  if (!std::isfinite(best_alpha)) throw Error(ErrorCode::invalid_argument, "support LP has no vertex solution");

  // beta set at the optimal alpha: a_i . beta >= c_i.
  Eigen::VectorXd c(m);
  for (int i = 0; i < m; ++i) c[i] = h[i] - best_alpha * proto->offset(i);
  std::vector<Point> candidates{Point::Zero()};
  for (int i = 0; i < m; ++i) {
    const Point ai = proto->normal(i);
    if (std::abs(ai.x()) > 1e-12) candidates.emplace_back(c[i] / ai.x(), 0.0);
    if (std::abs(ai.y()) > 1e-12) candidates.emplace_back(0.0, c[i] / ai.y());
    for (int j = i + 1; j < m; ++j) {
      const Point aj = proto->normal(j);
      const double det = ai.x() * aj.y() - ai.y() * aj.x();
      if (std::abs(det) < 1e-12) continue;
      candidates.emplace_back((c[i] * aj.y() - c[j] * ai.y()) / det, (ai.x() * c[j] - aj.x() * c[i]) / det);
    }
  }
  std::optional<Point> beta;
  for (const auto& b : candidates) {
    if (!feasible(best_alpha, b)) continue;
    if (!beta || b.lpNorm<1>() < beta->lpNorm<1>() - 1e-12 ||
        (std::abs(b.lpNorm<1>() - beta->lpNorm<1>()) <= 1e-12 &&
         std::make_pair(b.x(), b.y()) < std::make_pair(beta->x(), beta->y())))
      beta = b;
  }
  if (!beta) throw Error(ErrorCode::invalid_argument, "support LP tie-break found no feasible translation");
  return Homothet{proto, best_alpha, *beta};
}

Homothet outer_fit_lp(const FlexDomain& d, const PrototypePtr& proto) {
  if (!proto) throw Error(ErrorCode::invalid_argument, "prototype is null");
  Eigen::VectorXd h(proto->edge_count());
  for (int i = 0; i < proto->edge_count(); ++i) h[i] = support(d, proto->normal(i));
  return outer_fit_from_supports(proto, h);
}

bool homothet_inside(const FlexDomain& d, const Homothet& h, int per_edge, double tol) {
  const auto verts = homothet_vertices(h);
  const std::size_t n = verts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = verts[i];
    const Point& b = verts[(i + 1) % n];
    for (int k = 0; k < per_edge; ++k) {
      const double t = static_cast<double>(k) / per_edge;
      if (!d.contains((1.0 - t) * a + t * b, tol)) return false;
    }
  }
  constexpr int kGrid = 8;
  for (const auto& y : h.proto->vertices())
    for (int k = 1; k < kGrid; ++k) {
      const Point x = h.beta + h.alpha * (static_cast<double>(k) / kGrid) * y;
      if (!d.contains(x, tol)) return false;
    }
  return true;
}

Homothet inner_fit_grid(const FlexDomain& d, const PrototypePtr& proto, int grid_n, double tol) {
  if (!proto) throw Error(ErrorCode::invalid_argument, "prototype is null");
  if (d.is_discrete()) throw Error(ErrorCode::discrete_domain, "inner fit of a discrete domain");
  if (grid_n < 2 || !(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "grid_n >= 2 and tol > 0 required");
  const auto& box = d.bounding_box();
  const double top = 2.0 * box.diagonal();
  Homothet best{proto, 0.0, Point::Zero()};
  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j) {
      const Point beta(box.p_min + (box.p_max - box.p_min) * i / (grid_n - 1),
                       box.q_min + (box.q_max - box.q_min) * j / (grid_n - 1));
      if (!d.contains(beta)) continue;
      if (best.alpha > 0.0 && !homothet_inside(d, Homothet{proto, best.alpha + tol, beta})) continue;
      double lo = best.alpha, hi = top;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (homothet_inside(d, Homothet{proto, mid, beta})) lo = mid;
        else hi = mid;
      }
      if (lo > best.alpha) best = Homothet{proto, lo, beta};
    }
  return best;
}

std::vector<Point> minkowski_sample(const std::vector<const FlexDomain*>& domains, std::size_t n,
                                    std::uint64_t seed) {
  if (domains.empty()) throw Error(ErrorCode::invalid_argument, "minkowski_sample needs at least one domain");
  std::vector<Point> out(n, Point::Zero());
  for (std::size_t i = 0; i < domains.size(); ++i) {
    const auto pts = sample_interior(*domains[i], n, derive_seed(seed, i));
    for (std::size_t k = 0; k < n; ++k) out[k] += pts[k];
  }
  return out;
}

double sampled_gap(const Homothet& outer, const Homothet& inner, int per_edge) {
  const auto& v = outer.proto->vertices();
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    for (int k = 0; k <= per_edge; ++k) {
      const Point y = a + (b - a) * (static_cast<double>(k) / per_edge);
      worst = std::max(worst, ((outer.alpha * y + outer.beta) - (inner.alpha * y + inner.beta)).norm());
    }
  }
  return worst;
}

double monte_carlo_area_ratio(const Homothet& outer, const Homothet& inner, std::size_t n, std::uint64_t seed) {
  Point lo = Point::Constant(std::numeric_limits<double>::infinity());
  Point hi = -lo;
  for (const auto* h : {&outer, &inner})
    for (const auto& v : homothet_vertices(*h)) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> up(lo.x(), hi.x()), uq(lo.y(), hi.y());
  std::size_t in_outer = 0, in_inner = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const Point x(up(rng), uq(rng));
    in_outer += homothet_contains(outer, x) ? 1 : 0;
    in_inner += homothet_contains(inner, x) ? 1 : 0;
  }
  if (in_outer == 0) throw Error(ErrorCode::invalid_argument, "no samples landed in the outer homothet");
  return static_cast<double>(in_inner) / static_cast<double>(in_outer);
}

}  // namespace flexhull::oracle
