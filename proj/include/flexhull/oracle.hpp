#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "flexhull/domain.hpp"
#include "flexhull/prototype.hpp"

namespace flexhull::oracle {

struct SupportEstimate {
  Point direction = Point::UnitX();
  double value = 0.0;
  Point argmax = Point::Zero();
};

/// max a . x over d by ray bisection from every piece anchor (n rays in
/// total) followed by a golden-section refinement around the best ray. The
/// direction is normalized. Pieces are assumed star-shaped about their anchor.
SupportEstimate support_estimate(const FlexDomain& d, const Point& a, std::size_t n = 1000);

/// Exact support for domains built by the battery, pv, wind and ac makers;
/// nullopt otherwise.
std::optional<SupportEstimate> support_closed_form(const FlexDomain& d, const Point& a);

/// Closed form when available, else support_estimate with n rays.
double support(const FlexDomain& d, const Point& a, std::size_t n = 20000);

/// min alpha s.t. alpha b_i + a_i . beta >= h_i, then min |beta|_1 at that
/// alpha. Solved by vertex enumeration.
Homothet outer_fit_from_supports(const PrototypePtr& proto, const Eigen::VectorXd& h);

Homothet outer_fit_lp(const FlexDomain& d, const PrototypePtr& proto);

/// Vertices, per_edge points per edge and an interior grid of the homothet
/// all inside d.
bool homothet_inside(const FlexDomain& d, const Homothet& h, int per_edge = 64, double tol = 0.0);

/// Grid search over beta in the bounding box (grid_n x grid_n) with alpha
/// bisected to `tol` at each beta. Requires a continuous domain.
Homothet inner_fit_grid(const FlexDomain& d, const PrototypePtr& proto, int grid_n = 41, double tol = 1e-3);

/// n sums of independent uniform samples, one from each domain.
std::vector<Point> minkowski_sample(const std::vector<const FlexDomain*>& domains, std::size_t n,
                                    std::uint64_t seed = 0x5eedf1e7ULL);

/// Largest distance between matching boundary points alpha y + beta of the
/// two homothets, over per_edge samples y on each prototype edge.
double sampled_gap(const Homothet& outer, const Homothet& inner, int per_edge = 200);

/// area(inner) / area(outer) from n uniform samples in their common box.
double monte_carlo_area_ratio(const Homothet& outer, const Homothet& inner, std::size_t n,
                              std::uint64_t seed = 0x5eedf1e7ULL);

/// Independent stream seed for member `index`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace flexhull::oracle
