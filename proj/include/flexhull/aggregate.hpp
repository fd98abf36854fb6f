#pragma once

#include <optional>
#include <vector>

#include "flexhull/prototype.hpp"

namespace flexhull {

struct DerApprox {
  Homothet outer;
  std::optional<Homothet> inner;
};

struct FleetApprox {
  std::vector<DerApprox> per_der;
  Homothet aggregate_outer;
  /// Absent when some member has no inner homothet, unless built with
  /// partial inner aggregation.
  std::optional<Homothet> aggregate_inner;
  /// Set when aggregate_inner sums only the members that have one.
  bool partial_inner = false;
};

/// alpha = sum alpha_i, beta = sum beta_i, summed in index order.
/// Throws Error(invalid_argument) for an empty list and
/// Error(prototype_mismatch) when prototypes differ.
Homothet aggregate(const std::vector<Homothet>& homothets);

/// With allow_partial_inner, members lacking an inner homothet are skipped
/// for aggregate_inner instead of dropping it.
FleetApprox make_fleet_approx(std::vector<DerApprox> per_der, bool allow_partial_inner = false);

/// max_i |(alpha_out - alpha_in) v_i + beta_out - beta_in|.
double distance_metric(const Homothet& outer, const Homothet& inner);

/// (alpha_in / alpha_out)^2. Throws Error(invalid_argument) unless
/// 0 < alpha_in <= alpha_out.
double area_metric(const Homothet& outer, const Homothet& inner);

/// Same prototype object, or structurally equal within 1e-12.
bool same_prototype(const Homothet& a, const Homothet& b);

}  // namespace flexhull
