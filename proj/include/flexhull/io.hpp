#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "flexhull/aggregate.hpp"
#include "flexhull/conic.hpp"
#include "flexhull/domain.hpp"
#include "flexhull/fit.hpp"
#include "flexhull/polynomial.hpp"
#include "flexhull/prototype.hpp"

namespace flexhull::io {

using Json = nlohmann::json;

// Readers throw Error(config) with a message naming the offending field,
// prefixed by `where` (e.g. "ders[2]").

/// {"terms": [[i, j, coeff], ...]} in graded-lex order.
Json polynomial_to_json(const Polynomial2& poly);
Polynomial2 polynomial_from_json(const Json& j, const std::string& where = "polynomial");

/// {"type": ..., "params": {...}}; "custom" takes params.pieces as a list of
/// constraint lists and an optional params.scale.
FlexDomain der_from_json(const Json& j, const std::string& where = "der");
Json der_to_json(const DerSpec& spec);

/// {"kind":"regular","n":..,"rotation":..} or {"kind":"custom","A":..,"b":..}.
PrototypePtr prototype_from_json(const Json& j, const std::string& where = "prototype");
/// Always the custom form (normalized rows).
Json prototype_to_json(const PrototypePolygon& proto);

Json homothet_to_json(const Homothet& h);
Json fit_report_to_json(const FitReport& r);
/// Adds "pi_d" and "pi_a" when the aggregate inner homothet is present.
Json fleet_to_json(const FleetApprox& fleet);
/// Variables, equality triplets and objective, for external verification.
Json program_to_json(const ConicProgram& prog);

/// Two-space indent, sorted keys, trailing newline.
std::string dump(const Json& j);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
/// Header "p,q", one row per point.
std::string points_csv(const std::vector<Point>& points);

}  // namespace flexhull::io
