#include "flexhull/io.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "flexhull/errors.hpp"

namespace flexhull::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::config, where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(where, "missing field '" + std::string(key) + "'");
  return *it;
}

double number(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number()) bad(where + "." + key, "expected a number");
  return v.get<double>();
}

Json point_json(const Point& x) { return Json::array({x.x(), x.y()}); }

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

Json polynomial_to_json(const Polynomial2& poly) {
  Json terms = Json::array();
  for (const auto& [m, c] : poly.terms()) terms.push_back(Json::array({m.p, m.q, c}));
  return Json{{"terms", terms}};
}

Polynomial2 polynomial_from_json(const Json& j, const std::string& where) {
  const Json& terms = field(j, "terms", where);
  if (!terms.is_array()) bad(where + ".terms", "expected an array");
  Polynomial2 out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Json& t = terms[k];
    const std::string at = where + ".terms[" + std::to_string(k) + "]";
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() || !t[2].is_number())
      bad(at, "expected [i, j, coeff]");
    const int i = t[0].get<int>(), e = t[1].get<int>();
    if (i < 0 || e < 0) bad(at, "negative exponent");
    out += Polynomial2::monomial(i, e, t[2].get<double>());
  }
  return out;
}

FlexDomain der_from_json(const Json& j, const std::string& where) {
  const Json& type_field = field(j, "type", where);
  if (!type_field.is_string()) bad(where + ".type", "expected a string");
  const std::string type = type_field.get<std::string>();
  const Json& params = field(j, "params", where);
  const std::string pw = where + ".params";
  try {
    if (type == "battery") return make_battery(number(params, "p_max", pw), number(params, "s", pw));
    if (type == "pv") return make_pv(number(params, "p_max", pw), number(params, "s", pw));
    if (type == "ac") return make_ac(number(params, "p_max", pw), number(params, "gamma", pw));
    if (type == "wind") {
      WindParams w;
      w.p_max = number(params, "p_max", pw);
      w.p0 = number(params, "p0", pw);
      w.q0 = number(params, "q0", pw);
      w.s1 = number(params, "s1", pw);
      w.s2 = number(params, "s2", pw);
      w.rotor_coupling = number(params, "rotor_coupling", pw);
      return make_wind(w);
    }
    if (type == "custom") {
      const Json& pieces = field(params, "pieces", pw);
      if (!pieces.is_array() || pieces.empty()) bad(pw + ".pieces", "expected a nonempty array");
      std::vector<BasicSet> sets;
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        const std::string at = pw + ".pieces[" + std::to_string(k) + "]";
        if (!pieces[k].is_array()) bad(at, "expected an array of polynomials");
        BasicSet piece;
        piece.label = "piece" + std::to_string(k);
        for (std::size_t c = 0; c < pieces[k].size(); ++c)
          piece.constraints.push_back(polynomial_from_json(pieces[k][c], at + "[" + std::to_string(c) + "]"));
        sets.push_back(std::move(piece));
      }
      const double scale = params.contains("scale") ? number(params, "scale", pw) : 1.0;
      return make_custom(std::move(sets), scale);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    bad(where, e.what());
  }
  bad(where + ".type", "unknown DER type '" + type + "'");
}

Json der_to_json(const DerSpec& spec) {
  Json params = Json::object();
  for (const auto& [k, v] : spec.params) params[k] = v;
  return Json{{"type", spec.type}, {"params", params}};
}

PrototypePtr prototype_from_json(const Json& j, const std::string& where) {
  const Json& kind_field = field(j, "kind", where);
  if (!kind_field.is_string()) bad(where + ".kind", "expected a string");
  const std::string kind = kind_field.get<std::string>();
  try {
    if (kind == "regular") {
      const Json& n = field(j, "n", where);
      if (!n.is_number_integer()) bad(where + ".n", "expected an integer");
      const double rotation = j.contains("rotation") ? number(j, "rotation", where) : 0.0;
      return regular_prototype(n.get<int>(), rotation);
    }
    if (kind == "custom") {
      const Json& a = field(j, "A", where);
      const Json& b = field(j, "b", where);
      if (!a.is_array() || !b.is_array() || a.size() != b.size() || a.empty())
        bad(where, "A and b must be nonempty arrays of equal length");
      EdgeMatrix normals(static_cast<Eigen::Index>(a.size()), 2);
      Eigen::VectorXd offsets(static_cast<Eigen::Index>(b.size()));
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_array() || a[i].size() != 2 || !a[i][0].is_number() || !a[i][1].is_number() ||
            !b[i].is_number())
          bad(where + ".A[" + std::to_string(i) + "]", "expected a 2-vector with a numeric offset");
        normals(static_cast<Eigen::Index>(i), 0) = a[i][0].get<double>();
        normals(static_cast<Eigen::Index>(i), 1) = a[i][1].get<double>();
        offsets[static_cast<Eigen::Index>(i)] = b[i].get<double>();
      }
      return custom_prototype(std::move(normals), std::move(offsets));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    bad(where, e.what());
  }
  bad(where + ".kind", "unknown prototype kind '" + kind + "'");
}

Json prototype_to_json(const PrototypePolygon& proto) {
  Json a = Json::array(), b = Json::array();
  for (int i = 0; i < proto.edge_count(); ++i) {
    a.push_back(point_json(proto.normal(i)));
    b.push_back(proto.offset(i));
  }
  return Json{{"kind", "custom"}, {"A", a}, {"b", b}};
}

Json homothet_to_json(const Homothet& h) {
  Json j{{"alpha", h.alpha}, {"beta", point_json(h.beta)}};
  if (h.proto) j["prototype"] = prototype_to_json(*h.proto);
  return j;
}

Json fit_report_to_json(const FitReport& r) {
  return Json{{"alpha", r.homothet.alpha},
              {"beta", point_json(r.homothet.beta)},
              {"iterations", r.iterations},
              {"alpha_trace", r.alpha_trace},
              {"binding_edges", r.binding_edges_final},
              {"monotonic", r.monotonic}};
}

Json fleet_to_json(const FleetApprox& fleet) {
  Json members = Json::array();
  for (const auto& m : fleet.per_der) {
    Json entry{{"outer", homothet_to_json(m.outer)}};
    entry["inner"] = m.inner ? homothet_to_json(*m.inner) : Json(nullptr);
    members.push_back(entry);
  }
  Json j{{"per_der", members}, {"aggregate_outer", homothet_to_json(fleet.aggregate_outer)}};
  j["aggregate_inner"] = fleet.aggregate_inner ? homothet_to_json(*fleet.aggregate_inner) : Json(nullptr);
  j["partial_inner"] = fleet.partial_inner;
  if (fleet.aggregate_inner) {
    j["pi_d"] = distance_metric(fleet.aggregate_outer, *fleet.aggregate_inner);
    j["pi_a"] = area_metric(fleet.aggregate_outer, *fleet.aggregate_inner);
  }
  return j;
}

Json program_to_json(const ConicProgram& prog) {
  static const char* kinds[] = {"free", "nonneg", "psd"};
  Json vars = Json::array();
  for (const auto& v : prog.variables())
    vars.push_back(Json{{"id", v.id.index},
                        {"kind", kinds[static_cast<int>(v.kind)]},
                        {"size", v.size},
                        {"basis_degree", v.basis_degree},
                        {"name", v.name}});
  Json rows = Json::array();
  for (const auto& r : prog.equalities()) {
    Json terms = Json::array();
    for (const auto& t : r.terms) terms.push_back(Json::array({t.var.index, t.row, t.col, t.coeff}));
    rows.push_back(Json{{"terms", terms}, {"rhs", r.rhs}});
  }
  Json objective = Json::array();
  for (const auto& [id, c] : prog.objective()) objective.push_back(Json::array({id.index, c}));
  return Json{{"variables", vars}, {"equalities", rows}, {"objective", objective}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config, "cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::config, "invalid JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::io, "write failed for '" + path + "'");
}

std::string points_csv(const std::vector<Point>& points) {
  std::string out = "p,q\n";
  for (const auto& x : points) out += format_double(x.x()) + "," + format_double(x.y()) + "\n";
  return out;
}

}  // namespace flexhull::io
