#include "flexhull/fit.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <string>

#include <spdlog/spdlog.h>

#include "flexhull/errors.hpp"

namespace flexhull {

namespace {

constexpr double kMinRegionArea = 1e-12;
constexpr double kTieBreakWeight = 1e-4;

// Local coordinates x~ = (x - center) / scale. All programs are compiled here.
struct Frame {
  Point center;
  double scale;

  Point to_local(const Point& x) const { return (x - center) / scale; }
};

Frame frame_of(const FlexDomain& d) {
  const auto& box = d.bounding_box();
  const double hw = box.half_width();
  return Frame{box.center(), hw > 0.0 ? hw : 1.0};
}

struct LocalPiece {
  std::vector<Polynomial2> constraints;
  std::vector<HalfPlane> cell;
  std::optional<Point> point;
  std::string label;
};

LocalPiece localize_piece(const BasicSet& piece, const Frame& f) {
  LocalPiece lp;
  lp.label = piece.label;
  for (const auto& g : piece.constraints) {
    Polynomial2 gl = g.affine_substitute(f.center, f.scale);
      if (gl.degree() < 1) continue;
      gl *= 1.0 / gl.max_abs_coeff();
      lp.constraints.push_back(std::move(gl));
    }
    for (const auto& h : piece.cell) lp.cell.push_back(HalfPlane{h.normal, (h.offset - h.normal.dot(f.center)) / f.scale});
    if (piece.point) lp.point = f.to_local(*piece.point);
  return lp;
}

std::vector<LocalPiece> localize(const FlexDomain& d, const Frame& f) {
  std::vector<LocalPiece> out;
  for (const auto& piece : d.pieces()) out.push_back(localize_piece(piece, f));
  return out;
}

int even_floor(int v) { return v - (((v % 2) + 2) % 2); }

int certificate_degree(const FlexDomain& d, const DegreeConfig& cfg) {
  if (cfg.certificate_degree > 0) {
    if (cfg.certificate_degree % 2 != 0)
      throw Error(ErrorCode::invalid_argument, "certificate degree must be even");
    return cfg.certificate_degree;
  }
  int top = 1;
  for (const auto& piece : d.pieces())
    for (const auto& g : piece.constraints) top = std::max(top, g.degree());
  return top + (top % 2) + 2;
}

std::vector<Multiplier> multipliers_for(const std::vector<Polynomial2>& gs, int degree, const std::string& label) {
  std::vector<Multiplier> out;
  for (const auto& g : gs) {
    const int sd = even_floor(degree - g.degree());
    if (sd < 0)
      throw Error(ErrorCode::degree_mismatch,
                  label + ": certificate degree " + std::to_string(degree) + " is below constraint degree " +
                      std::to_string(g.degree()));
    out.push_back(Multiplier{g, sd});
  }
  return out;
}

Polynomial2 halfplane_slack(const Point& normal, double offset) {
  return Polynomial2::constant(offset) - normal.x() * Polynomial2::p() - normal.y() * Polynomial2::q();
}

bool usable(const ConicProgram& prog, const SolveOutcome& s) {
  if (s.status == SolveStatus::optimal) return true;
  return s.status == SolveStatus::inaccurate && check_solution(prog, s).ok;
}

std::vector<Point> box_samples(const Point& lo, const Point& hi, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> up(lo.x(), hi.x()), uq(lo.y(), hi.y());
  std::vector<Point> out(static_cast<std::size_t>(n));
  for (auto& x : out) x = Point(up(rng), uq(rng));
  return out;
}

void audit_blocks(const std::vector<SosBlock>& blocks, const SolveOutcome& sol, const Point& lo, const Point& hi,
                  const DegreeConfig& cfg) {
  if (cfg.audit == nullptr) return;
  const auto samples = box_samples(lo, hi, cfg.audit_samples, cfg.seed);
  for (const auto& b : blocks) cfg.audit->record(audit_certificate(b, sol, samples));
}

Point line_meet(const Point& n1, double b1, const Point& n2, double b2) {
  const double det = n1.x() * n2.y() - n1.y() * n2.x();
  return Point((b1 * n2.y() - b2 * n1.y()) / det, (n1.x() * b2 - n2.x() * b1) / det);
}

// beta / L = pos - neg, so every variable is conic.
struct OuterVars {
  VarId alpha;
  VarId pos[2], neg[2];
};

// One block per (piece, edge), each compiled in the piece's own frame
// y = (x - c_k) / L_k so that small pieces stay well scaled. With
// beta = L (pos - neg) and alpha = L alpha~, a . (beta - x) + alpha b becomes
// (L (a . (pos - neg) + alpha~ b) - a . c_k) / L_k - a . y.
std::vector<SosBlock> compile_outer(ConicProgram& prog, const OuterVars& v, const FlexDomain& d, const Frame& global,
                                    const PrototypePolygon& proto, int degree, double margin) {
  std::vector<SosBlock> blocks;
  for (std::size_t k = 0; k < d.pieces().size(); ++k) {
    const auto& piece = d.pieces()[k];
    const auto& box = d.piece_boxes()[k];
    Frame local{box.center(), box.half_width() > 0.0 ? box.half_width() : global.scale};
    if (piece.point) local = Frame{*piece.point, global.scale};
    const auto lp = localize_piece(piece, local);
    const double ratio = global.scale / local.scale;
    for (int i = 0; i < proto.edge_count(); ++i) {
      const Point a = proto.normal(i);
      const std::string label = "outer.piece" + std::to_string(k) + ".edge" + std::to_string(i);
      AffinePolynomial target;
      target.add(v.alpha, Polynomial2::constant(ratio * proto.offset(i)));
      for (int c = 0; c < 2; ++c) {
        target.add(v.pos[c], Polynomial2::constant(ratio * a[c]));
        target.add(v.neg[c], Polynomial2::constant(-ratio * a[c]));
      }
      target.add(Polynomial2::constant(-a.dot(local.center) / local.scale - margin));
      if (piece.point) {
        blocks.push_back(sos_constraint(prog, target, {}, 0, label));
      } else {
        target.add(halfplane_slack(a, 0.0));
        blocks.push_back(sos_constraint(prog, target, multipliers_for(lp.constraints, degree, label), degree / 2,
                                        label));
      }
    }
  }
  return blocks;
}

// g - t - sum sigma_j l_j is SOS with t maximized (capped at 1). Returns
// t* or nullopt when the solver produced nothing usable.
std::optional<double> inner_margin(const Polynomial2& g, const std::vector<Polynomial2>& planes, int degree,
                                   const std::string& label, ConicProgram& prog, SolveOutcome& sol,
                                   std::vector<SosBlock>& blocks) {
  // t = 1 - s with s >= 0 keeps every variable conic.
  const VarId s = prog.add_nonneg(label + ".slack");
  AffinePolynomial target(g - Polynomial2::constant(1.0));
  target.add(s, Polynomial2::constant(1.0));
  blocks.push_back(sos_constraint(prog, target, multipliers_for(planes, degree, label), degree / 2, label));
  prog.set_objective({{s, 1.0}});
  sol = solve(prog);
  if (!usable(prog, sol)) return std::nullopt;
  return 1.0 - sol.scalar(s);
}

bool certify_local(const std::vector<LocalPiece>& pieces, const PrototypePolygon& proto, double alpha,
                   const Point& beta, int degree, const DegreeConfig& cfg) {
  ConvexPolygon base;
  std::vector<Polynomial2> edge_planes;
  for (const auto& v : proto.vertices()) base.vertices.push_back(alpha * v + beta);
  for (int i = 0; i < proto.edge_count(); ++i)
    edge_planes.push_back(halfplane_slack(proto.normal(i), alpha * proto.offset(i) + proto.normal(i).dot(beta)));

  struct Accepted {
    ConicProgram prog;
    SolveOutcome sol;
    std::vector<SosBlock> blocks;
    Point lo, hi;
  };
  std::vector<Accepted> accepted;

  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& piece = pieces[k];
    ConvexPolygon region = base;
    std::vector<Polynomial2> planes = edge_planes;
    for (const auto& h : piece.cell) {
      const bool cuts = std::any_of(region.vertices.begin(), region.vertices.end(),
                                    [&](const Point& v) { return h.normal.dot(v) > h.offset; });
      if (!cuts) continue;
      region = clip(region, h.normal, h.offset);
      planes.push_back(halfplane_slack(h.normal, h.offset));
    }
    if (region.area() < kMinRegionArea) continue;

    Point lo = region.vertices.front(), hi = region.vertices.front();
    for (const auto& v : region.vertices) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    for (std::size_t j = 0; j < piece.constraints.size(); ++j) {
      const std::string label = "inner.piece" + std::to_string(k) + ".g" + std::to_string(j);
      Accepted acc;
      const auto t = inner_margin(piece.constraints[j], planes, degree, label, acc.prog, acc.sol, acc.blocks);
      if (!t || *t < -cfg.inner_tolerance) return false;
      acc.lo = lo;
      acc.hi = hi;
      if (cfg.audit != nullptr) accepted.push_back(std::move(acc));
    }
  }
  for (const auto& a : accepted) audit_blocks(a.blocks, a.sol, a.lo, a.hi, cfg);
  return true;
}

bool nondecreasing(const std::vector<double>& v, double tol) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1] - tol) return false;
  return true;
}

}  // namespace

Homothet fit_outer(const FlexDomain& d, const PrototypePtr& proto, const DegreeConfig& cfg) {
  if (!proto) throw Error(ErrorCode::invalid_argument, "prototype is null");
  const Frame f = frame_of(d);
  const int degree = certificate_degree(d, cfg);

  // min alpha + w |beta|_1 (beta in domain units). For a small enough w this
  // is the lexicographic optimum: smallest alpha, then smallest |beta|_1.
  ConicProgram prog;
  OuterVars v{prog.add_nonneg("alpha"),
              {prog.add_nonneg("beta_p+"), prog.add_nonneg("beta_q+")},
              {prog.add_nonneg("beta_p-"), prog.add_nonneg("beta_q-")}};
  const auto blocks = compile_outer(prog, v, d, f, *proto, degree, cfg.margin);
  std::vector<std::pair<VarId, double>> objective{{v.alpha, 1.0}};
  for (int c = 0; c < 2; ++c) {
    objective.emplace_back(v.pos[c], kTieBreakWeight);
    objective.emplace_back(v.neg[c], kTieBreakWeight);
  }
  prog.set_objective(objective);
  const SolveOutcome sol = solve(prog);
  if (!usable(prog, sol))
    throw Error(ErrorCode::solver, std::string("outer fit: solver returned ") + to_string(sol.status) + ": " +
                                       sol.message);
  audit_blocks(blocks, sol, Point(-1.2, -1.2), Point(1.2, 1.2), cfg);

  Homothet h;
  h.proto = proto;
  h.alpha = f.scale * sol.scalar(v.alpha);
  h.beta = f.scale * Point(sol.scalar(v.pos[0]) - sol.scalar(v.neg[0]), sol.scalar(v.pos[1]) - sol.scalar(v.neg[1]));
  if (!(h.alpha > 0.0)) throw Error(ErrorCode::solver, "outer fit: non-positive alpha");
  return h;
}

bool sampled_inside(const FlexDomain& d, const Homothet& h, double tol) {
  const auto verts = homothet_vertices(h);
  for (const auto& v : verts)
    if (!d.contains(v, tol)) return false;
  for (const auto& x : homothet_edge_samples(h, 200))
    if (!d.contains(x, tol)) return false;
  Point lo = verts.front(), hi = verts.front();
  for (const auto& v : verts) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  constexpr int kGrid = 30;
  for (int i = 0; i <= kGrid; ++i) {
    for (int j = 0; j <= kGrid; ++j) {
      const Point x(lo.x() + (hi.x() - lo.x()) * i / kGrid, lo.y() + (hi.y() - lo.y()) * j / kGrid);
      if (homothet_contains(h, x) && !d.contains(x, tol)) return false;
    }
  }
  return true;
}

bool check_inner(const FlexDomain& d, const PrototypePtr& proto, double alpha, const Point& beta,
                 const DegreeConfig& cfg) {
  if (d.is_discrete())
    throw Error(ErrorCode::discrete_domain, "inner approximations do not exist for discrete flexibility domains");
  if (!(alpha > 0.0)) throw Error(ErrorCode::invalid_argument, "check_inner: alpha must be > 0");
  const Homothet h{proto, alpha, beta};

  if (d.pieces().size() > 1 && !d.has_cells()) {
    static std::once_flag warned;
    std::call_once(warned, [] {
      spdlog::warn("union domain without separating cells: inner containment checked by sampling, not certified");
    });
    return sampled_inside(d, h, 1e-9);
  }

  // Certify in homothet coordinates x = beta + alpha * y, where the homothet
  // is the prototype itself and conditioning does not depend on alpha.
  const auto pieces = localize(d, Frame{beta, alpha});
  const int degree = certificate_degree(d, cfg);
  if (certify_local(pieces, *proto, 1.0, Point::Zero(), degree, cfg)) return true;
  if (cfg.escalate && degree / 2 + 1 <= cfg.max_basis_degree && sampled_inside(d, h, 1e-9))
    return certify_local(pieces, *proto, 1.0, Point::Zero(), degree + 2, cfg);
  return false;
}

double max_alpha_bisection(const FlexDomain& d, const PrototypePtr& proto, const Point& beta,
                           const InnerFitParams& params, const DegreeConfig& cfg, std::optional<double> alpha_upper) {
  if (d.is_discrete())
    throw Error(ErrorCode::discrete_domain, "inner approximations do not exist for discrete flexibility domains");
  if (!(params.bisection_tol > 0.0)) throw Error(ErrorCode::invalid_argument, "bisection_tol must be > 0");
  double lo = 1e-3 * d.bounding_box().half_width();
  double hi = alpha_upper ? *alpha_upper : fit_outer(d, proto, cfg).alpha;
  if (!d.contains(beta) || !check_inner(d, proto, lo, beta, cfg))
    throw Error(ErrorCode::beta_outside_domain, "beta outside domain: no certified seed homothet at (" +
                                                    std::to_string(beta.x()) + ", " + std::to_string(beta.y()) + ")");
  while (hi - lo > params.bisection_tol) {
    const double mid = 0.5 * (lo + hi);
    if (check_inner(d, proto, mid, beta, cfg))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

std::vector<int> detect_binding_edges(const FlexDomain& d, const PrototypePtr& proto, double alpha, const Point& beta,
                                      double slack, double extra_push) {
  const auto form = homothet_halfspaces(Homothet{proto, alpha, beta});
  const int n = proto->edge_count();
  std::vector<int> prev(n), next(n);
  for (const auto& [a, b] : proto->vertex_edges()) {
    next[a] = b;
    prev[b] = a;
  }
  constexpr int kSamples = 400;
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    const Point ni = proto->normal(i);
    const double pushed = form.rhs[i] + slack * alpha + extra_push;
    const Point s = line_meet(ni, pushed, proto->normal(prev[i]), form.rhs[prev[i]]);
    const Point e = line_meet(ni, pushed, proto->normal(next[i]), form.rhs[next[i]]);
    for (int k = 0; k <= kSamples; ++k) {
      const Point x = s + (e - s) * (static_cast<double>(k) / kSamples);
      if (!d.contains(x)) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

Point default_beta_init(const FlexDomain& d, std::uint64_t seed) {
  const auto pts = sample_interior(d, 4000, seed);
  Point c = Point::Zero();
  for (const auto& x : pts) c += x;
  c /= static_cast<double>(pts.size());
  if (d.contains(c)) return c;
  return *std::min_element(pts.begin(), pts.end(),
                           [&](const Point& a, const Point& b) { return (a - c).norm() < (b - c).norm(); });
}

FitReport fit_inner(const FlexDomain& d, const PrototypePtr& proto, const InnerFitParams& params,
                    const DegreeConfig& cfg) {
  if (d.is_discrete())
    throw Error(ErrorCode::discrete_domain, "inner approximations do not exist for discrete flexibility domains");
  if (!(params.bisection_tol > 0.0 && params.epsilon_step > 0.0 && params.epsilon_step < 1.0 &&
        params.binding_slack > 0.0 && params.max_outer_iters > 0))
    throw Error(ErrorCode::invalid_argument,
                "inner fit parameters must be positive with epsilon_step < 1");

  const double upper = fit_outer(d, proto, cfg).alpha;
  const Point beta0 = params.beta_init.value_or(default_beta_init(d, cfg.seed));
  auto bisect = [&](const Point& b) { return max_alpha_bisection(d, proto, b, params, cfg, upper); };
  const double push = 2.0 * params.bisection_tol;

  FitReport rep;
  double alpha = bisect(beta0);
  Point beta = beta0;
  rep.alpha_trace.push_back(alpha);
  double step = params.epsilon_step * alpha;
  bool binding_current = false;

  while (rep.iterations < params.max_outer_iters) {
    ++rep.iterations;
    rep.binding_edges_final = detect_binding_edges(d, proto, alpha, beta, params.binding_slack, push);
    binding_current = true;
    Point dir = Point::Zero();
    for (int i : rep.binding_edges_final) dir -= proto->normal(i);
    if (dir.norm() < 1e-9) break;
    dir.normalize();

    bool improved = false;
    while (step >= params.bisection_tol) {
      const Point trial = beta + step * dir;
      double a = -1.0;
      try {
        a = bisect(trial);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::beta_outside_domain) throw;
      }
      if (a > alpha) {
        alpha = a;
        beta = trial;
        rep.alpha_trace.push_back(alpha);
        binding_current = false;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  if (!binding_current)
    rep.binding_edges_final = detect_binding_edges(d, proto, alpha, beta, params.binding_slack, push);

  // Runtime check of the monotonicity assumption along the path travelled.
  rep.monotonic = nondecreasing(rep.alpha_trace, 0.0);
  if ((beta - beta0).norm() > 1e-12) {
    std::vector<double> path{rep.alpha_trace.front()};
    for (double frac : {0.25, 0.5, 0.75}) {
      try {
        path.push_back(bisect(beta0 + frac * (beta - beta0)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::beta_outside_domain) throw;
        path.push_back(0.0);
      }
    }
    path.push_back(alpha);
    if (!nondecreasing(path, params.bisection_tol)) rep.monotonic = false;
  }
  if (!rep.monotonic) spdlog::warn("inner fit: alpha decreased along the translation path");

  rep.homothet = Homothet{proto, alpha, beta};
  return rep;
}

}  // namespace flexhull
