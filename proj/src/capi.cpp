#include "flexhull/flexhull.h"

#include <algorithm>
#include <exception>
#include <functional>
#include <new>
#include <string>

#include "flexhull/aggregate.hpp"
#include "flexhull/errors.hpp"
#include "flexhull/fit.hpp"
#include "flexhull/io.hpp"
#include "flexhull/runner.hpp"

struct fh_domain {
  flexhull::FlexDomain value;
};

struct fh_prototype {
  flexhull::PrototypePtr value;
};

struct fh_report {
  flexhull::FitReport value;
};

namespace {

thread_local std::string last_error;

fh_status status_of(flexhull::ErrorCode code) {
  using flexhull::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return FH_ERR_INVALID_ARGUMENT;
    case ErrorCode::config: return FH_ERR_CONFIG;
    case ErrorCode::solver: return FH_ERR_SOLVER;
    case ErrorCode::discrete_domain: return FH_ERR_DISCRETE_DOMAIN;
    case ErrorCode::beta_outside_domain: return FH_ERR_BETA_OUTSIDE_DOMAIN;
    case ErrorCode::degree_mismatch: return FH_ERR_DEGREE_MISMATCH;
    case ErrorCode::prototype_mismatch: return FH_ERR_PROTOTYPE_MISMATCH;
    case ErrorCode::io: return FH_ERR_IO;
  }
  return FH_ERR_INTERNAL;
}

fh_status fail(fh_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
fh_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return FH_OK;
  } catch (const flexhull::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FH_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FH_ERR_INTERNAL, e.what());
  }
}

bool null_arg(const void* p, const char* name) {
  if (p) return false;
  last_error = std::string(name) + " is null";
  return true;
}

flexhull::DegreeConfig degree_config(const fh_fit_options* o) {
  flexhull::DegreeConfig c;
  if (!o) return c;
  c.certificate_degree = o->certificate_degree;
  c.max_basis_degree = o->max_basis_degree;
  c.seed = o->seed;
  return c;
}

flexhull::InnerFitParams inner_params(const fh_fit_options* o) {
  flexhull::InnerFitParams p;
  if (!o) return p;
  p.bisection_tol = o->bisection_tol;
  p.epsilon_step = o->epsilon_step;
  p.max_outer_iters = o->max_outer_iters;
  p.binding_slack = o->binding_slack;
  if (o->has_beta_init) p.beta_init = flexhull::Point(o->beta_init[0], o->beta_init[1]);
  return p;
}

flexhull::Homothet to_homothet(const fh_prototype* proto, const fh_homothet& h) {
  return flexhull::Homothet{proto->value, h.alpha, flexhull::Point(h.beta[0], h.beta[1])};
}

fh_homothet from_homothet(const flexhull::Homothet& h) { return fh_homothet{h.alpha, {h.beta.x(), h.beta.y()}}; }

fh_status new_domain(fh_domain** out, const std::function<flexhull::FlexDomain()>& make) {
  if (null_arg(out, "out")) return FH_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] { *out = new fh_domain{make()}; });
}

}  // namespace

extern "C" {

const char* fh_last_error(void) { return last_error.c_str(); }

const char* fh_status_name(fh_status status) {
  switch (status) {
    case FH_OK: return "ok";
    case FH_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case FH_ERR_CONFIG: return "config";
    case FH_ERR_SOLVER: return "solver";
    case FH_ERR_DISCRETE_DOMAIN: return "discrete_domain";
    case FH_ERR_BETA_OUTSIDE_DOMAIN: return "beta_outside_domain";
    case FH_ERR_DEGREE_MISMATCH: return "degree_mismatch";
    case FH_ERR_PROTOTYPE_MISMATCH: return "prototype_mismatch";
    case FH_ERR_IO: return "io";
    case FH_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* fh_version(void) { return "0.1.0"; }

void fh_fit_options_default(fh_fit_options* opts) {
  if (!opts) return;
  const flexhull::DegreeConfig dc;
  const flexhull::InnerFitParams ip;
  *opts = fh_fit_options{dc.certificate_degree, dc.max_basis_degree, ip.bisection_tol, ip.epsilon_step,
                         ip.max_outer_iters, ip.binding_slack, dc.seed, 0, {0.0, 0.0}};
}

fh_status fh_domain_battery(double p_max, double s, fh_domain** out) {
  return new_domain(out, [&] { return flexhull::make_battery(p_max, s); });
}

fh_status fh_domain_pv(double p_max, double s, fh_domain** out) {
  return new_domain(out, [&] { return flexhull::make_pv(p_max, s); });
}

fh_status fh_domain_wind(double p_max, double p0, double q0, double s1, double s2, double rotor_coupling,
                         fh_domain** out) {
  return new_domain(out, [&] { return flexhull::make_wind({p_max, p0, q0, s1, s2, rotor_coupling}); });
}

fh_status fh_domain_ac(double p_max, double gamma, fh_domain** out) {
  return new_domain(out, [&] { return flexhull::make_ac(p_max, gamma); });
}

fh_status fh_domain_from_json(const char* json, fh_domain** out) {
  if (null_arg(json, "json")) return FH_ERR_INVALID_ARGUMENT;
  return new_domain(out, [&] {
    flexhull::io::Json j;
    try {
      j = flexhull::io::Json::parse(json);
    } catch (const flexhull::io::Json::parse_error& e) {
      throw flexhull::Error(flexhull::ErrorCode::config, std::string("invalid JSON: ") + e.what());
    }
    return flexhull::io::der_from_json(j);
  });
}

void fh_domain_free(fh_domain* d) { delete d; }

fh_status fh_domain_contains(const fh_domain* d, double p, double q, double tol, int* out) {
  if (null_arg(d, "domain") || null_arg(out, "out")) return FH_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = d->value.contains(flexhull::Point(p, q), tol) ? 1 : 0; });
}

fh_status fh_domain_is_discrete(const fh_domain* d, int* out) {
  if (null_arg(d, "domain") || null_arg(out, "out")) return FH_ERR_INVALID_ARGUMENT;
  *out = d->value.is_discrete() ? 1 : 0;
  return FH_OK;
}

fh_status fh_domain_bounding_box(const fh_domain* d, double box[4]) {
  if (null_arg(d, "domain") || null_arg(box, "box")) return FH_ERR_INVALID_ARGUMENT;
  const auto& b = d->value.bounding_box();
  box[0] = b.p_min;
  box[1] = b.p_max;
  box[2] = b.q_min;
  box[3] = b.q_max;
  return FH_OK;
}

fh_status fh_prototype_regular(int n_edges, double rotation, fh_prototype** out) {
  if (null_arg(out, "out")) return FH_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] { *out = new fh_prototype{flexhull::regular_prototype(n_edges, rotation)}; });
}

fh_status fh_prototype_custom(const double* normals, const double* offsets, size_t n, fh_prototype** out) {
  if (null_arg(normals, "normals") || null_arg(offsets, "offsets") || null_arg(out, "out"))
    return FH_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    flexhull::EdgeMatrix a(static_cast<Eigen::Index>(n), 2);
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; ++i) {
      a(static_cast<Eigen::Index>(i), 0) = normals[2 * i];
      a(static_cast<Eigen::Index>(i), 1) = normals[2 * i + 1];
      b[static_cast<Eigen::Index>(i)] = offsets[i];
    }
    *out = new fh_prototype{flexhull::custom_prototype(std::move(a), std::move(b))};
  });
}

void fh_prototype_free(fh_prototype* proto) { delete proto; }

fh_status fh_prototype_edge_count(const fh_prototype* proto, size_t* out) {
  if (null_arg(proto, "prototype") || null_arg(out, "out")) return FH_ERR_INVALID_ARGUMENT;
  *out = static_cast<size_t>(proto->value->edge_count());
  return FH_OK;
}

fh_status fh_prototype_vertices(const fh_prototype* proto, double* vertices, size_t capacity) {
  if (null_arg(proto, "prototype") || null_arg(vertices, "vertices")) return FH_ERR_INVALID_ARGUMENT;
  const auto& v = proto->value->vertices();
  if (capacity < 2 * v.size()) return fail(FH_ERR_INVALID_ARGUMENT, "vertex buffer too small");
  for (size_t k = 0; k < v.size(); ++k) {
    vertices[2 * k] = v[k].x();
    vertices[2 * k + 1] = v[k].y();
  }
  return FH_OK;
}

fh_status fh_fit_outer(const fh_domain* d, const fh_prototype* proto, const fh_fit_options* opts, fh_homothet* out) {
  if (null_arg(d, "domain") || null_arg(proto, "prototype") || null_arg(out, "out")) return FH_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = from_homothet(flexhull::fit_outer(d->value, proto->value, degree_config(opts))); });
}

fh_status fh_check_inner(const fh_domain* d, const fh_prototype* proto, const fh_homothet* h,
                         const fh_fit_options* opts, int* certified) {
  if (null_arg(d, "domain") || null_arg(proto, "prototype") || null_arg(h, "homothet") ||
      null_arg(certified, "certified"))
    return FH_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *certified = flexhull::check_inner(d->value, proto->value, h->alpha, flexhull::Point(h->beta[0], h->beta[1]),
                                       degree_config(opts))
                     ? 1
                     : 0;
  });
}

fh_status fh_fit_inner(const fh_domain* d, const fh_prototype* proto, const fh_fit_options* opts, fh_report** out) {
  if (null_arg(d, "domain") || null_arg(proto, "prototype") || null_arg(out, "out")) return FH_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    *out = new fh_report{flexhull::fit_inner(d->value, proto->value, inner_params(opts), degree_config(opts))};
  });
}

void fh_report_free(fh_report* r) { delete r; }

fh_status fh_report_homothet(const fh_report* r, fh_homothet* out) {
  if (null_arg(r, "report") || null_arg(out, "out")) return FH_ERR_INVALID_ARGUMENT;
  *out = from_homothet(r->value.homothet);
  return FH_OK;
}

fh_status fh_report_iterations(const fh_report* r, int* out) {
  if (null_arg(r, "report") || null_arg(out, "out")) return FH_ERR_INVALID_ARGUMENT;
  *out = r->value.iterations;
  return FH_OK;
}

fh_status fh_report_monotonic(const fh_report* r, int* out) {
  if (null_arg(r, "report") || null_arg(out, "out")) return FH_ERR_INVALID_ARGUMENT;
  *out = r->value.monotonic ? 1 : 0;
  return FH_OK;
}

fh_status fh_report_alpha_trace(const fh_report* r, double* values, size_t capacity, size_t* count) {
  if (null_arg(r, "report") || null_arg(count, "count")) return FH_ERR_INVALID_ARGUMENT;
  const auto& t = r->value.alpha_trace;
  *count = t.size();
  if (values) std::copy_n(t.begin(), std::min(capacity, t.size()), values);
  return FH_OK;
}

fh_status fh_report_binding_edges(const fh_report* r, int* edges, size_t capacity, size_t* count) {
  if (null_arg(r, "report") || null_arg(count, "count")) return FH_ERR_INVALID_ARGUMENT;
  const auto& e = r->value.binding_edges_final;
  *count = e.size();
  if (edges) std::copy_n(e.begin(), std::min(capacity, e.size()), edges);
  return FH_OK;
}

fh_status fh_aggregate(const fh_homothet* hs, size_t n, fh_homothet* out) {
  if (null_arg(hs, "homothets") || null_arg(out, "out")) return FH_ERR_INVALID_ARGUMENT;
  if (n == 0) return fail(FH_ERR_INVALID_ARGUMENT, "aggregate of an empty list");
  fh_homothet sum{0.0, {0.0, 0.0}};
  for (size_t i = 0; i < n; ++i) {
    sum.alpha += hs[i].alpha;
    sum.beta[0] += hs[i].beta[0];
    sum.beta[1] += hs[i].beta[1];
  }
  *out = sum;
  return FH_OK;
}

fh_status fh_distance_metric(const fh_prototype* proto, const fh_homothet* outer, const fh_homothet* inner,
                             double* out) {
  if (null_arg(proto, "prototype") || null_arg(outer, "outer") || null_arg(inner, "inner") || null_arg(out, "out"))
    return FH_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = flexhull::distance_metric(to_homothet(proto, *outer), to_homothet(proto, *inner)); });
}

fh_status fh_area_metric(const fh_prototype* proto, const fh_homothet* outer, const fh_homothet* inner, double* out) {
  if (null_arg(proto, "prototype") || null_arg(outer, "outer") || null_arg(inner, "inner") || null_arg(out, "out"))
    return FH_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = flexhull::area_metric(to_homothet(proto, *outer), to_homothet(proto, *inner)); });
}

int fh_run(const fh_run_options* opts) {
  if (!opts || !opts->command || !opts->config_path) {
    last_error = "command and config_path are required";
    return 1;
  }
  try {
    flexhull::CommandOptions c;
    c.command = opts->command;
    c.config_path = opts->config_path;
    if (opts->out_dir) c.out_dir = std::string(opts->out_dir);
    c.jobs = opts->jobs;
    if (opts->has_seed) c.seed = opts->seed;
    c.der_index = opts->der_index;
    return flexhull::run_command(c);
  } catch (const std::exception& e) {
    last_error = e.what();
    return 2;
  }
}

}  // extern "C"
