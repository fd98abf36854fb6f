#include "flexhull/runner.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "flexhull/errors.hpp"
#include "flexhull/oracle.hpp"

namespace flexhull {

namespace fs = std::filesystem;
using io::Json;

namespace {

constexpr std::size_t kBoundarySamples = 10000;
constexpr std::size_t kEdgeSamples = 1000;
constexpr std::size_t kSumSamples = 10000;
constexpr std::size_t kPlotBoundary = 400;
constexpr std::size_t kPlotSums = 2000;
constexpr double kContainTol = 1e-6;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::config, where + ": " + what);
}

void logging_to_stderr() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::get("flexhull");
    if (!logger) logger = spdlog::stderr_color_mt("flexhull");
    spdlog::set_default_logger(logger);
  });
}

std::string errors_joined(const std::vector<FleetError::Failure>& failures) {
  std::string out = "fit failed for";
  for (const auto& f : failures) out += " DER " + std::to_string(f.index) + " (" + f.message + ")";
  return out;
}

DerOutcome fit_one(const FleetConfig& cfg, std::size_t i, CertificateLog* audit) {
  const FlexDomain& d = cfg.ders[i];
  DegreeConfig dc;
  dc.certificate_degree = cfg.fit.degree;
  dc.seed = cfg.fit.seed;
  dc.audit = audit;
  DerOutcome out;
  out.outer = fit_outer(d, cfg.prototype, dc);
  InnerFitParams params;
  params.bisection_tol = cfg.fit.bisection_tol;
  params.epsilon_step = cfg.fit.epsilon_step;
  params.max_outer_iters = cfg.fit.max_outer_iters;
  try {
    out.inner = fit_inner(d, cfg.prototype, params, dc);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::discrete_domain) throw;
    out.inner_refused = e.what();
  }
  return out;
}

std::vector<Point> closed_loop(const Homothet& h) {
  auto v = homothet_vertices(h);
  v.push_back(v.front());
  return v;
}

std::vector<Point> domain_outline(const FlexDomain& d) {
  if (!d.is_discrete()) return sample_boundary(d, kPlotBoundary);
  std::vector<Point> pts;
  for (const auto& piece : d.pieces()) pts.push_back(*piece.point);
  return pts;
}

std::vector<const FlexDomain*> members(const FleetConfig& cfg) {
  std::vector<const FlexDomain*> out;
  for (const auto& d : cfg.ders) out.push_back(&d);
  return out;
}

void write_plots(const FleetConfig& cfg, const FleetRun& run, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < run.ders.size(); ++i) {
    const std::string stem = "der_" + std::to_string(i);
    io::write_text_file((dir / (stem + "_boundary.csv")).string(), io::points_csv(domain_outline(cfg.ders[i])));
    io::write_text_file((dir / (stem + "_outer.csv")).string(), io::points_csv(closed_loop(run.ders[i].outer)));
    if (run.ders[i].inner)
      io::write_text_file((dir / (stem + "_inner.csv")).string(),
                          io::points_csv(closed_loop(run.ders[i].inner->homothet)));
  }
  io::write_text_file((dir / "aggregate_outer.csv").string(), io::points_csv(closed_loop(run.approx.aggregate_outer)));
  if (run.approx.aggregate_inner)
    io::write_text_file((dir / "aggregate_inner.csv").string(),
                        io::points_csv(closed_loop(*run.approx.aggregate_inner)));
  io::write_text_file((dir / "aggregate_samples.csv").string(),
                      io::points_csv(oracle::minkowski_sample(members(cfg), kPlotSums, cfg.fit.seed)));
}

Json oracle_report(const FleetConfig& cfg, const FleetRun& run) {
  Json ders = Json::array();
  bool all = true;
  for (std::size_t i = 0; i < run.ders.size(); ++i) {
    const FlexDomain& d = cfg.ders[i];
    const DerOutcome& r = run.ders[i];
    const Homothet lp = oracle::outer_fit_lp(d, cfg.prototype);
    const double half = std::max(d.bounding_box().half_width(), 1e-12);
    const double alpha_rel = std::abs(r.outer.alpha - lp.alpha) / lp.alpha;
    const double beta_rel = (r.outer.beta - lp.beta).lpNorm<Eigen::Infinity>() / half;

    std::size_t outer_violations = 0;
    const auto boundary = d.is_discrete() ? domain_outline(d) : sample_boundary(d, kBoundarySamples);
    for (const auto& x : boundary) outer_violations += homothet_contains(r.outer, x, kContainTol) ? 0 : 1;

    Json entry{{"index", i},
               {"outer_alpha", r.outer.alpha},
               {"outer_alpha_lp", lp.alpha},
               {"outer_alpha_rel_error", alpha_rel},
               {"outer_beta_lp", Json::array({lp.beta.x(), lp.beta.y()})},
               {"outer_beta_rel_error", beta_rel},
               {"outer_violations", outer_violations}};
    bool ok = alpha_rel <= 0.01 && beta_rel <= 0.01 && outer_violations == 0;
    if (r.inner) {
      const Homothet& in = r.inner->homothet;
      std::size_t inner_violations = 0;
      for (const auto& v : homothet_vertices(in)) inner_violations += d.contains(v, kContainTol) ? 0 : 1;
      const int per_edge = static_cast<int>(kEdgeSamples / in.proto->vertices().size()) + 1;
      for (const auto& x : homothet_edge_samples(in, per_edge)) inner_violations += d.contains(x, kContainTol) ? 0 : 1;
      const Homothet grid = oracle::inner_fit_grid(d, cfg.prototype, 41, cfg.fit.bisection_tol);
      entry["inner_alpha"] = in.alpha;
      entry["inner_alpha_grid"] = grid.alpha;
      entry["inner_violations"] = inner_violations;
      ok = ok && inner_violations == 0 && grid.alpha <= r.outer.alpha * (1.0 + 1e-9);
    }
    entry["passed"] = ok;
    all = all && ok;
    ders.push_back(entry);
  }
  std::size_t sum_violations = 0;
  for (const auto& x : oracle::minkowski_sample(members(cfg), kSumSamples, cfg.fit.seed))
    sum_violations += homothet_contains(run.approx.aggregate_outer, x, kContainTol) ? 0 : 1;
  all = all && sum_violations == 0;
  return Json{{"ders", ders}, {"aggregate_outer_violations", sum_violations}, {"passed", all}};
}

}  // namespace

FleetError::FleetError(std::vector<Failure> failures)
    : std::runtime_error(errors_joined(failures)), failures_(std::move(failures)) {}

FleetConfig parse_config(const Json& j) {
  if (!j.is_object()) bad("config", "expected an object");
  FleetConfig cfg;
  const auto ders = j.find("ders");
  if (ders == j.end()) bad("config", "missing field 'ders'");
  if (!ders->is_array() || ders->empty()) bad("ders", "expected a nonempty array");
  for (std::size_t i = 0; i < ders->size(); ++i) {
    cfg.ders.push_back(io::der_from_json((*ders)[i], "ders[" + std::to_string(i) + "]"));
    cfg.der_entries.push_back((*ders)[i]);
  }
  const auto proto = j.find("prototype");
  if (proto == j.end()) bad("config", "missing field 'prototype'");
  cfg.prototype = io::prototype_from_json(*proto, "prototype");

  if (const auto fit = j.find("fit"); fit != j.end()) {
    if (!fit->is_object()) bad("fit", "expected an object");
    auto positive = [&](const char* key, double& out) {
      if (!fit->contains(key)) return;
      const Json& v = fit->at(key);
      if (!v.is_number() || !(v.get<double>() > 0.0)) bad(std::string("fit.") + key, "expected a positive number");
      out = v.get<double>();
    };
    auto integer = [&](const char* key, int& out, int min) {
      if (!fit->contains(key)) return;
      const Json& v = fit->at(key);
      if (!v.is_number_integer() || v.get<long long>() < min)
        bad(std::string("fit.") + key, "expected an integer >= " + std::to_string(min));
      out = v.get<int>();
    };
    positive("bisection_tol", cfg.fit.bisection_tol);
    positive("epsilon_step", cfg.fit.epsilon_step);
    integer("max_outer_iters", cfg.fit.max_outer_iters, 1);
    integer("degree", cfg.fit.degree, 0);
    if (cfg.fit.degree % 2 != 0) bad("fit.degree", "certificate degree must be even");
    if (fit->contains("seed")) {
      const Json& v = fit->at("seed");
      if (!v.is_number_unsigned()) bad("fit.seed", "expected a nonnegative integer");
      cfg.fit.seed = v.get<std::uint64_t>();
    }
  }
  if (const auto out = j.find("outputs"); out != j.end()) {
    if (!out->is_string()) bad("outputs", "expected a directory path");
    cfg.outputs = out->get<std::string>();
  }
  if (const auto partial = j.find("partial_inner"); partial != j.end()) {
    if (!partial->is_boolean()) bad("partial_inner", "expected a boolean");
    cfg.partial_inner = partial->get<bool>();
  }
  return cfg;
}

FleetConfig load_config(const std::string& path) { return parse_config(io::read_json_file(path)); }

std::vector<DerOutcome> fit_ders(const FleetConfig& cfg, const std::vector<std::size_t>& indices, int jobs,
                                 CertificateLog* audit) {
  std::vector<std::optional<DerOutcome>> results(indices.size());
  std::vector<FleetError::Failure> failures;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < indices.size(); k = next++) {
      try {
        results[k] = fit_one(cfg, indices[k], audit);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        failures.push_back({indices[k], e.what()});
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(indices.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    throw FleetError(std::move(failures));
  }
  std::vector<DerOutcome> out;
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

FleetRun run_fleet(const FleetConfig& cfg, int jobs, CertificateLog* audit) {
  std::vector<std::size_t> all(cfg.ders.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  FleetRun run;
  run.ders = fit_ders(cfg, all, jobs, audit);
  std::vector<DerApprox> per_der;
  for (const auto& r : run.ders) {
    DerApprox m{r.outer, std::nullopt};
    if (r.inner) m.inner = r.inner->homothet;
    per_der.push_back(m);
  }
  run.approx = make_fleet_approx(std::move(per_der), cfg.partial_inner);
  return run;
}

Json der_report(const FleetConfig& cfg, std::size_t index, const DerOutcome& outcome) {
  Json j{{"index", index}, {"der", cfg.der_entries.at(index)}, {"outer", io::homothet_to_json(outcome.outer)}};
  j["inner"] = outcome.inner ? io::fit_report_to_json(*outcome.inner) : Json(nullptr);
  if (!outcome.inner_refused.empty()) j["inner_refused"] = outcome.inner_refused;
  return j;
}

int run_command(const CommandOptions& opts) {
  logging_to_stderr();
  const std::string& cmd = opts.command;
  if (cmd != "fit" && cmd != "aggregate" && cmd != "oracle" && cmd != "emit-plots") {
    std::cerr << "error: unknown command '" << cmd << "'\n";
    return 1;
  }
  if (opts.jobs < 1) {
    std::cerr << "error: --jobs must be >= 1\n";
    return 1;
  }
  FleetConfig cfg;
  fs::path out;
  try {
    cfg = load_config(opts.config_path);
    if (opts.seed) cfg.fit.seed = *opts.seed;
    out = opts.out_dir ? fs::path(*opts.out_dir) : fs::path(cfg.outputs);
    if (cmd == "fit" && opts.der_index >= cfg.ders.size())
      bad("--der", "index " + std::to_string(opts.der_index) + " out of range for " +
                       std::to_string(cfg.ders.size()) + " DERs");
    fs::create_directories(out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (cmd == "fit") {
      const auto r = fit_ders(cfg, {opts.der_index}, 1);
      io::write_text_file((out / ("der_" + std::to_string(opts.der_index) + ".json")).string(),
                          io::dump(der_report(cfg, opts.der_index, r.front())));
      return 0;
    }
    const FleetRun run = run_fleet(cfg, opts.jobs);
    if (cmd == "aggregate") {
      for (std::size_t i = 0; i < run.ders.size(); ++i)
        io::write_text_file((out / ("der_" + std::to_string(i) + ".json")).string(),
                            io::dump(der_report(cfg, i, run.ders[i])));
      io::write_text_file((out / "aggregate.json").string(), io::dump(io::fleet_to_json(run.approx)));
      write_plots(cfg, run, out / "plots");
    } else if (cmd == "emit-plots") {
      write_plots(cfg, run, out / "plots");
    } else {
      io::write_text_file((out / "oracle.json").string(), io::dump(oracle_report(cfg, run)));
    }
    return 0;
  } catch (const FleetError& e) {
    for (const auto& f : e.failures()) std::cerr << "error: DER " << f.index << ": " << f.message << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::io || e.code() == ErrorCode::config ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace flexhull
