#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexhull/aggregate.hpp"
#include "flexhull/fit.hpp"
#include "flexhull/io.hpp"

namespace flexhull {

struct FitSettings {
  /// Certificate degree; 0 picks the automatic degree.
  int degree = 0;
  double bisection_tol = 1e-3;
  double epsilon_step = 0.1;
  int max_outer_iters = 50;
  std::uint64_t seed = 0x5eedf1e7ULL;
};

struct FleetConfig {
  std::vector<FlexDomain> ders;
  /// DER entries as written in the config, echoed into reports.
  std::vector<io::Json> der_entries;
  PrototypePtr prototype;
  FitSettings fit;
  std::string outputs = "out";
  bool partial_inner = false;
};

/// Throws Error(config) naming the first missing or invalid field.
FleetConfig parse_config(const io::Json& j);
FleetConfig load_config(const std::string& path);

struct DerOutcome {
  Homothet outer;
  std::optional<FitReport> inner;
  /// Why there is no inner homothet, e.g. a discrete domain.
  std::string inner_refused;
};

struct FleetRun {
  std::vector<DerOutcome> ders;
  FleetApprox approx;
};

/// Fits every DER on up to `jobs` threads, then aggregates. Results are
/// ordered by DER index and independent of `jobs`. Throws FleetError when
/// any fit fails.
FleetRun run_fleet(const FleetConfig& cfg, int jobs = 1, CertificateLog* audit = nullptr);

/// Fits of a subset of DERs (no aggregation).
std::vector<DerOutcome> fit_ders(const FleetConfig& cfg, const std::vector<std::size_t>& indices, int jobs,
                                 CertificateLog* audit = nullptr);

class FleetError : public std::runtime_error {
 public:
  struct Failure {
    std::size_t index;
    std::string message;
  };
  explicit FleetError(std::vector<Failure> failures);
  const std::vector<Failure>& failures() const { return failures_; }

 private:
  std::vector<Failure> failures_;
};

io::Json der_report(const FleetConfig& cfg, std::size_t index, const DerOutcome& outcome);

struct CommandOptions {
  std::string command;
  std::string config_path;
  std::optional<std::string> out_dir;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  /// DER fitted by the "fit" command.
  std::size_t der_index = 0;
};

/// Runs fit | aggregate | oracle | emit-plots. Returns 0 on success, 1 on
/// configuration or usage errors, 2 on solver failures. Diagnostics go to
/// stderr.
int run_command(const CommandOptions& opts);

}  // namespace flexhull
