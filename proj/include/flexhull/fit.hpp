#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flexhull/domain.hpp"
#include "flexhull/prototype.hpp"
#include "flexhull/sos.hpp"

namespace flexhull {

struct DegreeConfig {
  /// Even certificate degree D shared by the residual and every sigma_j g_j
  /// product. 0 selects even-ceil(max deg g) + 2.
  int certificate_degree = 0;
  /// Largest residual basis degree ever used (escalation stops here).
  int max_basis_degree = 6;
  /// Retry a rejected inner certificate at D + 2 when dense sampling says the
  /// homothet is contained.
  bool escalate = true;
  /// Strictness margin subtracted from outer certificate targets.
  double margin = 1e-6;
  /// Inner certificates prove g >= -inner_tolerance (g scaled to unit max
  /// coefficient in homothet coordinates). Pieces of a union share boundaries
  /// with their cells, where g = 0 exactly, so a strict margin is not usable.
  double inner_tolerance = 1e-7;
  /// When set, every accepted certificate is audited and recorded here.
  CertificateLog* audit = nullptr;
  int audit_samples = 1000;
  std::uint64_t seed = 0x5eedf1e7ULL;
};

struct InnerFitParams {
  /// Absolute tolerance on alpha, in domain units.
  double bisection_tol = 1e-3;
  int max_outer_iters = 50;
  /// Initial translation step as a fraction of the current alpha.
  double epsilon_step = 0.1;
  /// Edge push delta, as a fraction of alpha, for binding-edge detection.
  double binding_slack = 1e-3;
  /// Defaults to default_beta_init(d).
  std::optional<Point> beta_init;
};

struct FitReport {
  Homothet homothet;
  int iterations = 0;
  std::vector<double> alpha_trace;
  std::vector<int> binding_edges_final;
  bool monotonic = true;
};

/// Tightest homothet of `proto` containing every piece of d. Works for
/// discrete domains. Ties in beta are broken by minimal |beta|_1.
Homothet fit_outer(const FlexDomain& d, const PrototypePtr& proto, const DegreeConfig& cfg = {});

/// True iff a certificate proves alpha * F0 + beta inside d. False may be a
/// relaxation artifact. Throws Error(discrete_domain) for discrete domains.
bool check_inner(const FlexDomain& d, const PrototypePtr& proto, double alpha, const Point& beta,
                 const DegreeConfig& cfg = {});

/// Largest certified alpha at fixed beta, bracketed by [1e-3 * half-width,
/// alpha_upper]; alpha_upper defaults to the outer fit. Throws
/// Error(beta_outside_domain) when the seed is not certified.
double max_alpha_bisection(const FlexDomain& d, const PrototypePtr& proto, const Point& beta,
                           const InnerFitParams& params, const DegreeConfig& cfg = {},
                           std::optional<double> alpha_upper = std::nullopt);

/// Edges whose outward displacement by slack * alpha + extra_push breaks
/// containment in d, judged by dense sampling of the displaced edge.
std::vector<int> detect_binding_edges(const FlexDomain& d, const PrototypePtr& proto, double alpha, const Point& beta,
                                      double slack, double extra_push = 0.0);

/// Alternates alpha bisection with translating beta along the inward sum of
/// binding-edge normals.
FitReport fit_inner(const FlexDomain& d, const PrototypePtr& proto, const InnerFitParams& params = {},
                    const DegreeConfig& cfg = {});

/// Centroid of uniform domain samples, or the sample nearest to it when the
/// centroid falls outside d.
Point default_beta_init(const FlexDomain& d, std::uint64_t seed = 0x5eedf1e7ULL);

/// Dense sampling test (vertices, edges, interior grid) of homothet in d.
bool sampled_inside(const FlexDomain& d, const Homothet& h, double tol = 0.0);

}  // namespace flexhull
