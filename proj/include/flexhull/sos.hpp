#pragma once

#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "flexhull/conic.hpp"
#include "flexhull/polynomial.hpp"

namespace flexhull {

/// Coefficient that is affine in scalar decision variables.
struct AffineCoeff {
  double constant = 0.0;
  std::vector<std::pair<VarId, double>> linear;

  double value(const SolveOutcome& sol) const;
};

/// Polynomial in (p, q) whose coefficients are affine in scalar decision
/// variables, e.g. a . (beta - x) + alpha * b.
class AffinePolynomial {
 public:
  using TermMap = std::map<Monomial, AffineCoeff, GradedLex>;

  AffinePolynomial() = default;
  AffinePolynomial(const Polynomial2& fixed) { add(fixed); }  // NOLINT(google-explicit-constructor)

  AffinePolynomial& add(const Polynomial2& fixed);
  /// Adds var * poly.
  AffinePolynomial& add(VarId var, const Polynomial2& poly);

  const TermMap& terms() const { return terms_; }
  int degree() const;
  /// The polynomial obtained by substituting solved scalar values.
  Polynomial2 substitute(const SolveOutcome& sol) const;

 private:
  TermMap terms_;
};

struct Multiplier {
  Polynomial2 g;
  /// Even degree of the SOS multiplier sigma attached to g.
  int sigma_degree = 0;
};

/// Record of one compiled certificate target - sum_j sigma_j g_j = z^T X z.
struct SosBlock {
  std::string label;
  AffinePolynomial target;
  std::vector<Polynomial2> multipliers;
  std::vector<VarId> sigma_grams;
  VarId residual_gram;
  int residual_basis_degree = 0;
};

/// Emits coefficient-matching rows for `target - sum_j sigma_j g_j` being SOS
/// over the monomial basis of degree `residual_basis_degree`. Adds one Gram
/// variable for the residual and one per multiplier. Rows are emitted in
/// graded-lex order of the monomials involved.
///
/// Throws Error(degree_mismatch) naming the monomial when the target or a
/// product sigma_j g_j has degree above 2 * residual_basis_degree, and
/// Error(invalid_argument) for odd sigma degrees.
SosBlock sos_constraint(ConicProgram& prog, const AffinePolynomial& target, const std::vector<Multiplier>& multipliers,
                        int residual_basis_degree, const std::string& label);

/// sum_r z_r(x)^2 over the degree-d basis; z^T (X + t I) z = z^T X z + t * this.
Polynomial2 basis_square_sum(int basis_degree);

struct CertificateAudit {
  std::string label;
  /// min over samples of target(x) - sum_j sigma_j(x) g_j(x).
  double min_residual = 0.0;
  /// Smallest eigenvalue over the residual and multiplier Gram blocks.
  double min_gram_eigenvalue = 0.0;
  /// Largest coefficient mismatch of the SOS identity after substitution.
  double identity_error = 0.0;
  bool passed = false;
};

/// Reconstructs sigma_j and the residual from solved Gram values and checks the
/// certificate at `samples` (region points, in the block's coordinates).
CertificateAudit audit_certificate(const SosBlock& block, const SolveOutcome& sol, const std::vector<Point>& samples,
                                   double residual_tol = 1e-6, double eig_tol = 1e-7);

/// Thread-safe sink for audits of every accepted certificate.
class CertificateLog {
 public:
  void record(CertificateAudit a);
  std::vector<CertificateAudit> entries() const;
  std::size_t size() const;
  std::size_t failures() const;

 private:
  mutable std::mutex mu_;
  std::vector<CertificateAudit> entries_;
};

}  // namespace flexhull
