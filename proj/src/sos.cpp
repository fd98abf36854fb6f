#include "flexhull/sos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "flexhull/errors.hpp"

namespace flexhull {

namespace {

std::string monomial_name(const Monomial& m) {
  return "p^" + std::to_string(m.p) + "*q^" + std::to_string(m.q);
}

Monomial operator+(const Monomial& a, const Monomial& b) { return Monomial{a.p + b.p, a.q + b.q}; }

}  // namespace

double AffineCoeff::value(const SolveOutcome& sol) const {
  double v = constant;
  for (const auto& [id, c] : linear) v += c * sol.scalar(id);
  return v;
}

AffinePolynomial& AffinePolynomial::add(const Polynomial2& fixed) {
  for (const auto& [m, c] : fixed.terms()) terms_[m].constant += c;
  return *this;
}

AffinePolynomial& AffinePolynomial::add(VarId var, const Polynomial2& poly) {
  for (const auto& [m, c] : poly.terms()) terms_[m].linear.emplace_back(var, c);
  return *this;
}

int AffinePolynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_)
    if (c.constant != 0.0 || !c.linear.empty()) d = std::max(d, m.degree());
  return d;
}

Polynomial2 AffinePolynomial::substitute(const SolveOutcome& sol) const {
  Polynomial2 out;
  for (const auto& [m, c] : terms_) out += Polynomial2::monomial(m.p, m.q, c.value(sol));
  return out;
}

SosBlock sos_constraint(ConicProgram& prog, const AffinePolynomial& target, const std::vector<Multiplier>& multipliers,
                        int residual_basis_degree, const std::string& label) {
  if (residual_basis_degree < 0) throw Error(ErrorCode::invalid_argument, label + ": negative basis degree");
  const int capacity = 2 * residual_basis_degree;
  for (const auto& [m, c] : target.terms()) {
    if (m.degree() > capacity && (c.constant != 0.0 || !c.linear.empty()))
      throw Error(ErrorCode::degree_mismatch, label + ": target monomial " + monomial_name(m) +
                                                  " exceeds residual basis capacity " + std::to_string(capacity));
  }
  for (const auto& mu : multipliers) {
    if (mu.sigma_degree < 0 || mu.sigma_degree % 2 != 0)
      throw Error(ErrorCode::invalid_argument, label + ": multiplier degree must be even and >= 0");
    if (mu.g.degree() + mu.sigma_degree > capacity) {
      const Monomial top{mu.g.degree() + mu.sigma_degree, 0};
      throw Error(ErrorCode::degree_mismatch, label + ": multiplier product monomial " + monomial_name(top) +
                                                  " exceeds residual basis capacity " + std::to_string(capacity));
    }
  }

  SosBlock block;
  block.label = label;
  block.target = target;
  block.residual_basis_degree = residual_basis_degree;
  block.residual_gram = prog.add_gram(residual_basis_degree, label + ".residual");

  std::map<Monomial, EqualityRow, GradedLex> rows;
  const auto residual_basis = basis(residual_basis_degree);
  for (const auto& [m, pos] : gram_expand(residual_basis)) {
    auto& row = rows[m];
    for (const auto& g : pos)
      row.terms.push_back({block.residual_gram, g.row, g.col, g.row == g.col ? 1.0 : 2.0});
  }

  for (std::size_t j = 0; j < multipliers.size(); ++j) {
    const auto& mu = multipliers[j];
    const int half = mu.sigma_degree / 2;
    const VarId sigma = prog.add_gram(half, label + ".sigma" + std::to_string(j));
    block.sigma_grams.push_back(sigma);
    block.multipliers.push_back(mu.g);
    for (const auto& [m, pos] : gram_expand(basis(half))) {
      for (const auto& [gm, gc] : mu.g.terms()) {
        auto& row = rows[m + gm];
        for (const auto& g : pos) row.terms.push_back({sigma, g.row, g.col, (g.row == g.col ? 1.0 : 2.0) * gc});
      }
    }
  }

  // residual + sum sigma_j g_j - linear part of target = constant part of target
  for (const auto& [m, c] : target.terms()) {
    auto& row = rows[m];
    for (const auto& [id, coef] : c.linear) row.terms.push_back({id, 0, 0, -coef});
    row.rhs += c.constant;
  }
  for (auto& [m, row] : rows) prog.add_equality(std::move(row));
  return block;
}

Polynomial2 basis_square_sum(int basis_degree) {
  Polynomial2 out;
  for (const auto& m : basis(basis_degree).entries) out += Polynomial2::monomial(2 * m.p, 2 * m.q);
  return out;
}

CertificateAudit audit_certificate(const SosBlock& block, const SolveOutcome& sol, const std::vector<Point>& samples,
                                   double residual_tol, double eig_tol) {
  CertificateAudit a;
  a.label = block.label;
  if (!sol.has_values()) return a;

  auto min_eig = [](const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };

  const Polynomial2 f = block.target.substitute(sol);
  Polynomial2 lhs = f;
  a.min_gram_eigenvalue = min_eig(sol.matrix(block.residual_gram));
  for (std::size_t j = 0; j < block.sigma_grams.size(); ++j) {
    const Eigen::MatrixXd& s = sol.matrix(block.sigma_grams[j]);
    const int half = static_cast<int>(std::lround((std::sqrt(8.0 * s.rows() + 1.0) - 3.0) / 2.0));
    lhs -= gram_polynomial(basis(half), s) * block.multipliers[j];
    a.min_gram_eigenvalue = std::min(a.min_gram_eigenvalue, min_eig(s));
  }
  const Polynomial2 residual = gram_polynomial(basis(block.residual_basis_degree), sol.matrix(block.residual_gram));
  const Polynomial2 mismatch = lhs - residual;
  a.identity_error = mismatch.is_zero() ? 0.0 : mismatch.max_abs_coeff();

  a.min_residual = std::numeric_limits<double>::infinity();
  for (const auto& x : samples) a.min_residual = std::min(a.min_residual, lhs.evaluate(x));
  if (samples.empty()) a.min_residual = 0.0;
  a.passed = a.min_residual >= -residual_tol && a.min_gram_eigenvalue >= -eig_tol;
  return a;
}

void CertificateLog::record(CertificateAudit a) {
  std::lock_guard lock(mu_);
  entries_.push_back(std::move(a));
}

std::vector<CertificateAudit> CertificateLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t CertificateLog::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::size_t CertificateLog::failures() const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const CertificateAudit& a) { return !a.passed; }));
}

}  // namespace flexhull
