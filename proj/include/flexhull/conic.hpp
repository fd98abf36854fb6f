#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace flexhull {

struct VarId {
  int index = -1;
  bool valid() const { return index >= 0; }
  friend bool operator==(const VarId&, const VarId&) = default;
};

enum class VarKind { free_scalar, nonneg_scalar, psd_matrix };

struct DecisionVar {
  VarId id;
  VarKind kind = VarKind::free_scalar;
  /// Matrix dimension; 1 for scalars.
  int size = 1;
  /// Monomial basis degree for Gram matrices, -1 otherwise.
  int basis_degree = -1;
  std::string name;
};

/// coeff * var for scalars, coeff * X[row][col] (row <= col) for matrices.
struct LinearTerm {
  VarId var;
  int row = 0;
  int col = 0;
  double coeff = 0.0;
};

struct EqualityRow {
  std::vector<LinearTerm> terms;
  double rhs = 0.0;
};

/// minimize c^T x over scalar variables subject to linear equalities,
/// scalar nonnegativity and positive semidefiniteness of matrix variables.
class ConicProgram {
 public:
  VarId add_free(std::string name);
  VarId add_nonneg(std::string name);
  VarId add_psd(int size, std::string name, int basis_degree = -1);
  /// Gram matrix over the degree-d monomial basis, size (d+1)(d+2)/2.
  VarId add_gram(int basis_degree, std::string name);

  /// Throws Error(invalid_argument) if a term references an undeclared
  /// variable or an out-of-range matrix entry.
  void add_equality(EqualityRow row);
  /// Objective over scalar variables only.
  void set_objective(std::vector<std::pair<VarId, double>> terms);

  const std::vector<DecisionVar>& variables() const { return vars_; }
  const DecisionVar& variable(VarId id) const { return vars_.at(static_cast<std::size_t>(id.index)); }
  const std::vector<EqualityRow>& equalities() const { return rows_; }
  const std::vector<std::pair<VarId, double>>& objective() const { return objective_; }

 private:
  VarId add(VarKind kind, int size, int basis_degree, std::string name);

  std::vector<DecisionVar> vars_;
  std::vector<EqualityRow> rows_;
  std::vector<std::pair<VarId, double>> objective_;
};

enum class SolveStatus { optimal, infeasible, inaccurate, failed };

const char* to_string(SolveStatus s);

struct SolveOutcome {
  SolveStatus status = SolveStatus::failed;
  /// Indexed by VarId; scalars are stored as 1x1 matrices. Empty unless
  /// status is optimal or inaccurate.
  std::vector<Eigen::MatrixXd> values;
  double objective_value = 0.0;
  int iterations = 0;
  std::string message;

  bool has_values() const { return status == SolveStatus::optimal || status == SolveStatus::inaccurate; }
  double scalar(VarId id) const { return values.at(static_cast<std::size_t>(id.index))(0, 0); }
  const Eigen::MatrixXd& matrix(VarId id) const { return values.at(static_cast<std::size_t>(id.index)); }
};

struct FeasibilityReport {
  double max_equality_residual = 0.0;
  double min_psd_eigenvalue = 0.0;
  double min_nonneg_value = 0.0;
  bool ok = false;
};

/// Substitutes a candidate solution: every equality within eq_tol, every PSD
/// block with minimum eigenvalue >= -eig_tol, nonneg scalars >= -eig_tol.
FeasibilityReport check_solution(const ConicProgram& prog, const SolveOutcome& sol, double eq_tol = 1e-6,
                                 double eig_tol = 1e-7);

/// Solver contract. Implementations must be safe to call concurrently on
/// independent programs.
class ConicSolver {
 public:
  virtual ~ConicSolver() = default;
  virtual SolveOutcome solve(const ConicProgram& prog) const = 0;
};

struct InteriorPointSettings {
  double tolerance = 1e-9;
  int max_iterations = 120;
  /// Defaults to FLEXHULL_SOLVER_VERBOSE=1 in the environment.
  bool verbose = false;
};

InteriorPointSettings default_interior_point_settings();

/// Infeasible-start primal-dual path-following method (HKM direction,
/// Mehrotra predictor-corrector) for small dense block-diagonal programs.
class InteriorPointSolver final : public ConicSolver {
 public:
  InteriorPointSolver() : settings_(default_interior_point_settings()) {}
  explicit InteriorPointSolver(InteriorPointSettings s) : settings_(s) {}
  SolveOutcome solve(const ConicProgram& prog) const override;

 private:
  InteriorPointSettings settings_;
};

/// Process-wide default solver.
const ConicSolver& default_solver();

SolveOutcome solve(const ConicProgram& prog);

}  // namespace flexhull
