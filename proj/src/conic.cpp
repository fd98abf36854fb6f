#include "flexhull/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>

#include <Eigen/Eigenvalues>

#include "flexhull/errors.hpp"

namespace flexhull {

VarId ConicProgram::add(VarKind kind, int size, int basis_degree, std::string name) {
  VarId id{static_cast<int>(vars_.size())};
  vars_.push_back(DecisionVar{id, kind, size, basis_degree, std::move(name)});
  return id;
}

VarId ConicProgram::add_free(std::string name) { return add(VarKind::free_scalar, 1, -1, std::move(name)); }

VarId ConicProgram::add_nonneg(std::string name) { return add(VarKind::nonneg_scalar, 1, -1, std::move(name)); }

VarId ConicProgram::add_psd(int size, std::string name, int basis_degree) {
  if (size < 1) throw Error(ErrorCode::invalid_argument, "psd variable size must be >= 1");
  return add(VarKind::psd_matrix, size, basis_degree, std::move(name));
}

VarId ConicProgram::add_gram(int basis_degree, std::string name) {
  if (basis_degree < 0) throw Error(ErrorCode::invalid_argument, "gram basis degree must be >= 0");
  return add_psd((basis_degree + 1) * (basis_degree + 2) / 2, std::move(name), basis_degree);
}

void ConicProgram::add_equality(EqualityRow row) {
  for (const auto& t : row.terms) {
    if (t.var.index < 0 || t.var.index >= static_cast<int>(vars_.size()))
      throw Error(ErrorCode::invalid_argument, "equality references an undeclared variable");
    const auto& v = vars_[static_cast<std::size_t>(t.var.index)];
    if (t.row < 0 || t.col < t.row || t.col >= v.size)
      throw Error(ErrorCode::invalid_argument, "equality references an invalid entry of '" + v.name + "'");
  }
  rows_.push_back(std::move(row));
}

void ConicProgram::set_objective(std::vector<std::pair<VarId, double>> terms) {
  for (const auto& [id, c] : terms) {
    if (id.index < 0 || id.index >= static_cast<int>(vars_.size()))
      throw Error(ErrorCode::invalid_argument, "objective references an undeclared variable");
    if (vars_[static_cast<std::size_t>(id.index)].kind == VarKind::psd_matrix)
      throw Error(ErrorCode::invalid_argument, "objective must be over scalar variables");
  }
  objective_ = std::move(terms);
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::inaccurate: return "inaccurate";
    case SolveStatus::failed: return "failed";
  }
  return "unknown";
}

FeasibilityReport check_solution(const ConicProgram& prog, const SolveOutcome& sol, double eq_tol, double eig_tol) {
  FeasibilityReport rep;
  if (!sol.has_values() || sol.values.size() != prog.variables().size()) return rep;
  for (const auto& row : prog.equalities()) {
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coeff * sol.values[static_cast<std::size_t>(t.var.index)](t.row, t.col);
    rep.max_equality_residual = std::max(rep.max_equality_residual, std::abs(lhs - row.rhs));
  }
  rep.min_psd_eigenvalue = std::numeric_limits<double>::infinity();
  rep.min_nonneg_value = std::numeric_limits<double>::infinity();
  for (const auto& v : prog.variables()) {
    const auto& val = sol.values[static_cast<std::size_t>(v.id.index)];
    if (v.kind == VarKind::psd_matrix) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(val, Eigen::EigenvaluesOnly);
      rep.min_psd_eigenvalue = std::min(rep.min_psd_eigenvalue, es.eigenvalues().minCoeff());
    } else if (v.kind == VarKind::nonneg_scalar) {
      rep.min_nonneg_value = std::min(rep.min_nonneg_value, val(0, 0));
    }
  }
  rep.ok = rep.max_equality_residual <= eq_tol && rep.min_psd_eigenvalue >= -eig_tol &&
           rep.min_nonneg_value >= -eig_tol;
  return rep;
}

InteriorPointSettings default_interior_point_settings() {
  InteriorPointSettings s;
  const char* env = std::getenv("FLEXHULL_SOLVER_VERBOSE");
  s.verbose = env != nullptr && std::strcmp(env, "1") == 0;
  return s;
}

const ConicSolver& default_solver() {
  static const InteriorPointSolver solver;
  return solver;
}

SolveOutcome solve(const ConicProgram& prog) {
  return default_solver().solve(prog);
}

}  // namespace flexhull
