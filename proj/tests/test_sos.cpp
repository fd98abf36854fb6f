#include <cmath>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "flexhull/conic.hpp"
#include "flexhull/errors.hpp"
#include "flexhull/io.hpp"
#include "flexhull/sos.hpp"

using namespace flexhull;

namespace {

Polynomial2 unit_disk() { return Polynomial2({{0, 0, 1.0}, {2, 0, -1.0}, {0, 2, -1.0}}); }

std::vector<Point> disk_samples(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < n) {
    const Point x(u(rng), u(rng));
    if (x.squaredNorm() <= 1.0) out.push_back(x);
  }
  return out;
}

// min t s.t. t - p is nonnegative on the unit disk (answer 1).
struct DiskSupport {
  ConicProgram prog;
  VarId t;
  SosBlock block;

  DiskSupport() {
    t = prog.add_nonneg("t");
    AffinePolynomial target(-Polynomial2::p());
    target.add(t, Polynomial2::constant(1.0));
    block = sos_constraint(prog, target, {{unit_disk(), 0}}, 1, "support");
    prog.set_objective({{t, 1.0}});
  }
};

}  // namespace

TEST(SosConstraint, ConstantIsSos) {
  ConicProgram prog;
  const auto block = sos_constraint(prog, Polynomial2::constant(1.0), {}, 0, "one");
  ASSERT_EQ(prog.equalities().size(), 1u);
  EXPECT_EQ(prog.equalities()[0].rhs, 1.0);
  const auto sol = solve(prog);
  ASSERT_EQ(sol.status, SolveStatus::optimal) << sol.message;
  EXPECT_NEAR(sol.matrix(block.residual_gram)(0, 0), 1.0, 1e-7);
  EXPECT_TRUE(check_solution(prog, sol).ok);
}

TEST(SosConstraint, SumOfSquaresIsFeasible) {
  ConicProgram prog;
  const auto block = sos_constraint(prog, Polynomial2({{2, 0, 1.0}, {0, 2, 1.0}}), {}, 1, "pq");
  const auto sol = solve(prog);
  ASSERT_EQ(sol.status, SolveStatus::optimal) << sol.message;
  const Eigen::MatrixXd& x = sol.matrix(block.residual_gram);
  EXPECT_NEAR(x(0, 0), 0.0, 1e-6);
  EXPECT_NEAR(x(1, 1), 1.0, 1e-6);
  EXPECT_NEAR(x(2, 2), 1.0, 1e-6);
  EXPECT_TRUE(check_solution(prog, sol).ok);
}

TEST(SosConstraint, NegativePolynomialIsInfeasible) {
  ConicProgram prog;
  sos_constraint(prog, Polynomial2({{0, 0, -1.0}, {2, 0, -1.0}}), {}, 1, "neg");
  const auto sol = solve(prog);
  EXPECT_EQ(sol.status, SolveStatus::infeasible) << sol.message;
  EXPECT_FALSE(sol.has_values());
}

TEST(SosConstraint, DegreeMismatchNamesMonomial) {
  ConicProgram prog;
  try {
    sos_constraint(prog, Polynomial2::monomial(1, 2), {}, 1, "cubic");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degree_mismatch);
    EXPECT_NE(std::string(e.what()).find("p^1*q^2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(sos_constraint(prog, Polynomial2::constant(1.0), {{unit_disk(), 2}}, 1, "too-high"), Error);
  EXPECT_THROW(sos_constraint(prog, Polynomial2::constant(1.0), {{unit_disk(), 1}}, 2, "odd"), Error);
}

TEST(SosConstraint, CompilationIsDeterministic) {
  DiskSupport a, b;
  ASSERT_EQ(a.prog.equalities().size(), b.prog.equalities().size());
  EXPECT_EQ(io::program_to_json(a.prog), io::program_to_json(b.prog));
}

TEST(SosConstraint, CertificateOnDiskPassesAudit) {
  DiskSupport s;
  const auto sol = solve(s.prog);
  ASSERT_EQ(sol.status, SolveStatus::optimal) << sol.message;
  EXPECT_NEAR(sol.scalar(s.t), 1.0, 1e-6);
  const auto audit = audit_certificate(s.block, sol, disk_samples(1000, 1));
  EXPECT_TRUE(audit.passed);
  EXPECT_GE(audit.min_residual, -1e-6);
  EXPECT_GE(audit.min_gram_eigenvalue, -1e-7);
  EXPECT_LT(audit.identity_error, 1e-6);
}

TEST(SosConstraint, AuditCatchesForgedCertificate) {
  DiskSupport s;
  auto sol = solve(s.prog);
  ASSERT_TRUE(sol.has_values());
  sol.values[static_cast<std::size_t>(s.t.index)](0, 0) = 0.5;  // t = 0.5 < max p on the disk
  EXPECT_FALSE(audit_certificate(s.block, sol, disk_samples(1000, 2)).passed);
  EXPECT_FALSE(check_solution(s.prog, sol).ok);
}

TEST(Solve, LinearProgramWithSlack) {
  ConicProgram prog;
  const VarId alpha = prog.add_nonneg("alpha");
  const VarId slack = prog.add_nonneg("slack");
  prog.add_equality({{{alpha, 0, 0, 1.0}, {slack, 0, 0, -1.0}}, 3.0});
  prog.set_objective({{alpha, 1.0}});
  const auto sol = solve(prog);
  ASSERT_EQ(sol.status, SolveStatus::optimal) << sol.message;
  EXPECT_NEAR(sol.scalar(alpha), 3.0, 1e-7);
  EXPECT_NEAR(sol.objective_value, 3.0, 1e-7);
}

TEST(Solve, FreeVariables) {
  ConicProgram prog;
  const VarId x = prog.add_free("x");
  const VarId s = prog.add_nonneg("s");
  prog.add_equality({{{x, 0, 0, 1.0}, {s, 0, 0, -1.0}}, -2.0});  // x >= -2
  prog.set_objective({{x, 1.0}});
  const auto sol = solve(prog);
  ASSERT_EQ(sol.status, SolveStatus::optimal) << sol.message;
  EXPECT_NEAR(sol.scalar(x), -2.0, 1e-7);
}

TEST(Solve, RejectsUndeclaredVariables) {
  ConicProgram prog;
  EXPECT_THROW(prog.add_equality({{{VarId{3}, 0, 0, 1.0}}, 0.0}), Error);
  const VarId g = prog.add_gram(1, "g");
  EXPECT_THROW(prog.add_equality({{{g, 0, 3, 1.0}}, 0.0}), Error);
}

TEST(Solve, ConcurrentSolvesAgree) {
  std::vector<double> results(4, 0.0);
  std::vector<std::thread> threads;
  for (std::size_t k = 0; k < results.size(); ++k)
    threads.emplace_back([&results, k] {
      DiskSupport s;
      const auto sol = solve(s.prog);
      results[k] = sol.has_values() ? sol.scalar(s.t) : -1.0;
    });
  for (auto& t : threads) t.join();
  for (double r : results) EXPECT_EQ(r, results.front());
  EXPECT_NEAR(results.front(), 1.0, 1e-6);
}

TEST(ProgramJson, ListsVariablesRowsAndObjective) {
  DiskSupport s;
  const auto j = io::program_to_json(s.prog);
  EXPECT_EQ(j.at("variables").size(), s.prog.variables().size());
  EXPECT_EQ(j.at("equalities").size(), s.prog.equalities().size());
  EXPECT_EQ(j.at("objective"), io::Json::parse("[[0, 1.0]]"));
  EXPECT_EQ(j.at("variables")[0].at("kind"), "nonneg");
}
