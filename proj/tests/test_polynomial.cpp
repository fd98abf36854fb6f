#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "flexhull/io.hpp"
#include "flexhull/polynomial.hpp"

using namespace flexhull;

namespace {

Polynomial2 random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  std::bernoulli_distribution keep(0.6);
  Polynomial2 out;
  for (const auto& m : basis(max_degree).entries)
    if (keep(rng)) out += Polynomial2::monomial(m.p, m.q, c(rng));
  return out;
}

Point random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  return Point(u(rng), u(rng));
}

}  // namespace

TEST(Polynomial, AddCancelsToZero) {
  const auto sum = poly_add(Polynomial2::monomial(2, 0), Polynomial2::monomial(2, 0, -1.0));
  EXPECT_TRUE(sum.is_zero());
  EXPECT_EQ(sum.degree(), -1);
  EXPECT_TRUE(sum.terms().empty());
}

TEST(Polynomial, AddMergesLikeTerms) {
  const auto sum = poly_add(Polynomial2::p() + Polynomial2::q(), Polynomial2::p());
  EXPECT_EQ(sum, Polynomial2({{1, 0, 2.0}, {0, 1, 1.0}}));
}

TEST(Polynomial, DiskConstraintPlusSquare) {
  const Polynomial2 g = Polynomial2::constant(4.0) - Polynomial2::monomial(2, 0) - Polynomial2::monomial(0, 2);
  const auto sum = poly_add(g, Polynomial2::monomial(2, 0));
  EXPECT_EQ(sum, Polynomial2({{0, 0, 4.0}, {0, 2, -1.0}}));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 5; ++k) {
    const Point x = random_point(rng);
    EXPECT_NEAR(sum.evaluate(x), 4.0 - x.y() * x.y(), 1e-12);
  }
}

TEST(Polynomial, Products) {
  EXPECT_EQ(poly_mul(Polynomial2::p(), Polynomial2::q()), Polynomial2::monomial(1, 1));
  const auto s = Polynomial2::p() + Polynomial2::q();
  EXPECT_EQ(poly_mul(s, s), Polynomial2({{2, 0, 1.0}, {1, 1, 2.0}, {0, 2, 1.0}}));
  const auto a = Polynomial2::constant(1.0) - Polynomial2::monomial(2, 0);
  const auto b = Polynomial2::constant(1.0) - Polynomial2::monomial(0, 2);
  const auto prod = poly_mul(a, b);
  EXPECT_EQ(prod, Polynomial2({{0, 0, 1.0}, {2, 0, -1.0}, {0, 2, -1.0}, {2, 2, 1.0}}));
  EXPECT_EQ(prod.degree(), a.degree() + b.degree());
}

TEST(Polynomial, Evaluate) {
  EXPECT_EQ(evaluate(Polynomial2(), Point(3, -7)), 0.0);
  EXPECT_EQ(evaluate(Polynomial2({{2, 0, 1.0}, {0, 2, 1.0}}), Point(3, 4)), 25.0);
  EXPECT_EQ(evaluate(Polynomial2({{0, 0, 25.0}, {2, 0, -1.0}, {0, 2, -1.0}}), Point(3, 4)), 0.0);
}

TEST(Polynomial, ZeroCoefficientsAreNeverStored) {
  const Polynomial2 p({{1, 0, 0.0}, {0, 1, 1.0}});
  EXPECT_EQ(p.terms().size(), 1u);
  Polynomial2 q = Polynomial2::q();
  q *= 0.0;
  EXPECT_TRUE(q.is_zero());
}

TEST(Polynomial, RingAxioms) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_poly(rng, 6), b = random_poly(rng, 6), c = random_poly(rng, 6);
    const auto l = (a + b) + c, r = a + (b + c);
    const auto diff = l - r;
    EXPECT_TRUE(diff.is_zero() || diff.max_abs_coeff() < 1e-12);
    const auto dist = a * (b + c) - (a * b + a * c);
    EXPECT_TRUE(dist.is_zero() || dist.max_abs_coeff() < 1e-10);
  }
}

TEST(Polynomial, ProductEvaluatesMultiplicatively) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_poly(rng, 3), b = random_poly(rng, 3);
    const Point x = random_point(rng);
    const double expect = a.evaluate(x) * b.evaluate(x);
    EXPECT_NEAR(poly_mul(a, b).evaluate(x), expect, 1e-9 * std::max(1.0, std::abs(expect)));
  }
}

TEST(Polynomial, AffineSubstitute) {
  const Polynomial2 g({{0, 0, 4.0}, {2, 0, -1.0}, {1, 1, 0.5}});
  const Point c(0.3, -1.2);
  const auto h = g.affine_substitute(c, 2.5);
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    const Point y = random_point(rng);
    EXPECT_NEAR(h.evaluate(y), g.evaluate(c + 2.5 * y), 1e-10);
  }
}

TEST(MonomialBasis, GradedLexOrder) {
  EXPECT_EQ(basis(0).entries, (std::vector<Monomial>{{0, 0}}));
  EXPECT_EQ(basis(1).entries, (std::vector<Monomial>{{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(basis(2).entries, (std::vector<Monomial>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}));
  for (int d = 0; d <= 6; ++d) EXPECT_EQ(basis(d).size(), static_cast<std::size_t>((d + 1) * (d + 2) / 2));
}

TEST(GramExpand, DegreeOnePositions) {
  const auto e = gram_expand(basis(1));
  EXPECT_EQ(e.at({0, 0}), (std::vector<GramPosition>{{0, 0}}));
  EXPECT_EQ(e.at({1, 1}), (std::vector<GramPosition>{{1, 2}}));
  EXPECT_EQ(e.at({2, 0}), (std::vector<GramPosition>{{1, 1}}));
}

TEST(GramExpand, RoundTripsRandomPsdMatrices) {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int d = 1; d <= 3; ++d) {
    const auto b = basis(d);
    const int size = static_cast<int>(b.size());
    Eigen::MatrixXd f(size, size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) f(i, j) = n(rng);
    const Eigen::MatrixXd gram = f * f.transpose();

    Polynomial2 rebuilt;
    for (const auto& [m, pos] : gram_expand(b))
      for (const auto& g : pos) rebuilt += Polynomial2::monomial(m.p, m.q, (g.row == g.col ? 1.0 : 2.0) * gram(g.row, g.col));
    for (int k = 0; k < 100; ++k) {
      const Point x = random_point(rng);
      const Eigen::VectorXd z = b.evaluate(x);
      const double direct = z.dot(gram * z);
      EXPECT_NEAR(rebuilt.evaluate(x), direct, 1e-9 * std::max(1.0, std::abs(direct)));
      EXPECT_NEAR(gram_polynomial(b, gram).evaluate(x), direct, 1e-9 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST(PolynomialJson, RoundTripInGradedLexOrder) {
  const Polynomial2 g({{0, 2, -1.0}, {0, 0, 4.0}, {2, 0, -1.0}, {1, 1, 0.25}});
  const auto j = io::polynomial_to_json(g);
  EXPECT_EQ(j.dump(), R"({"terms":[[0,0,4.0],[2,0,-1.0],[1,1,0.25],[0,2,-1.0]]})");
  EXPECT_EQ(io::polynomial_from_json(j), g);
}

TEST(PolynomialJson, MalformedTermNamesLocation) {
  const auto j = io::Json::parse(R"({"terms":[[0,0,1.0],[1,"x",2.0]]})");
  try {
    io::polynomial_from_json(j, "g");
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("g.terms[1]"), std::string::npos);
  }
}
