#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "flexhull/errors.hpp"
#include "flexhull/io.hpp"
#include "flexhull/prototype.hpp"

using namespace flexhull;

namespace {

void expect_point(const Point& a, const Point& b, double tol = 1e-12) {
  EXPECT_NEAR(a.x(), b.x(), tol);
  EXPECT_NEAR(a.y(), b.y(), tol);
}

}  // namespace

TEST(RegularPrototype, UnitSquare) {
  const auto sq = regular_prototype(4);
  EdgeMatrix a(4, 2);
  a << 1, 0, -1, 0, 0, 1, 0, -1;
  EXPECT_EQ(sq->normals(), a);
  EXPECT_EQ(sq->offsets(), Eigen::VectorXd::Ones(4));
}

TEST(RegularPrototype, Circumradius) {
  const auto hex = regular_prototype(6);
  for (const auto& v : hex->vertices()) EXPECT_NEAR(v.norm(), 2.0 / std::sqrt(3.0), 1e-12);
  const auto tri = regular_prototype(3);
  EXPECT_EQ(tri->vertices().size(), 3u);
  for (const auto& v : tri->vertices()) EXPECT_NEAR(v.norm(), 2.0, 1e-12);
}

TEST(RegularPrototype, AreaMatchesApothemFormula) {
  for (int n = 3; n <= 12; ++n)
    EXPECT_NEAR(regular_prototype(n, 0.3)->area(), n * std::tan(std::numbers::pi / n), 1e-9) << n;
}

TEST(RegularPrototype, RejectsFewerThanThreeEdges) { EXPECT_THROW(regular_prototype(2), Error); }

TEST(CustomPrototype, Validation) {
  EdgeMatrix a(3, 2);
  a << 1, 0, 0, 1, -1, -1;
  EXPECT_NO_THROW(custom_prototype(a, Eigen::Vector3d(1, 1, 1)));
  EXPECT_THROW(custom_prototype(a, Eigen::Vector3d(1, -1, 1)), Error);
  EdgeMatrix open(3, 2);
  open << 1, 0, 0, 1, 1, 1;
  EXPECT_THROW(custom_prototype(open, Eigen::Vector3d(1, 1, 1)), Error);
  const auto p = custom_prototype((EdgeMatrix(3, 2) << 2, 0, 0, 3, -1, -1).finished(), Eigen::Vector3d(2, 3, 1));
  EXPECT_NEAR(p->normal(0).norm(), 1.0, 1e-15);
  EXPECT_NEAR(p->offset(1), 1.0, 1e-15);
}

TEST(Homothet, Halfspaces) {
  const auto sq = regular_prototype(4);
  EXPECT_EQ(homothet_halfspaces({sq, 1.0, Point::Zero()}).rhs, Eigen::VectorXd::Ones(4));
  EXPECT_EQ(homothet_halfspaces({sq, 2.0, Point(1, 0)}).rhs, Eigen::Vector4d(3, 1, 2, 2));
  const auto hex = regular_prototype(6, 0.1);
  EXPECT_TRUE(homothet_halfspaces({hex, 1.0, Point::Zero()}).rhs.isApprox(hex->offsets()));
}

TEST(Homothet, VerticesKeepPrototypeOrder) {
  const auto sq = regular_prototype(4);
  const auto unit = homothet_vertices({sq, 1.0, Point::Zero()});
  expect_point(unit[0], Point(1, 1));
  expect_point(unit[1], Point(-1, 1));
  expect_point(unit[2], Point(-1, -1));
  expect_point(unit[3], Point(1, -1));
  const auto v = homothet_vertices({sq, 0.5, Point(2, 3)});
  expect_point(v[0], Point(2.5, 3.5));
  expect_point(v[1], Point(1.5, 3.5));
  expect_point(v[2], Point(1.5, 2.5));
  expect_point(v[3], Point(2.5, 2.5));
  for (const auto& x : homothet_vertices({regular_prototype(6), 2.0, Point::Zero()}))
    EXPECT_NEAR(x.norm(), 4.0 / std::sqrt(3.0), 1e-12);
}

TEST(Homothet, Contains) {
  const auto sq = regular_prototype(4);
  EXPECT_TRUE(homothet_contains({sq, 1.0, Point::Zero()}, Point::Zero()));
  EXPECT_FALSE(homothet_contains({sq, 1.0, Point::Zero()}, Point(1.0 + 1e-3, 0), 0.0));
  EXPECT_TRUE(homothet_contains({sq, 2.0, Point(1, 0)}, Point(3, 2)));
}

TEST(Homothet, RejectsNonPositiveAlpha) {
  EXPECT_THROW(homothet_vertices({regular_prototype(4), 0.0, Point::Zero()}), Error);
}

TEST(Homothet, VertexHalfspaceDuality) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3), a(0.1, 4);
  for (int n = 3; n <= 9; ++n) {
    const Homothet h{regular_prototype(n, u(rng)), a(rng), Point(u(rng), u(rng))};
    const auto hs = homothet_halfspaces(h);
    for (const auto& v : homothet_vertices(h)) {
      const Eigen::VectorXd slack = hs.rhs - hs.normals * v;
      int tight = 0;
      for (int i = 0; i < slack.size(); ++i) {
        if (std::abs(slack[i]) <= 1e-9) ++tight;
        else EXPECT_GT(slack[i], 0.0);
      }
      EXPECT_EQ(tight, 2);
    }
  }
}

TEST(Homothet, CompositionMatchesProduct) {
  // H[a1, b1; H[a2, b2; F0]] == H[a1 a2, a1 b2 + b1; F0]
  const auto hex = regular_prototype(6);
  const double a1 = 1.7, a2 = 0.6;
  const Point b1(0.4, -2.0), b2(-1.0, 0.3);
  const auto inner = homothet_vertices({hex, a2, b2});
  const auto direct = homothet_vertices({hex, a1 * a2, a1 * b2 + b1});
  for (std::size_t k = 0; k < inner.size(); ++k) expect_point(a1 * inner[k] + b1, direct[k], 1e-12);
}

TEST(Homothet, EdgeSamplesLieOnBoundary) {
  const Homothet h{regular_prototype(5), 1.3, Point(0.2, 0.1)};
  const auto pts = homothet_edge_samples(h, 20);
  EXPECT_EQ(pts.size(), 100u);
  for (const auto& x : pts) {
    EXPECT_TRUE(homothet_contains(h, x, 1e-12));
    EXPECT_FALSE(homothet_contains(h, h.beta + (x - h.beta) * (1.0 + 1e-6)));
  }
}

TEST(ConvexPolygon, ClipAndDistance) {
  ConvexPolygon sq{homothet_vertices({regular_prototype(4), 1.0, Point::Zero()})};
  EXPECT_NEAR(sq.area(), 4.0, 1e-12);
  const auto half = clip(sq, Point(1, 0), 0.0);
  EXPECT_NEAR(half.area(), 2.0, 1e-12);
  EXPECT_EQ(distance_to_polygon(sq.vertices, Point(0.5, 0.5)), 0.0);
  EXPECT_NEAR(distance_to_polygon(sq.vertices, Point(4, 5)), 5.0, 1e-12);
}

TEST(PrototypeJson, RegularAndCustom) {
  const auto hex = io::prototype_from_json(io::Json::parse(R"({"kind":"regular","n":6,"rotation":0.0})"));
  EXPECT_TRUE(hex->same_as(*regular_prototype(6)));
  const auto back = io::prototype_from_json(io::prototype_to_json(*hex));
  EXPECT_TRUE(back->same_as(*hex));
  const auto j = io::homothet_to_json({hex, 2.0, Point(1, -1)});
  EXPECT_EQ(j.at("alpha"), 2.0);
  EXPECT_EQ(j.at("beta"), io::Json::array({1.0, -1.0}));
  EXPECT_TRUE(j.contains("prototype"));
  try {
    io::prototype_from_json(io::Json::parse(R"({"kind":"regular"})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::config);
    EXPECT_NE(std::string(e.what()).find("'n'"), std::string::npos);
  }
}
