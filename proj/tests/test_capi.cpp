#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "flexhull/flexhull.h"

namespace {

struct Handles {
  fh_domain* d = nullptr;
  fh_prototype* proto = nullptr;
  ~Handles() {
    fh_domain_free(d);
    fh_prototype_free(proto);
  }
};

}  // namespace

TEST(CApi, VersionAndNames) {
  EXPECT_STREQ(fh_version(), "0.1.0");
  EXPECT_STREQ(fh_status_name(FH_OK), "ok");
  EXPECT_STREQ(fh_status_name(FH_ERR_DISCRETE_DOMAIN), "discrete_domain");
}

TEST(CApi, DomainLifecycle) {
  Handles h;
  ASSERT_EQ(fh_domain_battery(1.0, 2.0, &h.d), FH_OK);
  int inside = 0;
  ASSERT_EQ(fh_domain_contains(h.d, 0.5, 0.5, 0.0, &inside), FH_OK);
  EXPECT_EQ(inside, 1);
  ASSERT_EQ(fh_domain_contains(h.d, 1.5, 0.0, 0.0, &inside), FH_OK);
  EXPECT_EQ(inside, 0);
  double box[4];
  ASSERT_EQ(fh_domain_bounding_box(h.d, box), FH_OK);
  EXPECT_NEAR(box[0], -1.0, 1e-12);
  EXPECT_NEAR(box[1], 1.0, 1e-12);
  EXPECT_NEAR(box[3], 2.0, 1e-12);
  EXPECT_EQ(std::string(fh_last_error()), "");
}

TEST(CApi, ErrorCodesAndMessages) {
  fh_domain* d = nullptr;
  EXPECT_EQ(fh_domain_battery(1.0, 0.5, &d), FH_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(d, nullptr);
  EXPECT_NE(std::string(fh_last_error()).find("s > p_max"), std::string::npos);
  EXPECT_EQ(fh_domain_battery(1.0, 2.0, nullptr), FH_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(fh_domain_from_json("{\"type\":\"battery\",\"params\":{\"p_max\":1}}", &d), FH_ERR_CONFIG);
  EXPECT_NE(std::string(fh_last_error()).find("'s'"), std::string::npos) << fh_last_error();
  EXPECT_EQ(fh_domain_from_json("not json", &d), FH_ERR_CONFIG);
  EXPECT_EQ(fh_prototype_regular(2, 0.0, nullptr), FH_ERR_INVALID_ARGUMENT);
}

TEST(CApi, PrototypeVertices) {
  Handles h;
  ASSERT_EQ(fh_prototype_regular(4, 0.0, &h.proto), FH_OK);
  size_t n = 0;
  ASSERT_EQ(fh_prototype_edge_count(h.proto, &n), FH_OK);
  ASSERT_EQ(n, 4u);
  std::vector<double> v(8);
  ASSERT_EQ(fh_prototype_vertices(h.proto, v.data(), v.size()), FH_OK);
  EXPECT_NEAR(v[0], 1.0, 1e-12);
  EXPECT_NEAR(v[1], 1.0, 1e-12);
  EXPECT_EQ(fh_prototype_vertices(h.proto, v.data(), 3), FH_ERR_INVALID_ARGUMENT);

  fh_prototype* custom = nullptr;
  const double normals[] = {1, 0, 0, 1, -1, -1};
  const double offsets[] = {1, 1, 1};
  ASSERT_EQ(fh_prototype_custom(normals, offsets, 3, &custom), FH_OK);
  fh_prototype_free(custom);
}

TEST(CApi, FitsOnDisk) {
  Handles h;
  ASSERT_EQ(fh_domain_battery(0.999, 1.0, &h.d), FH_OK);
  ASSERT_EQ(fh_prototype_regular(4, 0.0, &h.proto), FH_OK);
  fh_fit_options opts;
  fh_fit_options_default(&opts);

  fh_homothet outer;
  ASSERT_EQ(fh_fit_outer(h.d, h.proto, &opts, &outer), FH_OK) << fh_last_error();
  EXPECT_NEAR(outer.alpha, 1.0, 1e-2);

  const fh_homothet small{0.5, {0.0, 0.0}};
  int certified = 0;
  ASSERT_EQ(fh_check_inner(h.d, h.proto, &small, &opts, &certified), FH_OK);
  EXPECT_EQ(certified, 1);

  opts.has_beta_init = 1;
  opts.beta_init[0] = opts.beta_init[1] = 0.0;
  fh_report* r = nullptr;
  ASSERT_EQ(fh_fit_inner(h.d, h.proto, &opts, &r), FH_OK) << fh_last_error();
  fh_homothet inner;
  ASSERT_EQ(fh_report_homothet(r, &inner), FH_OK);
  EXPECT_NEAR(inner.alpha, 1.0 / std::sqrt(2.0), 1e-2);
  int iters = 0, mono = 0;
  ASSERT_EQ(fh_report_iterations(r, &iters), FH_OK);
  ASSERT_EQ(fh_report_monotonic(r, &mono), FH_OK);
  EXPECT_EQ(mono, 1);
  size_t count = 0;
  ASSERT_EQ(fh_report_alpha_trace(r, nullptr, 0, &count), FH_OK);
  EXPECT_EQ(count, static_cast<size_t>(iters));
  std::vector<int> edges(4);
  ASSERT_EQ(fh_report_binding_edges(r, edges.data(), edges.size(), &count), FH_OK);
  fh_report_free(r);

  double pi_a = 0.0, pi_d = 0.0;
  ASSERT_EQ(fh_area_metric(h.proto, &outer, &inner, &pi_a), FH_OK);
  ASSERT_EQ(fh_distance_metric(h.proto, &outer, &inner, &pi_d), FH_OK);
  EXPECT_NEAR(pi_a, 0.5, 0.02);
  EXPECT_NEAR(pi_d, std::sqrt(2.0) - 1.0, 0.015);
  EXPECT_EQ(fh_area_metric(h.proto, &inner, &outer, &pi_a), FH_ERR_INVALID_ARGUMENT);
}

TEST(CApi, DiscreteInnerRefused) {
  Handles h;
  ASSERT_EQ(fh_domain_ac(1.0, 0.5, &h.d), FH_OK);
  ASSERT_EQ(fh_prototype_regular(3, 0.0, &h.proto), FH_OK);
  int discrete = 0;
  ASSERT_EQ(fh_domain_is_discrete(h.d, &discrete), FH_OK);
  EXPECT_EQ(discrete, 1);
  fh_report* r = nullptr;
  EXPECT_EQ(fh_fit_inner(h.d, h.proto, nullptr, &r), FH_ERR_DISCRETE_DOMAIN);
  EXPECT_EQ(r, nullptr);
  fh_homothet outer;
  EXPECT_EQ(fh_fit_outer(h.d, h.proto, nullptr, &outer), FH_OK) << fh_last_error();
}

TEST(CApi, Aggregate) {
  const fh_homothet hs[] = {{0.5, {1, -1}}, {1.5, {-1, 2}}, {1.0, {0, 0}}};
  fh_homothet sum;
  ASSERT_EQ(fh_aggregate(hs, 3, &sum), FH_OK);
  EXPECT_EQ(sum.alpha, 3.0);
  EXPECT_EQ(sum.beta[0], 0.0);
  EXPECT_EQ(sum.beta[1], 1.0);
  EXPECT_EQ(fh_aggregate(hs, 0, &sum), FH_ERR_INVALID_ARGUMENT);
}

TEST(CApi, RunRejectsMissingConfig) {
  fh_run_options opts{};
  opts.command = "aggregate";
  opts.config_path = "/nonexistent/config.json";
  opts.jobs = 1;
  EXPECT_EQ(fh_run(&opts), 1);
  opts.command = "bogus";
  EXPECT_EQ(fh_run(&opts), 1);
}
