#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ricci/ricci.h"

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(CApi, ModelChainAccessors) {
  const char* keys[] = {"a", "b"};
  const double values[] = {0.25, 0.25};
  ricci_chain* chain = nullptr;
  ASSERT_EQ(ricci_chain_from_model("two-state", keys, values, 2, &chain), RICCI_OK);
  EXPECT_EQ(ricci_chain_size(chain), 2U);
  double p[4];
  ASSERT_EQ(ricci_chain_transition(chain, p, 4), RICCI_OK);
  EXPECT_DOUBLE_EQ(p[1], 0.25);
  double pi[2];
  ASSERT_EQ(ricci_chain_stationary(chain, pi, 2), RICCI_OK);
  EXPECT_NEAR(pi[0], 0.5, 1e-15);
  int rev = 0;
  ASSERT_EQ(ricci_chain_reversible(chain, &rev), RICCI_OK);
  EXPECT_EQ(rev, 1);
  double kappa[4];
  ASSERT_EQ(ricci_curvature_profile(chain, 3, kappa, 4), RICCI_OK);
  EXPECT_NEAR(kappa[3], 0.875, 1e-15);
  EXPECT_EQ(ricci_curvature_profile(chain, 3, kappa, 3), RICCI_INVALID_ARGUMENT);
  const double mu[] = {1.0, 0.0};
  const double nu[] = {0.25, 0.75};
  double w = 0.0;
  ASSERT_EQ(ricci_w1(chain, mu, nu, 2, &w), RICCI_OK);
  EXPECT_NEAR(w, 0.75, 1e-15);
  ricci_chain_free(chain);
}

TEST(CApi, ErrorsCarryCodesAndMessages) {
  ricci_chain* chain = nullptr;
  EXPECT_EQ(ricci_chain_from_model("nope", nullptr, nullptr, 0, &chain), RICCI_INVALID_ARGUMENT);
  EXPECT_EQ(chain, nullptr);
  EXPECT_GT(std::strlen(ricci_last_error()), 0U);
  EXPECT_EQ(ricci_chain_from_json_string(R"({"distance": [[0,1],[1,0]], "transition": [[1,0],[0.3,0.6]]})", &chain),
            RICCI_INVALID_CHAIN);
  EXPECT_NE(std::string(ricci_last_error()).find("row 1"), std::string::npos);
  EXPECT_EQ(ricci_chain_from_json_string("{not json", &chain), RICCI_INVALID_CHAIN);
  EXPECT_EQ(ricci_chain_from_json_file("/nonexistent.json", &chain), RICCI_IO);
  EXPECT_STREQ(ricci_status_string(RICCI_TOO_LARGE), "TooLarge");
  EXPECT_EQ(ricci_chain_from_model("two-state", nullptr, nullptr, 0, nullptr), RICCI_INVALID_ARGUMENT);
}

TEST(CApi, AnalyzeWritesReportFiles) {
  ricci_chain* chain = nullptr;
  ASSERT_EQ(ricci_chain_from_model("split-merge", nullptr, nullptr, 0, &chain), RICCI_OK);
  const auto dir = scratch("ricci_capi_analyze");
  ricci_report* report = nullptr;
  ASSERT_EQ(ricci_analyze(chain, R"({"K": 20, "certify": true})", dir.c_str(), &report), RICCI_OK)
      << ricci_last_error();
  EXPECT_EQ(ricci_report_passed(report), 1);
  for (const char* f : {"profile.csv", "geometry.csv", "bounds.json", "verdicts.csv", "verdicts.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_NE(slurp(dir / "verdicts.csv").find("split_merge_kappa1,lower,0.08,"), std::string::npos);
  EXPECT_NE(std::string(ricci_report_json(report)).find("\"certification\""), std::string::npos);
  ricci_report_free(report);
  EXPECT_EQ(ricci_analyze(chain, R"({"K": 20, "bogus": 1})", nullptr, &report), RICCI_INVALID_ARGUMENT);
  EXPECT_EQ(ricci_analyze(chain, R"({"K": "x"})", nullptr, &report), RICCI_INVALID_ARGUMENT);
  ricci_chain_free(chain);
  std::filesystem::remove_all(dir);
}

TEST(CApi, JsonChainAnalyzes) {
  ricci_chain* chain = nullptr;
  ASSERT_EQ(ricci_chain_from_json_string(
                R"({"labels": ["a","b","c"], "distance": [[0,1,2],[1,0,1],[2,1,0]],
                    "transition": [[0.5,0.5,0],[0.25,0.5,0.25],[0,0.5,0.5]]})",
                &chain),
            RICCI_OK);
  ricci_report* report = nullptr;
  ASSERT_EQ(ricci_analyze(chain, R"({"K": 12, "certify": true})", nullptr, &report), RICCI_OK) << ricci_last_error();
  EXPECT_EQ(ricci_report_passed(report), 1) << ricci_report_json(report);
  ricci_report_free(report);
  ricci_chain_free(chain);
}

TEST(CApi, McmcIsByteIdenticalAcrossWorkers) {
  const char* keys[] = {"N"};
  const double values[] = {5};
  ricci_chain* chain = nullptr;
  ASSERT_EQ(ricci_chain_from_model("curie-weiss", keys, values, 1, &chain), RICCI_OK);
  const auto a = scratch("ricci_capi_mcmc_a");
  const auto b = scratch("ricci_capi_mcmc_b");
  ricci_report* ra = nullptr;
  ricci_report* rb = nullptr;
  ASSERT_EQ(ricci_mcmc(chain, R"({"steps": 100, "replicas": 3000, "q": "state:0", "t0": 5, "workers": 1})",
                       a.c_str(), &ra),
            RICCI_OK)
      << ricci_last_error();
  ASSERT_EQ(ricci_mcmc(chain, R"({"steps": 100, "replicas": 3000, "q": "state:0", "t0": 5, "workers": 3})",
                       b.c_str(), &rb),
            RICCI_OK);
  for (const char* f : {"mcmc.json", "tail.csv", "verdicts.csv"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  EXPECT_STREQ(ricci_report_json(ra), ricci_report_json(rb));
  EXPECT_EQ(ricci_report_passed(ra), 1);
  ricci_report_free(ra);
  ricci_report_free(rb);
  ricci_report* bad = nullptr;
  EXPECT_EQ(ricci_mcmc(chain, R"({"q": "state:99"})", nullptr, &bad), RICCI_INVALID_ARGUMENT);
  ricci_chain_free(chain);
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(CApi, CubeFigureDefaults) {
  const auto dir = scratch("ricci_capi_cube");
  ricci_report* report = nullptr;
  ASSERT_EQ(ricci_cube_figure(nullptr, dir.c_str(), &report), RICCI_OK);
  const std::string panel = slurp(dir / "panel1_k1.csv");
  EXPECT_EQ(panel.substr(0, panel.find('\n', panel.find('\n') + 1)), "j,kappa_tilde\n100,-0.098");
  EXPECT_TRUE(std::filesystem::exists(dir / "panel2_k100.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "panel3_k500.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "panel4_min.csv"));
  ricci_report_free(report);
  std::filesystem::remove_all(dir);
}

TEST(CApi, ModelList) {
  ricci_report* report = nullptr;
  ASSERT_EQ(ricci_model_list("csv", &report), RICCI_OK);
  EXPECT_EQ(std::string(ricci_report_json(report)).rfind("model,param,default,help\n", 0), 0U);
  ricci_report_free(report);
  EXPECT_EQ(ricci_model_list("xml", &report), RICCI_INVALID_ARGUMENT);
}
