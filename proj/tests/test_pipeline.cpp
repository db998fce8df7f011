#include "clifford/clifford.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace clifford;

TEST(Catalog, Enumeration) {
  const auto small = catalog_cases(15);
  auto has = [&](const std::string& id) {
    return std::any_of(small.begin(), small.end(), [&](const CaseSpec& c) { return c.id() == id; });
  };
  EXPECT_TRUE(has("SU(1,1)"));
  EXPECT_TRUE(has("SU(2,2)"));
  EXPECT_TRUE(has("SU(1,2)"));
  EXPECT_FALSE(has("SU(2,3)"));
  for (const auto& c : small) EXPECT_LE(c.algebra_dim(), 15);

  const auto full = catalog_cases(35);
  EXPECT_EQ(full.size(), 17u);
  EXPECT_THROW(catalog_cases(2), Error);
}

TEST(RunCase, Su22) {
  const CaseReport r = run_case(su_case(2, 2));
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(r.rank, 2);
  EXPECT_EQ(r.so_root_count, 2);
  EXPECT_TRUE(r.lattice_rectangular);
  EXPECT_TRUE(r.passed());
  for (const auto& v : {r.residuals.jacobi, r.residuals.tripotent, r.residuals.lemma7, r.residuals.symmetry,
                        r.residuals.sl2, r.residuals.commutation, r.residuals.cartan, r.residuals.roots,
                        r.residuals.strong_orth}) {
    ASSERT_TRUE(v);
    EXPECT_LE(*v, 1e-8);
  }
}

TEST(RunCase, Su11AndSo6) {
  const CaseReport s = run_case(su_case(1, 1));
  EXPECT_EQ(s.rank, 1);
  EXPECT_EQ(s.circles, 1);
  EXPECT_EQ(s.so_root_count, 1);
  const CaseReport o = run_case(so_case(6));
  EXPECT_EQ(o.rank, 2);
  EXPECT_EQ(o.so_root_count, 2);
  EXPECT_TRUE(o.passed());
}

TEST(RunCase, FailureIsRecordedNotThrown) {
  // E12 - E21 inside su(3) has eigenvalue differences 2i: not a tripotent.
  CaseSpec broken = su_case(1, 2);
  broken.recipe = XiRecipe::RotationGenerator;
  const CaseReport r = run_case(broken);
  EXPECT_FALSE(r.passed());
  ASSERT_FALSE(r.failures.empty());
  EXPECT_NE(r.failures[0].find("NotTripotent"), std::string::npos);
  EXPECT_FALSE(r.rank);
  EXPECT_TRUE(r.residuals.jacobi);
  EXPECT_TRUE(to_json(r)["rank"].is_null());
}

TEST(Report, JsonSchema) {
  CaseReport r = run_case(su_case(1, 2));
  const auto j = to_json(r, false);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> expected = {"case_id", "family", "params", "rank", "circles", "lattice_rectangular",
                                             "so_root_count", "noncompact_count", "compact_count", "residuals",
                                             "duration_ms", "passed"};
  EXPECT_EQ(keys, expected);
  std::vector<std::string> rkeys;
  for (auto it = j["residuals"].begin(); it != j["residuals"].end(); ++it) rkeys.push_back(it.key());
  EXPECT_EQ(rkeys, (std::vector<std::string>{"jacobi", "tripotent", "lemma7", "symmetry", "sl2", "commutation",
                                             "cartan", "roots", "strong_orth"}));
  EXPECT_TRUE(j["passed"]["thm2"].get<bool>());
  EXPECT_TRUE(j["passed"]["hc"].get<bool>());
  EXPECT_EQ(j["duration_ms"].get<double>(), 0.0);
  EXPECT_EQ(j["params"]["q"].get<int>(), 2);
}

TEST(Report, DeterministicJson) {
  const std::vector<CaseReport> a = {run_case(su_case(2, 3)), run_case(so_case(5))};
  const std::vector<CaseReport> b = {run_case(su_case(2, 3)), run_case(so_case(5))};
  EXPECT_EQ(render_json(a, false), render_json(b, false));
}

TEST(Report, TextAlignedAndErrors) {
  const std::vector<CaseReport> reps = {run_case(su_case(1, 1)), run_case(so_case(4))};
  std::istringstream text(render_text(reps, false));
  std::string header, l1, l2;
  std::getline(text, header);
  std::getline(text, l1);
  std::getline(text, l2);
  EXPECT_EQ(header.size(), l1.size());
  EXPECT_EQ(l1.size(), l2.size());
  EXPECT_THROW(render_json({}), Error);
  EXPECT_THROW(emit_report({}, ReportFormat::Text, "-"), Error);
  try {
    emit_report(reps, ReportFormat::Json, "/nonexistent-dir/x/report.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoFailure);
  }
  const auto path = std::filesystem::temp_directory_path() / "clifford_report_test.json";
  emit_report(reps, ReportFormat::Json, path.string(), false);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), render_json(reps, false));
  std::filesystem::remove(path);
}
