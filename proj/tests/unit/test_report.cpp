#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "ppedcrf/report.hpp"

namespace ppedcrf {
namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  return split(text, '\n');
}

TEST(Format, Metrics) {
  EXPECT_EQ(format_metric(0.12345), "0.1235");
  EXPECT_EQ(format_metric(30.0), "30.0000");
  EXPECT_EQ(format_metric(-0.00001), "0.0000");
  EXPECT_EQ(format_metric(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_metric(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_metric(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(Format, ParametersRoundTrip) {
  EXPECT_EQ(format_parameter(8.0), "8");
  EXPECT_EQ(format_parameter(0.3), "0.3");
  EXPECT_EQ(std::stod(format_parameter(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(ResultsCsv, HeaderAndRows) {
  BenchmarkSpec spec;
  ResultRow row;
  row.mechanism = "ppedcrf";
  row.embedder = "tilemean";
  row.gallery_size = 24;
  row.sigma0 = 8.0;
  row.seed = "avg";
  row.top1 = {0.5, 0.25};
  row.psnr_db = {std::numeric_limits<double>::infinity(), 0.0};
  row.delta_vs_raw = -0.5;
  const std::vector<ResultRow> rows{row};

  const auto with = lines(results_csv(rows, spec, true));
  ASSERT_EQ(with.size(), 2u);
  const auto header = split(with[0]);
  const auto cells = split(with[1]);
  ASSERT_EQ(header.size(), cells.size());
  EXPECT_EQ(header[0], "schema_version");
  EXPECT_EQ(cells[0], std::string(kCsvSchemaVersion));
  std::map<std::string, std::string> by_name;
  for (std::size_t i = 0; i < header.size(); ++i) by_name[header[i]] = cells[i];
  EXPECT_EQ(by_name["mechanism"], "ppedcrf");
  EXPECT_EQ(by_name["sigma0"], "8");
  EXPECT_EQ(by_name["seed"], "avg");
  EXPECT_EQ(by_name["top1"], "0.5000");
  EXPECT_EQ(by_name["top1_std"], "0.2500");
  EXPECT_EQ(by_name["psnr_db"], "inf");
  EXPECT_EQ(by_name["delta_vs_raw"], "-0.5000");
  EXPECT_EQ(by_name["lambda_tau"], "0.3");
  EXPECT_EQ(by_name["dcrf_iterations"], "5");
  EXPECT_EQ(by_name["smooth_kernel"], "9");
  EXPECT_EQ(by_name["unary_gain"], "6");
  EXPECT_EQ(by_name["unary_bias"], "-3");
  EXPECT_EQ(by_name["eps_div"], "1e-06");
  EXPECT_EQ(by_name["mask_threshold"], "0.5");
  EXPECT_EQ(by_name["seeds"], "1234;1235;1236");
  EXPECT_EQ(by_name["width"], "320");
  EXPECT_EQ(by_name["height"], "192");

  const auto without = split(lines(results_csv(rows, spec, false))[0]);
  EXPECT_EQ(without.size() + 8, header.size());
  EXPECT_EQ(std::count(without.begin(), without.end(), "top1_std"), 0);
}

TEST(FrontierAndSweepCsv, Columns) {
  BenchmarkSpec spec;
  const std::vector<FrontierRow> f{{"global_gaussian", "gradhist", 48, 16.0, {0.1, 0.0}, {24.0, 0.1}, {0.5, 0.0}}};
  const auto fl = lines(frontier_csv(f, spec));
  ASSERT_EQ(fl.size(), 2u);
  EXPECT_EQ(split(fl[0]).size(), split(fl[1]).size());
  EXPECT_EQ(split(fl[1])[4], "16");
  const std::vector<SweepRow> s{{"mask_blur", 9, "tilemean", 48, 1.0, 31.5, 0.9}};
  const auto sl = lines(sweep_csv(s, spec));
  ASSERT_EQ(sl.size(), 2u);
  EXPECT_EQ(split(sl[0])[2], "parameter");
  EXPECT_EQ(split(sl[1])[2], "9");
  EXPECT_EQ(split(sl[0]).size(), split(sl[1]).size());
}

TEST(Json, HardnessAndSpec) {
  HardnessReport r;
  r.mean_pair_similarity = 0.99;
  const auto j = to_json(r);
  EXPECT_TRUE(j["mean_distractor_max_similarity"].is_null());
  r.hardest_distractor_similarity = 0.5;
  EXPECT_EQ(to_json(r)["hardest_distractor_similarity"].get<double>(), 0.5);

  const auto spec = to_json(BenchmarkSpec{});
  EXPECT_EQ(spec["noise"]["dcrf"]["iterations"].get<int>(), 5);
  EXPECT_EQ(spec["noise"]["blur"]["kernel"].get<int>(), 9);
  EXPECT_EQ(spec["gallery_sizes"].size(), 3u);
  EXPECT_EQ(spec["ssim"]["window"].get<int>(), 11);

  MatchedPoint m;
  m.target_psnr_db = std::numeric_limits<double>::infinity();
  EXPECT_EQ(to_json(m)["target_psnr_db"].get<std::string>(), "inf");
}

TEST(WriteTextFile, CreatesParents) {
  testing::TempDir dir("report");
  const auto path = dir.path() / "a" / "b" / "out.csv";
  write_text_file(path, "x,y\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(content, "x,y\n");
}

}  // namespace
}  // namespace ppedcrf
