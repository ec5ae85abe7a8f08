#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "mantrap/io.hpp"

namespace mantrap {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("mantrap_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }
  [[nodiscard]] std::string sub(const std::string& name) const {
    fs::create_directories(dir_ / name);
    return path(name);
  }

  // Training set with the default class sizes and a logistic model fitted on it.
  std::string train_model() {
    const auto train = sub("train");
    EXPECT_EQ(run({"simulate", "--out", train}).code, cli::kOk);
    const auto model = path("model.json");
    const auto fit = run({"fit", "--data", train + "/dataset.csv", "--out", model});
    EXPECT_EQ(fit.code, cli::kOk) << fit.err;
    return model;
  }

  fs::path dir_;
};

TEST_F(Cli, SimulateWritesDefaultSizedDataset) {
  const auto r = run({"simulate", "--out", path("")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto csv = lines_of(read_text_file(path("dataset.csv")));
  ASSERT_EQ(csv.size(), 64u);
  EXPECT_EQ(csv[0], kMetricsHeader);
  EXPECT_EQ(lines_of(read_text_file(path("truth.jsonl"))).size(), 63u);
  EXPECT_TRUE(fs::file_size(path("stream.jsonl")) > 0);
}

TEST_F(Cli, SameSeedSameFiles) {
  const auto a = sub("a");
  const auto b = sub("b");
  ASSERT_EQ(run({"simulate", "--out", a, "--single", "4", "--double", "3", "--seed", "17"}).code, cli::kOk);
  ASSERT_EQ(run({"simulate", "--out", b, "--single", "4", "--double", "3", "--seed", "17"}).code, cli::kOk);
  for (const auto* name : {"/dataset.csv", "/stream.jsonl", "/truth.jsonl"}) {
    EXPECT_EQ(read_text_file(a + name), read_text_file(b + name)) << name;
  }
}

TEST_F(Cli, ExtractReproducesSimulatedDataset) {
  ASSERT_EQ(run({"simulate", "--out", path(""), "--single", "5", "--double", "5", "--seed", "4"}).code, cli::kOk);
  const auto r = run({"extract", "--stream", path("stream.jsonl"), "--truth", path("truth.jsonl")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.out, read_text_file(path("dataset.csv")));
}

TEST_F(Cli, CalibrateThenExtract) {
  ASSERT_EQ(run({"simulate", "--out", path(""), "--single", "2", "--double", "1", "--seed", "6"}).code, cli::kOk);
  const auto cal = run({"calibrate", "--stream", path("stream.jsonl"), "--out", path("cal.json")});
  ASSERT_EQ(cal.code, cli::kOk) << cal.err;
  const auto table = calibration_from_json(read_text_file(path("cal.json")));
  EXPECT_GE(table.n_frames, 100);
  const auto r = run({"extract", "--stream", path("stream.jsonl"), "--calibration", path("cal.json"), "--out",
                      path("x.csv")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(lines_of(read_text_file(path("x.csv"))).size(), 4u);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"teleport"}).code, cli::kUsage);
  EXPECT_EQ(run({"simulate"}).code, cli::kUsage);
  EXPECT_EQ(run({"simulate", "--out", path(""), "--single", "-3"}).code, cli::kUsage);
  ASSERT_EQ(run({"simulate", "--out", path(""), "--single", "3", "--double", "3"}).code, cli::kOk);
  const auto r = run({"fit", "--data", path("dataset.csv"), "--kind", "probit"});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST_F(Cli, MissingOutputDirectoryIsDataError) {
  const auto r = run({"simulate", "--out", path("nowhere")});
  EXPECT_EQ(r.code, cli::kDataError);
  EXPECT_NE(r.err.find("nowhere"), std::string::npos);
  EXPECT_EQ(run({"extract", "--stream", path("nothing.jsonl")}).code, cli::kDataError);
}

TEST_F(Cli, SingleClassFitIsFitError) {
  std::vector<MetricRow> rows;
  for (int i = 0; i < 10; ++i) rows.push_back(MetricRow{MetricVector{2900.0 + i, 2901.0 + i, 1.0, 1.0, 100}, 0});
  std::ostringstream csv;
  write_metrics_csv(csv, rows);
  write_text_file(path("single.csv"), csv.str());
  EXPECT_EQ(run({"fit", "--data", path("single.csv")}).code, cli::kFitError);
}

TEST_F(Cli, EmptyDatasetIsDataError) {
  write_text_file(path("empty.csv"), std::string(kMetricsHeader) + "\n");
  const auto model = train_model();
  EXPECT_EQ(run({"validate", "--data", path("empty.csv"), "--model", model}).code, cli::kDataError);
  EXPECT_EQ(run({"fit", "--data", path("empty.csv")}).code, cli::kDataError);
}

TEST_F(Cli, FitValidateCompare) {
  const auto model = train_model();
  const auto loaded = model_from_json(read_text_file(model));
  EXPECT_EQ(loaded.model.kind, ModelKind::Logistic);
  EXPECT_EQ(loaded.model.feature_names, (std::vector<std::string>{"v_tx", "v_rx"}));

  const auto test = sub("test");
  ASSERT_EQ(run({"simulate", "--out", test, "--seed", "5001"}).code, cli::kOk);
  const auto v = run({"validate", "--data", test + "/dataset.csv", "--model", model});
  ASSERT_EQ(v.code, cli::kOk) << v.err;
  EXPECT_NE(v.out.find("Correct Classification"), std::string::npos);
  EXPECT_NE(v.out.find("(a + b)"), std::string::npos);

  const auto fit = run({"fit", "--data", test + "/dataset.csv", "--kind", "linear"});
  ASSERT_EQ(fit.code, cli::kOk) << fit.err;
  EXPECT_NE(fit.out.find("F"), std::string::npos);

  const auto c = run({"compare", "--data", test + "/dataset.csv"});
  ASSERT_EQ(c.code, cli::kOk) << c.err;
  EXPECT_NE(c.out.find("Log. Reg. Output"), std::string::npos);
  EXPECT_GE(std::count(c.out.begin(), c.out.end(), '%'), 3);
}

TEST_F(Cli, DetectEmitsOneOrderedLinePerPassage) {
  const auto model = train_model();
  const auto live = sub("live");
  ASSERT_EQ(run({"simulate", "--out", live, "--single", "5", "--double", "5", "--seed", "808"}).code, cli::kOk);
  const auto r = run({"detect", "--stream", live + "/stream.jsonl", "--model", model});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 10u);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    EXPECT_EQ(lines[k].rfind("passage " + std::to_string(k) + " ", 0), 0u) << lines[k];
  }
  EXPECT_NE(r.err.find("10 passages"), std::string::npos);
}

TEST_F(Cli, DetectFlagsTwoPersonPassages) {
  const auto model = train_model();
  const auto live = sub("pairs");
  ASSERT_EQ(run({"simulate", "--out", live, "--single", "0", "--double", "40", "--seed", "606"}).code, cli::kOk);
  const auto r = run({"detect", "--stream", live + "/stream.jsonl", "--model", model, "--json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 40u);
  int flagged = 0;
  for (const auto& line : lines) {
    const auto j = nlohmann::json::parse(line);
    flagged += j.at("verdict").get<std::string>() == "MultiplePersons";
  }
  EXPECT_GE(flagged, 36);
}

TEST_F(Cli, DetectOnTruncatedStream) {
  const auto model = train_model();
  const auto live = sub("cut");
  ASSERT_EQ(run({"simulate", "--out", live, "--single", "2", "--double", "2", "--seed", "31"}).code, cli::kOk);
  const auto records = lines_of(read_text_file(live + "/stream.jsonl"));
  // Keep three passages and a bit of the fourth, ending mid-sweep.
  std::ostringstream head;
  const auto truth = lines_of(read_text_file(live + "/truth.jsonl"));
  const auto last = nlohmann::json::parse(truth.back());
  const auto stop = last["timeline"]["t_enter_closed"].get<std::int64_t>() + 3;
  for (const auto& line : records) {
    const auto rec = parse_record(line);
    if (rec.seq == stop && rec.id > 12) break;
    head << line << '\n';
  }
  write_text_file(live + "/head.jsonl", head.str());
  const auto r = run({"detect", "--stream", live + "/head.jsonl", "--model", model});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(lines_of(r.out).size(), 3u);
  EXPECT_NE(r.err.find("3 passages"), std::string::npos);
}

TEST_F(Cli, JsonOutputsParse) {
  ASSERT_EQ(run({"simulate", "--out", path(""), "--single", "20", "--double", "15", "--seed", "3"}).code, cli::kOk);
  const auto fit = run({"fit", "--data", path("dataset.csv"), "--out", path("m.json"), "--json"});
  ASSERT_EQ(fit.code, cli::kOk) << fit.err;
  const auto j = nlohmann::json::parse(fit.out);
  EXPECT_TRUE(j.contains("threshold"));
  const auto v = run({"validate", "--data", path("dataset.csv"), "--model", path("m.json"), "--json"});
  ASSERT_EQ(v.code, cli::kOk) << v.err;
  const auto report = nlohmann::json::parse(v.out);
  const auto& n = report.at("counts");
  EXPECT_EQ(n.at("n").get<int>(), 35);
  EXPECT_EQ(n.at("a").get<int>() + n.at("b").get<int>(), 20);
  EXPECT_EQ(report.at("threshold").get<double>(), j.at("threshold").get<double>());
  const auto c = run({"compare", "--data", path("dataset.csv"), "--json"});
  ASSERT_EQ(c.code, cli::kOk) << c.err;
  EXPECT_NO_THROW((void)nlohmann::json::parse(c.out));
}

}  // namespace
}  // namespace mantrap
