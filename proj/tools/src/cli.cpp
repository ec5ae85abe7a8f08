#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mantrap/error.hpp"
#include "mantrap/io.hpp"
#include "mantrap/pipeline.hpp"
#include "mantrap/report.hpp"
#include "mantrap/simulator.hpp"

namespace mantrap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string mode = "staggered";
  bool json = false;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  return out;
}

std::vector<std::string> split_features(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidConfig, "feature list is empty");
  for (const auto& name : out) (void)metric_feature(MetricVector{}, name);
  return out;
}

std::vector<MetricRow> load_metrics(const std::string& path) {
  auto in = open_input(path);
  return read_metrics_csv(in);
}

json timeline_json(const EventTimeline& t) {
  auto opt = [](const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); };
  return json{{"t_start", opt(t.t_start)},
              {"t_enter_closed", opt(t.t_enter_closed)},
              {"t_exit_open", opt(t.t_exit_open)},
              {"t_exit_closed", opt(t.t_exit_closed)}};
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string out_dir;
  int n_single = 37;
  int n_double = 26;
  std::uint64_t seed = 1;
  std::string scenario;
};

int cmd_simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
  if (!fs::is_directory(a.out_dir)) throw Error(ErrorCode::Io, "output directory '" + a.out_dir + "' does not exist");
  const fs::path dir(a.out_dir);

  if (!a.scenario.empty()) {
    auto cfg = scenario_from_json(read_text_file(a.scenario));
    const auto stream = simulate_passage(cfg);
    auto records = open_output((dir / "stream.jsonl").string());
    write_records(records, stream.records);
    auto truth = open_output((dir / "truth.jsonl").string());
    truth << json{{"passage", 0}, {"people", stream.truth}, {"timeline", timeline_json(stream.timeline)}}.dump()
          << '\n';
    if (c.json) {
      out << json{{"frames", stream.frames}, {"records", stream.records.size()}}.dump() << '\n';
    } else {
      out << "wrote " << stream.frames << " frames to " << (dir / "stream.jsonl").string() << '\n';
    }
    return kOk;
  }

  GenerateOptions options;
  options.mode = parse_sum_mode(c.mode);
  const auto data = generate_dataset(a.n_single, a.n_double, a.seed, options);

  std::vector<MetricRow> rows;
  for (const auto& p : data.passages) rows.push_back(MetricRow{p.metrics, p.label});
  auto csv = open_output((dir / "dataset.csv").string());
  write_metrics_csv(csv, rows);
  auto records = open_output((dir / "stream.jsonl").string());
  write_records(records, data.stream);
  auto truth = open_output((dir / "truth.jsonl").string());
  for (std::size_t k = 0; k < data.passages.size(); ++k) {
    const auto& p = data.passages[k];
    truth << json{{"passage", k},
                  {"preset", std::string(to_string(p.preset))},
                  {"label", p.label},
                  {"timeline", timeline_json(p.timeline)}}
                 .dump()
          << '\n';
  }
  if (c.json) {
    out << json{{"passages", data.passages.size()}, {"records", data.stream.size()}}.dump() << '\n';
  } else {
    out << "wrote " << data.passages.size() << " passages (" << a.n_single << " single, " << a.n_double
        << " multiple) to " << dir.string() << '\n';
  }
  return kOk;
}

// --- calibrate ---------------------------------------------------------------

struct CalibrateArgs {
  std::string stream;
  std::string output;
  std::int64_t min_frames = kDefaultMinCalibrationFrames;
};

int cmd_calibrate(const CalibrateArgs& a, const Common& c, std::ostream& out) {
  auto in = open_input(a.stream);
  RecordReader reader(in);
  FrameAssembler assembler;
  CalibrationTracker tracker(a.min_frames);
  auto feed = [&](const std::optional<SensorFrame>& frame) {
    if (frame) (void)tracker.feed(*frame);
  };
  while (auto r = reader.next()) feed(assembler.push(*r));
  assembler.finish();
  // A window still open at the end of the stream counts as finished.
  SensorFrame closing;
  closing.status.entrance_open = true;
  (void)tracker.feed(closing);
  if (!tracker.table()) {
    throw Error(ErrorCode::InsufficientData,
                "no quiet window of at least " + std::to_string(a.min_frames) + " frames in the stream");
  }
  const auto text = calibration_to_json(*tracker.table());
  if (!a.output.empty()) write_text_file(a.output, text + "\n");
  if (c.json || a.output.empty()) {
    out << text << '\n';
  } else {
    out << "calibrated over " << tracker.table()->n_frames << " frames -> " << a.output << '\n';
  }
  return kOk;
}

// --- extract -----------------------------------------------------------------

struct ExtractArgs {
  std::string stream;
  std::string output;
  std::string calibration;
  std::string truth;
};

int cmd_extract(const ExtractArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  AnalysisOptions options;
  options.mode = parse_sum_mode(c.mode);
  if (!a.calibration.empty()) options.calibration = calibration_from_json(read_text_file(a.calibration));

  std::map<std::int64_t, int> labels;
  if (!a.truth.empty()) {
    auto in = open_input(a.truth);
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, std::string("truth file: ") + e.what());
      }
      if (!j.contains("label") || !j.contains("timeline") || !j["timeline"]["t_exit_open"].is_number_integer()) continue;
      labels[j["timeline"]["t_exit_open"].get<std::int64_t>()] = j["label"].get<int>();
    }
  }

  auto in = open_input(a.stream);
  const auto records = read_records(in);
  const auto analysis = analyze_records(records, options);
  std::vector<MetricRow> rows;
  for (const auto& p : analysis.passages) {
    MetricRow row{p.metrics, std::nullopt};
    if (const auto it = labels.find(*p.timeline.t_exit_open); it != labels.end()) row.label = it->second;
    rows.push_back(row);
  }
  if (a.output.empty()) {
    write_metrics_csv(out, rows);
  } else {
    auto csv = open_output(a.output);
    write_metrics_csv(csv, rows);
    if (c.json) {
      out << json{{"passages", rows.size()}, {"diagnostics", analysis.diagnostics.size()}}.dump() << '\n';
    } else {
      out << "extracted " << rows.size() << " passages -> " << a.output << '\n';
    }
  }
  if (!analysis.diagnostics.empty()) err << analysis.diagnostics.size() << " stream diagnostics\n";
  return kOk;
}

// --- fit ---------------------------------------------------------------------

struct FitArgs {
  std::string data;
  std::string kind = "logistic";
  std::string output;
  std::string features = "v_tx,v_rx";
  int groups = 10;
  std::optional<double> threshold;
};

int cmd_fit(const FitArgs& a, const Common& c, std::ostream& out) {
  const auto rows = load_metrics(a.data);
  const auto features = split_features(a.features);
  const auto data = to_dataset(rows, features);
  if (data.rows() == 0) throw Error(ErrorCode::InsufficientData, "dataset is empty");
  const auto kind = parse_model_kind(a.kind);
  const auto model = fit(data, kind);

  double threshold = a.threshold.value_or(0.5);
  SignificanceReport report;
  if (kind == ModelKind::Logistic) {
    report = logistic_significance(model, data, a.groups);
    if (!a.threshold) threshold = tune_threshold(DecisionModel{model, 0.5}, data);
  } else {
    report = linear_significance(model, data);
  }
  if (!a.output.empty()) write_text_file(a.output, model_to_json(model, threshold) + "\n");

  if (c.json) {
    auto j = json::parse(significance_json(report));
    j["threshold"] = threshold;
    j["converged"] = model.converged;
    out << j.dump(2) << '\n';
  } else {
    out << significance_table(report);
    out << "\nthreshold " << threshold << (a.threshold ? " (given)" : kind == ModelKind::Logistic ? " (tuned)" : "")
        << '\n';
    if (!model.converged) out << "warning: fit did not converge\n";
  }
  return kOk;
}

// --- validate ----------------------------------------------------------------

struct ValidateArgs {
  std::string data;
  std::string model;
  std::optional<double> threshold;
};

int cmd_validate(const ValidateArgs& a, const Common& c, std::ostream& out) {
  auto dm = decision_model_from_json(read_text_file(a.model));
  if (a.threshold) dm.threshold = *a.threshold;
  const auto rows = load_metrics(a.data);
  if (rows.empty()) throw Error(ErrorCode::InsufficientData, "dataset is empty");
  std::vector<int> labels;
  std::vector<Verdict> verdicts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].label) throw Error(ErrorCode::Parse, "row " + std::to_string(i + 1) + " has no label");
    labels.push_back(*rows[i].label);
    verdicts.push_back(decide(dm, rows[i].metrics));
  }
  const auto report = classification_report(labels, verdicts);
  if (c.json) {
    out << classification_json(report, dm.threshold) << '\n';
  } else {
    out << confusion_table(report) << '\n' << performance_table(report);
  }
  return kOk;
}

// --- detect ------------------------------------------------------------------

struct DetectArgs {
  std::string stream;
  std::string model;
  std::string calibration;
  std::optional<double> threshold;
};

int cmd_detect(const DetectArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  auto dm = decision_model_from_json(read_text_file(a.model));
  if (a.threshold) dm.threshold = *a.threshold;
  AnalysisOptions options;
  options.mode = parse_sum_mode(c.mode);
  if (!a.calibration.empty()) options.calibration = calibration_from_json(read_text_file(a.calibration));

  StreamingDetector detector(std::move(dm), options);
  auto in = open_input(a.stream);
  RecordReader reader(in);
  std::size_t decisions = 0;
  while (auto r = reader.next()) {
    if (auto d = detector.push(*r)) {
      out << (c.json ? decision_json(*d) : decision_line(*d)) << '\n';
      ++decisions;
    }
  }
  detector.finish();
  err << decisions << " passages, " << detector.diagnostic_count() << " diagnostics\n";
  return kOk;
}

// --- compare -----------------------------------------------------------------

struct CompareArgs {
  std::string data;
  std::string features = "v_tx,v_rx";
};

int cmd_compare(const CompareArgs& a, const Common& c, std::ostream& out) {
  const auto rows = load_metrics(a.data);
  const auto data = to_dataset(rows, split_features(a.features));
  const auto report = model_comparison(data);
  out << (c.json ? comparison_json(report) : comparison_table(report)) << (c.json ? "\n" : "");
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Passage analysis for a six-transceiver interlocked door", "mantrap"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool with_mode) {
    if (with_mode) {
      sub->add_option("--mode", common.mode, "metric sums: literal or staggered")
          ->check(CLI::IsMember({"literal", "staggered"}));
    }
    sub->add_flag("--json", common.json, "machine-readable output");
  };
  const auto probability = CLI::Range(0.0, 1.0);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate a labeled stream and metrics dataset");
  simulate->add_option("--out", sim.out_dir, "existing output directory")->required();
  simulate->add_option("--single", sim.n_single, "passages with one person")->check(CLI::NonNegativeNumber);
  simulate->add_option("--double", sim.n_double, "passages with two people")->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--scenario", sim.scenario, "simulate one passage from a scenario JSON file");
  add_common(simulate, true);

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "compute calibration factors from quiet windows");
  calibrate->add_option("--stream", cal.stream, "records (JSON lines)")->required();
  calibrate->add_option("--out", cal.output, "calibration JSON to write");
  calibrate->add_option("--min-frames", cal.min_frames, "minimum quiet window")->check(CLI::PositiveNumber);
  add_common(calibrate, false);

  ExtractArgs ext;
  auto* extract = app.add_subcommand("extract", "metrics for every passage in a stream");
  extract->add_option("--stream", ext.stream, "records (JSON lines)")->required();
  extract->add_option("--out", ext.output, "metrics CSV to write (default stdout)");
  extract->add_option("--calibration", ext.calibration, "calibration JSON used until the stream calibrates");
  extract->add_option("--truth", ext.truth, "truth JSON lines supplying labels");
  add_common(extract, true);

  FitArgs fa;
  auto* fit_cmd = app.add_subcommand("fit", "fit a regression model and print significance tests");
  fit_cmd->add_option("--data", fa.data, "metrics CSV")->required();
  fit_cmd->add_option("--kind", fa.kind, "linear, robust or logistic")
      ->check(CLI::IsMember({"linear", "robust", "logistic"}));
  fit_cmd->add_option("--out", fa.output, "model JSON to write");
  fit_cmd->add_option("--features", fa.features, "comma-separated metric names");
  fit_cmd->add_option("--groups", fa.groups, "Hosmer-Lemeshow groups")->check(CLI::Range(3, 1000));
  fit_cmd->add_option("--threshold", fa.threshold, "decision threshold instead of tuning")->check(probability);
  add_common(fit_cmd, false);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "classification report of a model on a dataset");
  validate->add_option("--data", va.data, "metrics CSV")->required();
  validate->add_option("--model", va.model, "model JSON")->required();
  validate->add_option("--threshold", va.threshold, "override the stored threshold")->check(probability);
  add_common(validate, false);

  DetectArgs da;
  auto* detect = app.add_subcommand("detect", "streaming decisions, one line per passage");
  detect->add_option("--stream", da.stream, "records (JSON lines)")->required();
  detect->add_option("--model", da.model, "model JSON")->required();
  detect->add_option("--calibration", da.calibration, "calibration JSON used until the stream calibrates");
  detect->add_option("--threshold", da.threshold, "override the stored threshold")->check(probability);
  add_common(detect, true);

  CompareArgs ca;
  auto* compare = app.add_subcommand("compare", "correlation of linear, robust and logistic outputs with Y");
  compare->add_option("--data", ca.data, "metrics CSV")->required();
  compare->add_option("--features", ca.features, "comma-separated metric names");
  add_common(compare, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, common, out);
    if (*calibrate) return cmd_calibrate(cal, common, out);
    if (*extract) return cmd_extract(ext, common, out, err);
    if (*fit_cmd) return cmd_fit(fa, common, out);
    if (*validate) return cmd_validate(va, common, out);
    if (*detect) return cmd_detect(da, common, out, err);
    if (*compare) return cmd_compare(ca, common, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return is_fit_error(e.code()) ? kFitError : kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace mantrap::cli
