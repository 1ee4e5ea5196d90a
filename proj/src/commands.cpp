// Copyright 2026 The qscreen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qscreen/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qscreen/errors.hpp"

namespace qscreen::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " (run the previous stage first)");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

RunContext context(const RunConfig& cfg, ArtifactWriter& writer) {
  return {cfg.seed, config_fingerprint(cfg), &writer};
}

SplitSet load_split(const RunConfig& cfg) {
  const auto j = read_json(cfg.output_dir / "split.json");
  auto split = j.at("split").get<SplitSet>();
  if (split.train.num_features() != cfg.model.num_features) {
    throw ConfigError("split.json holds " + std::to_string(split.train.num_features()) +
                      " features, config expects " + std::to_string(cfg.model.num_features));
  }
  return split;
}

/// Accepted circuits from filter_report.json, re-read from the corpus.
std::vector<CircuitIR> load_accepted(const RunConfig& cfg) {
  const auto j = read_json(cfg.output_dir / "filter_report.json");
  std::vector<CircuitIR> out;
  for (const auto& r : j.at("reports").get<std::vector<FilterReport>>()) {
    if (!r.accepted) continue;
    const fs::path file = cfg.corpus_dir / (r.source_id + ".qasm");
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    auto [circuit, report] = check_circuit(ss.str(), r.source_id, cfg.filter);
    if (!circuit) throw InputError(r.source_id + " no longer passes the filter; rerun `filter`");
    out.push_back(std::move(*circuit));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CircuitIR& a, const CircuitIR& b) { return a.num_qubits < b.num_qubits; });
  return out;
}

}  // namespace

PreprocessResult cmd_preprocess(const RunConfig& cfg, std::ostream& log) {
  const auto raw = load_csv(cfg.data_csv, cfg.schema);
  log << "[preprocess] loaded " << raw.rows() << " rows (" << raw.count(1) << " fraud)\n";
  Rng rng(derive_seed(cfg.seed, "preprocess"));
  auto result = preprocess(raw, cfg.preprocess, rng);

  ArtifactWriter writer(cfg.output_dir);
  const auto fp = config_fingerprint(cfg);
  writer.write_json("scaler.json", {{"fingerprint", fp},
                                    {"seed", cfg.seed},
                                    {"feature_columns", cfg.schema.feature_columns},
                                    {"scaler", result.scaler}});
  writer.write_json("split.json", {{"fingerprint", fp},
                                   {"seed", cfg.seed},
                                   {"split_first", cfg.preprocess.split_first},
                                   {"row_ids", cfg.preprocess.split_first ? "raw rows, -1 synthetic"
                                                                          : "balanced rows"},
                                   {"split", result.split}});
  log << "[preprocess] train " << result.split.train.rows() << ", val " << result.split.val.rows()
      << ", test " << result.split.test.rows() << "\n";
  return result;
}

FilterResult cmd_filter(const RunConfig& cfg, std::ostream& log) {
  const auto files = list_corpus(cfg.corpus_dir);
  auto result = filter_circuits(files, cfg.filter, cfg.workers);

  ArtifactWriter writer(cfg.output_dir);
  writer.write_json("filter_report.json", {{"fingerprint", config_fingerprint(cfg)},
                                           {"seed", cfg.seed},
                                           {"reports", result.reports}});
  std::map<std::string, int> counts;
  int accepted = 0;
  for (const auto& r : result.reports) {
    if (r.accepted) ++accepted;
    else ++counts[std::string(reason_name(*r.reject_reason))];
  }
  log << "[filter] " << result.reports.size() << " circuits, " << accepted << " accepted\n";
  for (const auto& [reason, n] : counts) log << "[filter] rejected " << reason << ": " << n << "\n";
  return result;
}

std::vector<ScreeningRecord> cmd_screen(const RunConfig& cfg, std::ostream& log) {
  const auto split = load_split(cfg);
  const auto circuits = load_accepted(cfg);
  log << "[screen] " << circuits.size() << " candidates\n";

  ArtifactWriter writer(cfg.output_dir);
  const auto ctx = context(cfg, writer);
  auto records = screen_circuits(circuits, split, cfg.train, cfg.model, ctx, cfg.workers);

  std::string timings = "source_id,wall_time_s\n";
  for (const auto& r : records) {
    timings += r.source_id + "," + std::to_string(r.wall_time) + "\n";
    if (r.failed) log << "[screen] " << r.source_id << " failed: " << r.error << "\n";
  }
  writer.write_text(fs::path("logs") / "screen_timings.csv", timings);

  std::sort(records.begin(), records.end(), ranks_before);
  writer.write_json("screening_records.json", {{"fingerprint", ctx.fingerprint},
                                               {"seed", cfg.seed},
                                               {"records", records}});
  if (!records.empty() && !records.front().failed) {
    log << "[screen] best " << records.front().source_id << " (val macro-F1 "
        << records.front().best_val_macro_f1 << ")\n";
  }
  return records;
}

FullTrainResult cmd_train(const RunConfig& cfg, const std::optional<std::string>& circuit,
                          std::ostream& log) {
  const auto split = load_split(cfg);
  std::string id;
  if (circuit) {
    id = *circuit;
  } else {
    const auto j = read_json(cfg.output_dir / "screening_records.json");
    id = select_best(j.at("records").get<std::vector<ScreeningRecord>>());
  }

  const fs::path file = cfg.corpus_dir / (id + ".qasm");
  std::ifstream in(file, std::ios::binary);
  if (!in) throw UnknownCircuitId(id);
  std::ostringstream ss;
  ss << in.rdbuf();
  auto [candidate, report] = check_circuit(ss.str(), id, cfg.filter);
  if (!candidate) {
    throw InputError("circuit " + id + " does not pass the filter (" +
                     std::string(reason_name(*report.reject_reason)) + ")");
  }

  ArtifactWriter writer(cfg.output_dir);
  const auto ctx = context(cfg, writer);
  log << "[train] " << id << ": " << cfg.train.t_full << " epochs"
      << (cfg.model.skip_enabled ? "" : ", skip connection disabled") << "\n";
  auto result = full_train_and_test(*candidate, split, cfg.train, cfg.model, ctx);
  writer.write_json("final_report.json", final_report_json(result, *candidate, ctx));
  log << "[train] test accuracy " << result.test.accuracy << ", macro-F1 " << result.test.macro_f1
      << ", ROC-AUC " << result.test.roc_auc << "\n";
  return result;
}

FullTrainResult cmd_run_all(const RunConfig& cfg, const std::optional<std::string>& circuit,
                            std::ostream& log) {
  cmd_preprocess(cfg, log);
  cmd_filter(cfg, log);
  cmd_screen(cfg, log);
  return cmd_train(cfg, circuit, log);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Screen OpenQASM circuits as the quantum layer of a hybrid fraud classifier"};
  app.require_subcommand(1);
  app.fallthrough();  // inherited by subcommands: parent options may follow them

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> circuit;
  bool no_skip = false;
  bool split_first = false;

  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--seed", seed, "override the configured seed");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--no-skip", no_skip, "disable the residual skip connection");
  app.add_flag("--split-first", split_first, "split before SMOTE and scaling");

  auto* preprocess = app.add_subcommand("preprocess", "balance, scale and split the dataset");
  auto* filter = app.add_subcommand("filter", "filter the circuit corpus");
  auto* screen = app.add_subcommand("screen", "short-train every accepted circuit");
  auto* train = app.add_subcommand("train", "fully train and test the selected circuit");
  auto* run_all = app.add_subcommand("run-all", "all four stages");
  for (auto* sub : {train, run_all})
    sub->add_option("--circuit", circuit, "train this circuit instead of the screening winner");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (workers) cfg.workers = *workers;
    if (no_skip) cfg.model.skip_enabled = false;
    if (split_first) cfg.preprocess.split_first = true;

    if (preprocess->parsed()) cmd_preprocess(cfg, out);
    else if (filter->parsed()) cmd_filter(cfg, out);
    else if (screen->parsed()) cmd_screen(cfg, out);
    else if (train->parsed()) cmd_train(cfg, circuit, out);
    else if (run_all->parsed()) cmd_run_all(cfg, circuit, out);
    out.flush();
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qscreen::cli
