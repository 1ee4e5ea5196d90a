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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "qscreen/data.hpp"
#include "qscreen/hybrid.hpp"
#include "qscreen/metrics.hpp"
#include "qscreen/qasm.hpp"

namespace qscreen {

// ---------------------------------------------------------------------------
// Filtering

struct FilterConfig {
  int n_min = 3;
  int n_max = 10;
  std::size_t p_max = 30;
  GateSet trainable = default_trainable_set();
};

enum class RejectReason { ParseFailure, QubitBudget, NoTrainableGate, ParamBudget, ExecutionFailure };

std::string_view reason_name(RejectReason r) noexcept;
std::optional<RejectReason> reason_from_name(std::string_view name) noexcept;

struct FilterReport {
  std::string source_id;
  bool accepted = false;
  std::optional<RejectReason> reject_reason;
  int n = 0;
  std::size_t p = 0;
  /// Diagnostic for parse and execution failures; empty otherwise.
  std::string detail;

  friend bool operator==(const FilterReport&, const FilterReport&) = default;
};

struct FilterResult {
  /// Accepted circuits keyed by qubit count, each group in corpus order.
  std::map<int, std::vector<CircuitIR>> accepted;
  /// One report per input file, in input order.
  std::vector<FilterReport> reports;
};

/// <Z_0> of the bare circuit at theta = 0. Wraps simulator errors in
/// ExecutionFailure.
double validate_execution(const CircuitIR& circuit);

/// Finite and |f| <= 1 + 1e-9.
bool execution_valid(double f) noexcept;

/// Full check chain for one program: parse, strip, qubit budget, mark
/// trainable gates, P = 0, P <= p_max, execution. Stops at the first failure.
std::pair<std::optional<CircuitIR>, FilterReport> check_circuit(std::string_view qasm_text,
                                                                const std::string& source_id,
                                                                const FilterConfig& cfg);

/// `*.qasm` files directly inside `dir`, sorted by file name.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir);

FilterResult filter_circuits(const std::vector<std::filesystem::path>& files,
                             const FilterConfig& cfg, int workers = 1);

void to_json(nlohmann::json& j, const FilterReport& r);
void from_json(const nlohmann::json& j, FilterReport& r);

// ---------------------------------------------------------------------------
// Training

struct TrainConfig {
  int t_short = 5;
  int t_full = 20;
  std::size_t batch_size = 32;
  double lr = 0.01;
  double threshold = 0.5;
  /// Evaluate the best-validation weights on the test split (otherwise the
  /// final-epoch weights).
  bool test_best_val = true;
};

struct EpochMetrics {
  int epoch = 0;
  std::string split;
  double loss = 0.0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

struct SplitEvaluation {
  double loss = 0.0;
  Eigen::VectorXd probs;
  EvalReport report;
};

SplitEvaluation evaluate_split(const HybridModel& model, const HybridParams& params,
                               const Dataset& data, double threshold = 0.5);

/// Called after every epoch with the current weights and validation macro-F1.
using EpochHook = std::function<void(int epoch, const HybridParams& params, double val_macro_f1)>;

/// Mini-batch Adam on mean BCE loss over `epochs` epochs; the batch order is
/// reshuffled from `rng` each epoch. With zero epochs the hook still sees
/// the initial weights as epoch 0. Returns the per-epoch curve rows.
std::vector<EpochMetrics> train_model(const HybridModel& model, HybridParams& params,
                                      const SplitSet& split, int epochs, const TrainConfig& cfg,
                                      Rng& rng, const EpochHook& hook);

struct Checkpoint {
  std::string source_id;
  std::string fingerprint;
  std::uint64_t seed = 0;
  int epoch = 0;
  double val_macro_f1 = 0.0;
  bool skip_enabled = true;
  HybridParams params;
};

void to_json(nlohmann::json& j, const Checkpoint& c);

/// Restores a checkpoint. Layer shapes are rebuilt from its layout block.
Checkpoint checkpoint_from_json(const nlohmann::json& j);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Serialises every artifact write and tracks the best checkpoint across
/// circuits. An empty root keeps everything in memory.
class ArtifactWriter {
 public:
  ArtifactWriter() = default;
  explicit ArtifactWriter(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Writes `j` (two-space indent, trailing newline) to root/relative.
  void write_json(const std::filesystem::path& relative, const nlohmann::json& j);
  void write_text(const std::filesystem::path& relative, const std::string& text);

  /// Replaces the cross-circuit best if `c` ranks higher: greater score, then
  /// fewer params, then smaller source id. Returns whether it did.
  bool offer_global_best(const Checkpoint& c, std::size_t num_params);

  std::optional<Checkpoint> global_best() const;
  /// Global-best score each time it rose, in order.
  std::vector<double> global_history() const;

 private:
  std::filesystem::path root_;
  mutable std::mutex mutex_;
  std::optional<Checkpoint> best_;
  std::size_t best_params_ = 0;
  std::vector<double> history_;
};

struct ScreeningRecord {
  std::string source_id;
  int n = 0;
  std::size_t p = 0;
  double best_val_macro_f1 = 0.0;
  int best_epoch = 0;
  double wall_time = 0.0;  ///< seconds; kept out of the JSON artifacts
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
};

void to_json(nlohmann::json& j, const ScreeningRecord& r);
void from_json(const nlohmann::json& j, ScreeningRecord& r);

struct RunContext {
  std::uint64_t seed = 0;
  std::string fingerprint;
  ArtifactWriter* writer = nullptr;
};

/// Seed of a circuit's weights and batch order.
std::uint64_t circuit_seed(std::uint64_t global_seed, const std::string& source_id) noexcept;

/// Short training run of one candidate. Writes checkpoints/<id>.json when the
/// circuit's best validation macro-F1 improves, offers every such checkpoint
/// as the global best, and writes curves/screen/<id>.csv. Training errors
/// yield a failed record with score 0.
ScreeningRecord short_train(const CircuitIR& circuit, const SplitSet& split, const TrainConfig& tcfg,
                            const HybridConfig& mcfg, const RunContext& ctx);

/// short_train over all circuits on `workers` threads; records in input order.
std::vector<ScreeningRecord> screen_circuits(const std::vector<CircuitIR>& circuits,
                                             const SplitSet& split, const TrainConfig& tcfg,
                                             const HybridConfig& mcfg, const RunContext& ctx,
                                             int workers = 1);

/// True if a ranks before b: higher score, fewer params, smaller id.
bool ranks_before(const ScreeningRecord& a, const ScreeningRecord& b) noexcept;

/// Argmax of best_val_macro_f1 over non-failed records, ties broken by
/// ranks_before. Throws NoCandidates.
std::string select_best(const std::vector<ScreeningRecord>& records);

struct FullTrainResult {
  std::string source_id;
  EvalReport test;
  std::string tested_model;  ///< "best_val" or "final"
  int best_epoch = 0;
  double best_val_macro_f1 = 0.0;
  bool skip_enabled = true;
  std::vector<EpochMetrics> curve;
  Checkpoint best;
  Checkpoint final;
};

/// Retrains from a fresh initialisation for t_full epochs and evaluates on
/// the test split. Writes curves/<id>.csv, checkpoints/<id>.full_best.json
/// and checkpoints/<id>.final.json.
FullTrainResult full_train_and_test(const CircuitIR& circuit, const SplitSet& split,
                                    const TrainConfig& tcfg, const HybridConfig& mcfg,
                                    const RunContext& ctx);

nlohmann::json final_report_json(const FullTrainResult& r, const CircuitIR& circuit,
                                 const RunContext& ctx);

std::string curve_csv(const std::vector<EpochMetrics>& rows);

}  // namespace qscreen
