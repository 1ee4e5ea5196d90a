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

#include "qscreen/screening.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "qscreen/errors.hpp"
#include "qscreen/simulator.hpp"

namespace qscreen {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 5> kReasonNames{
    "ParseFailure", "QubitBudget", "NoTrainableGate", "ParamBudget", "ExecutionFailure"};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

HybridParams shaped_params(Eigen::Index f, Eigen::Index h1, Eigen::Index q, Eigen::Index h2,
                           Eigen::Index p) {
  HybridParams hp;
  hp.pre1 = {Eigen::MatrixXd::Zero(h1, f), Eigen::VectorXd::Zero(h1), Activation::ReLU};
  hp.pre2 = {Eigen::MatrixXd::Zero(q, h1), Eigen::VectorXd::Zero(q), Activation::Identity};
  hp.theta = Eigen::VectorXd::Zero(p);
  hp.post1 = {Eigen::MatrixXd::Zero(h2, q), Eigen::VectorXd::Zero(h2), Activation::ReLU};
  hp.post2 = {Eigen::MatrixXd::Zero(1, h2), Eigen::VectorXd::Zero(1), Activation::Identity};
  return hp;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view reason_name(RejectReason r) noexcept {
  return kReasonNames[static_cast<std::size_t>(r)];
}

std::optional<RejectReason> reason_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kReasonNames.size(); ++i)
    if (kReasonNames[i] == name) return static_cast<RejectReason>(i);
  return std::nullopt;
}

double validate_execution(const CircuitIR& circuit) {
  try {
    const Eigen::VectorXd theta =
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(circuit.trainable_param_count));
    return expect_all_z(run(circuit, theta))[0];
  } catch (const ExecutionFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw ExecutionFailure(e.what());
  }
}

bool execution_valid(double f) noexcept { return std::isfinite(f) && std::abs(f) <= 1.0 + 1e-9; }

std::pair<std::optional<CircuitIR>, FilterReport> check_circuit(std::string_view qasm_text,
                                                                const std::string& source_id,
                                                                const FilterConfig& cfg) {
  FilterReport report;
  report.source_id = source_id;
  auto reject = [&](RejectReason why) -> std::pair<std::optional<CircuitIR>, FilterReport> {
    report.accepted = false;
    report.reject_reason = why;
    return {std::nullopt, report};
  };

  CircuitIR circuit;
  try {
    circuit = strip_nonunitary(parse_qasm(qasm_text, source_id));
  } catch (const InputError& e) {
    report.detail = e.what();
    return reject(RejectReason::ParseFailure);
  }
  report.n = circuit.num_qubits;
  if (circuit.num_qubits < cfg.n_min || circuit.num_qubits > cfg.n_max)
    return reject(RejectReason::QubitBudget);

  circuit = mark_trainable(std::move(circuit), cfg.trainable);
  report.p = circuit.trainable_param_count;
  if (circuit.trainable_param_count == 0) return reject(RejectReason::NoTrainableGate);
  if (circuit.trainable_param_count > cfg.p_max) return reject(RejectReason::ParamBudget);

  try {
    const double f = validate_execution(circuit);
    if (!execution_valid(f)) {
      report.detail = "<Z_0> = " + format_double(f);
      return reject(RejectReason::ExecutionFailure);
    }
  } catch (const ExecutionFailure& e) {
    report.detail = e.what();
    return reject(RejectReason::ExecutionFailure);
  }
  report.accepted = true;
  return {std::move(circuit), report};
}

std::vector<fs::path> list_corpus(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("corpus directory not readable: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".qasm") files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

FilterResult filter_circuits(const std::vector<fs::path>& files, const FilterConfig& cfg,
                             int workers) {
  std::vector<std::optional<CircuitIR>> circuits(files.size());
  std::vector<FilterReport> reports(files.size());
  parallel_for(files.size(), workers, [&](std::size_t i) {
    const std::string id = files[i].stem().string();
    std::string text;
    try {
      text = read_file(files[i]);
    } catch (const IoError& e) {
      reports[i] = {id, false, RejectReason::ParseFailure, 0, 0, e.what()};
      return;
    }
    auto [circuit, report] = check_circuit(text, id, cfg);
    circuits[i] = std::move(circuit);
    reports[i] = std::move(report);
  });

  FilterResult out;
  out.reports = std::move(reports);
  for (auto& c : circuits)
    if (c) out.accepted[c->num_qubits].push_back(std::move(*c));
  return out;
}

void to_json(nlohmann::json& j, const FilterReport& r) {
  j = {{"source_id", r.source_id},
       {"accepted", r.accepted},
       {"reject_reason", r.reject_reason ? nlohmann::json(std::string(reason_name(*r.reject_reason)))
                                         : nlohmann::json(nullptr)},
       {"n", r.n},
       {"p", r.p},
       {"detail", r.detail}};
}

void from_json(const nlohmann::json& j, FilterReport& r) {
  r.source_id = j.at("source_id").get<std::string>();
  r.accepted = j.at("accepted").get<bool>();
  r.reject_reason.reset();
  if (!j.at("reject_reason").is_null()) {
    r.reject_reason = reason_from_name(j.at("reject_reason").get<std::string>());
    if (!r.reject_reason) throw ParseError(0, "unknown reject reason");
  }
  r.n = j.at("n").get<int>();
  r.p = j.at("p").get<std::size_t>();
  r.detail = j.value("detail", "");
}

// ---------------------------------------------------------------------------

SplitEvaluation evaluate_split(const HybridModel& model, const HybridParams& params,
                               const Dataset& data, double threshold) {
  SplitEvaluation out;
  out.probs.resize(data.rows());
  double loss = 0.0;
  ForwardCache cache;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const double logit = model.forward(params, data.features.row(i).transpose(), cache);
    loss += bce_with_logits(logit, data.labels[i]).loss;
    out.probs[i] = sigmoid(logit);
  }
  out.loss = data.rows() ? loss / static_cast<double>(data.rows()) : 0.0;
  out.report = evaluate(out.probs, data.labels, threshold);
  return out;
}

std::vector<EpochMetrics> train_model(const HybridModel& model, HybridParams& params,
                                      const SplitSet& split, int epochs, const TrainConfig& cfg,
                                      Rng& rng, const EpochHook& hook) {
  if (cfg.batch_size < 1) throw ConfigError("batch size must be at least 1");
  std::vector<EpochMetrics> curve;
  auto record = [&](int epoch) {
    const auto train = evaluate_split(model, params, split.train, cfg.threshold);
    const auto val = evaluate_split(model, params, split.val, cfg.threshold);
    curve.push_back({epoch, "train", train.loss, train.report.accuracy, train.report.macro_f1});
    curve.push_back({epoch, "val", val.loss, val.report.accuracy, val.report.macro_f1});
    if (hook) hook(epoch, params, val.report.macro_f1);
  };
  if (epochs <= 0) {
    record(0);
    return curve;
  }

  AdamState adam;
  adam.lr = cfg.lr;
  Eigen::VectorXd flat = params.flatten();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(split.train.rows()));
  ForwardCache cache;
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
    shuffle(order, rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(flat.size());
      for (std::size_t b = start; b < stop; ++b) {
        const Eigen::Index row = order[b];
        model.forward(params, split.train.features.row(row).transpose(), cache);
        grad += model.backward(params, cache, split.train.labels[row]).flatten();
      }
      grad /= static_cast<double>(stop - start);
      adam_step(flat, grad, adam);
      params.unflatten(flat);
    }
    record(epoch);
  }
  return curve;
}

// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const Checkpoint& c) {
  const auto flat = c.params.flatten();
  j = {{"source_id", c.source_id},
       {"fingerprint", c.fingerprint},
       {"seed", c.seed},
       {"epoch", c.epoch},
       {"val_macro_f1", c.val_macro_f1},
       {"skip_enabled", c.skip_enabled},
       {"layout",
        {{"num_features", c.params.pre1.in_dim()},
         {"hidden1", c.params.pre1.out_dim()},
         {"qubits", c.params.pre2.out_dim()},
         {"hidden2", c.params.post1.out_dim()},
         {"theta", c.params.theta.size()},
         {"order", "pre1.W pre1.b pre2.W pre2.b theta alpha post1.W post1.b post2.W post2.b; "
                   "weights row-major (out x in)"}}},
       {"params", std::vector<double>(flat.begin(), flat.end())}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  Checkpoint c;
  c.source_id = j.at("source_id").get<std::string>();
  c.fingerprint = j.at("fingerprint").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.epoch = j.at("epoch").get<int>();
  c.val_macro_f1 = j.at("val_macro_f1").get<double>();
  c.skip_enabled = j.at("skip_enabled").get<bool>();
  const auto& layout = j.at("layout");
  c.params = shaped_params(layout.at("num_features").get<Eigen::Index>(),
                           layout.at("hidden1").get<Eigen::Index>(),
                           layout.at("qubits").get<Eigen::Index>(),
                           layout.at("hidden2").get<Eigen::Index>(),
                           layout.at("theta").get<Eigen::Index>());
  const auto flat = j.at("params").get<std::vector<double>>();
  c.params.unflatten(Eigen::Map<const Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size())));
  return c;
}

Checkpoint load_checkpoint(const fs::path& path) {
  try {
    return checkpoint_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

ArtifactWriter::ArtifactWriter(fs::path root) : root_(std::move(root)) {}

namespace {

void write_unlocked(const fs::path& root, const fs::path& relative, const std::string& text) {
  if (root.empty()) return;
  const fs::path path = root / relative;
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

}  // namespace

void ArtifactWriter::write_text(const fs::path& relative, const std::string& text) {
  std::lock_guard lock(mutex_);
  write_unlocked(root_, relative, text);
}

void ArtifactWriter::write_json(const fs::path& relative, const nlohmann::json& j) {
  write_text(relative, j.dump(2) + "\n");
}

bool ArtifactWriter::offer_global_best(const Checkpoint& c, std::size_t num_params) {
  std::lock_guard lock(mutex_);
  if (best_) {
    const bool better =
        c.val_macro_f1 > best_->val_macro_f1 ||
        (c.val_macro_f1 == best_->val_macro_f1 &&
         (num_params < best_params_ || (num_params == best_params_ && c.source_id < best_->source_id)));
    if (!better) return false;
  }
  // tie-break replacements keep the score, so the history stays strictly increasing
  if (!best_ || c.val_macro_f1 > best_->val_macro_f1) history_.push_back(c.val_macro_f1);
  best_ = c;
  best_params_ = num_params;
  write_unlocked(root_, "best_checkpoint.json", nlohmann::json(c).dump(2) + "\n");
  return true;
}

std::optional<Checkpoint> ArtifactWriter::global_best() const {
  std::lock_guard lock(mutex_);
  return best_;
}

std::vector<double> ArtifactWriter::global_history() const {
  std::lock_guard lock(mutex_);
  return history_;
}

void to_json(nlohmann::json& j, const ScreeningRecord& r) {
  j = {{"source_id", r.source_id},
       {"n", r.n},
       {"p", r.p},
       {"best_val_macro_f1", r.best_val_macro_f1},
       {"best_epoch", r.best_epoch},
       {"seed", r.seed},
       {"failed", r.failed},
       {"error", r.error}};
}

void from_json(const nlohmann::json& j, ScreeningRecord& r) {
  r.source_id = j.at("source_id").get<std::string>();
  r.n = j.at("n").get<int>();
  r.p = j.at("p").get<std::size_t>();
  r.best_val_macro_f1 = j.at("best_val_macro_f1").get<double>();
  r.best_epoch = j.at("best_epoch").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.failed = j.value("failed", false);
  r.error = j.value("error", "");
}

std::uint64_t circuit_seed(std::uint64_t global_seed, const std::string& source_id) noexcept {
  return derive_seed(global_seed, source_id);
}

std::string curve_csv(const std::vector<EpochMetrics>& rows) {
  std::string out = "epoch,split,loss,accuracy,macro_f1\n";
  for (const auto& r : rows) {
    out += std::to_string(r.epoch) + "," + r.split + "," + format_double(r.loss) + "," +
           format_double(r.accuracy) + "," + format_double(r.macro_f1) + "\n";
  }
  return out;
}

ScreeningRecord short_train(const CircuitIR& circuit, const SplitSet& split, const TrainConfig& tcfg,
                            const HybridConfig& mcfg, const RunContext& ctx) {
  const auto started = std::chrono::steady_clock::now();
  ScreeningRecord rec;
  rec.source_id = circuit.source_id;
  rec.n = circuit.num_qubits;
  rec.p = circuit.trainable_param_count;
  rec.seed = circuit_seed(ctx.seed, circuit.source_id);

  try {
    const HybridModel model(mcfg, circuit);
    Rng rng(rec.seed);
    HybridParams params = model.init_params(rng);
    double best = -1.0;
    const auto curve = train_model(
        model, params, split, tcfg.t_short, tcfg, rng,
        [&](int epoch, const HybridParams& current, double val_f1) {
          if (val_f1 <= best) return;
          best = val_f1;
          rec.best_val_macro_f1 = val_f1;
          rec.best_epoch = epoch;
          if (!ctx.writer) return;
          const Checkpoint cp{circuit.source_id, ctx.fingerprint, rec.seed, epoch, val_f1,
                              mcfg.skip_enabled, current};
          ctx.writer->write_json(fs::path("checkpoints") / (circuit.source_id + ".json"), cp);
          ctx.writer->offer_global_best(cp, circuit.trainable_param_count);
        });
    if (ctx.writer)
      ctx.writer->write_text(fs::path("curves") / "screen" / (circuit.source_id + ".csv"), curve_csv(curve));
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.best_val_macro_f1 = 0.0;
    rec.best_epoch = 0;
  }
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

std::vector<ScreeningRecord> screen_circuits(const std::vector<CircuitIR>& circuits,
                                             const SplitSet& split, const TrainConfig& tcfg,
                                             const HybridConfig& mcfg, const RunContext& ctx,
                                             int workers) {
  std::vector<ScreeningRecord> records(circuits.size());
  parallel_for(circuits.size(), workers, [&](std::size_t i) {
    records[i] = short_train(circuits[i], split, tcfg, mcfg, ctx);
  });
  return records;
}

bool ranks_before(const ScreeningRecord& a, const ScreeningRecord& b) noexcept {
  if (a.best_val_macro_f1 != b.best_val_macro_f1) return a.best_val_macro_f1 > b.best_val_macro_f1;
  if (a.p != b.p) return a.p < b.p;
  return a.source_id < b.source_id;
}

std::string select_best(const std::vector<ScreeningRecord>& records) {
  const ScreeningRecord* best = nullptr;
  for (const auto& r : records) {
    if (r.failed || !std::isfinite(r.best_val_macro_f1)) continue;
    if (!best || ranks_before(r, *best)) best = &r;
  }
  if (!best) throw NoCandidates("no successfully screened circuit to select");
  return best->source_id;
}

FullTrainResult full_train_and_test(const CircuitIR& circuit, const SplitSet& split,
                                    const TrainConfig& tcfg, const HybridConfig& mcfg,
                                    const RunContext& ctx) {
  FullTrainResult out;
  out.source_id = circuit.source_id;
  out.skip_enabled = mcfg.skip_enabled;
  const auto seed = circuit_seed(ctx.seed, circuit.source_id);
  const HybridModel model(mcfg, circuit);
  Rng rng(seed);
  HybridParams params = model.init_params(rng);

  double best = -1.0;
  out.curve = train_model(model, params, split, tcfg.t_full, tcfg, rng,
                          [&](int epoch, const HybridParams& current, double val_f1) {
                            if (val_f1 <= best) return;
                            best = val_f1;
                            out.best = {circuit.source_id, ctx.fingerprint, seed, epoch, val_f1,
                                        mcfg.skip_enabled, current};
                          });
  out.best_epoch = out.best.epoch;
  out.best_val_macro_f1 = out.best.val_macro_f1;

  const int last_epoch = std::max(tcfg.t_full, 0);
  const double final_val = out.curve.back().macro_f1;
  out.final = {circuit.source_id, ctx.fingerprint, seed, last_epoch, final_val, mcfg.skip_enabled, params};

  const Checkpoint& tested = tcfg.test_best_val ? out.best : out.final;
  out.tested_model = tcfg.test_best_val ? "best_val" : "final";
  out.test = evaluate_split(model, tested.params, split.test, tcfg.threshold).report;

  if (ctx.writer) {
    ctx.writer->write_text(fs::path("curves") / (circuit.source_id + ".csv"), curve_csv(out.curve));
    ctx.writer->write_json(fs::path("checkpoints") / (circuit.source_id + ".full_best.json"), out.best);
    ctx.writer->write_json(fs::path("checkpoints") / (circuit.source_id + ".final.json"), out.final);
  }
  return out;
}

nlohmann::json final_report_json(const FullTrainResult& r, const CircuitIR& circuit,
                                 const RunContext& ctx) {
  return {{"source_id", r.source_id},
          {"n", circuit.num_qubits},
          {"p", circuit.trainable_param_count},
          {"fingerprint", ctx.fingerprint},
          {"seed", ctx.seed},
          {"skip_enabled", r.skip_enabled},
          {"ablated", !r.skip_enabled},
          {"tested_model", r.tested_model},
          {"best_epoch", r.best_epoch},
          {"best_val_macro_f1", r.best_val_macro_f1},
          {"final_val_macro_f1", r.final.val_macro_f1},
          {"epochs", r.final.epoch},
          {"test", r.test}};
}

}  // namespace qscreen
