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

#include "qscreen/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qscreen/errors.hpp"
#include "qscreen/rng.hpp"

namespace qscreen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

json config_to_json(const RunConfig& c) {
  std::vector<std::string> gates;
  for (auto g : c.filter.trainable) gates.emplace_back(gate_name(g));
  return {
      {"paths",
       {{"data_csv", c.data_csv.string()},
        {"corpus_dir", c.corpus_dir.string()},
        {"output_dir", c.output_dir.string()}}},
      {"data",
       {{"feature_columns", c.schema.feature_columns},
        {"label_column", c.schema.label_column},
        {"samples_per_class", c.preprocess.samples_per_class},
        {"smote_k", c.preprocess.smote_k},
        {"split", {c.preprocess.ratios.train, c.preprocess.ratios.val, c.preprocess.ratios.test}},
        {"split_first", c.preprocess.split_first}}},
      {"filter",
       {{"n_min", c.filter.n_min},
        {"n_max", c.filter.n_max},
        {"p_max", c.filter.p_max},
        {"trainable_gates", gates}}},
      {"train",
       {{"t_short", c.train.t_short},
        {"t_full", c.train.t_full},
        {"batch_size", c.train.batch_size},
        {"lr", c.train.lr},
        {"threshold", c.train.threshold},
        {"test_model", c.train.test_best_val ? "best_val" : "final"}}},
      {"model",
       {{"hidden1", c.model.hidden1},
        {"hidden2", c.model.hidden2},
        {"skip_enabled", c.model.skip_enabled},
        {"alpha_init", c.model.alpha_init},
        {"warm_start", c.model.warm_start}}},
      {"seed", c.seed},
      {"workers", c.workers},
  };
}

RunConfig config_from_json(const json& j, const fs::path& base_dir) {
  RunConfig c;
  reject_unknown(j, {"paths", "data", "filter", "train", "model", "seed", "workers"}, "config");
  read(j, "seed", c.seed, "config");
  read(j, "workers", c.workers, "config");

  if (j.contains("paths")) {
    const auto& p = j["paths"];
    reject_unknown(p, {"data_csv", "corpus_dir", "output_dir"}, "paths");
    std::string s;
    s.clear(); read(p, "data_csv", s, "paths"); c.data_csv = resolve(base_dir, s);
    s.clear(); read(p, "corpus_dir", s, "paths"); c.corpus_dir = resolve(base_dir, s);
    s.clear(); read(p, "output_dir", s, "paths"); c.output_dir = resolve(base_dir, s);
  }
  if (j.contains("data")) {
    const auto& d = j["data"];
    reject_unknown(d, {"feature_columns", "label_column", "samples_per_class", "smote_k", "split",
                       "split_first"},
                   "data");
    read(d, "feature_columns", c.schema.feature_columns, "data");
    read(d, "label_column", c.schema.label_column, "data");
    read(d, "samples_per_class", c.preprocess.samples_per_class, "data");
    read(d, "smote_k", c.preprocess.smote_k, "data");
    read(d, "split_first", c.preprocess.split_first, "data");
    if (d.contains("split")) {
      std::vector<double> r;
      read(d, "split", r, "data");
      if (r.size() != 3) throw ConfigError("data.split must hold three ratios");
      c.preprocess.ratios = {r[0], r[1], r[2]};
    }
  }
  if (j.contains("filter")) {
    const auto& f = j["filter"];
    reject_unknown(f, {"n_min", "n_max", "p_max", "trainable_gates"}, "filter");
    read(f, "n_min", c.filter.n_min, "filter");
    read(f, "n_max", c.filter.n_max, "filter");
    read(f, "p_max", c.filter.p_max, "filter");
    if (f.contains("trainable_gates")) {
      std::vector<std::string> names;
      read(f, "trainable_gates", names, "filter");
      c.filter.trainable.clear();
      for (const auto& n : names) {
        auto kind = gate_from_name(n);
        if (!kind || !is_parametric(*kind)) throw ConfigError("'" + n + "' is not a parametric gate");
        c.filter.trainable.insert(*kind);
      }
    }
  }
  if (j.contains("train")) {
    const auto& t = j["train"];
    reject_unknown(t, {"t_short", "t_full", "batch_size", "lr", "threshold", "test_model"}, "train");
    read(t, "t_short", c.train.t_short, "train");
    read(t, "t_full", c.train.t_full, "train");
    read(t, "batch_size", c.train.batch_size, "train");
    read(t, "lr", c.train.lr, "train");
    read(t, "threshold", c.train.threshold, "train");
    std::string which = "best_val";
    read(t, "test_model", which, "train");
    if (which != "best_val" && which != "final")
      throw ConfigError("train.test_model must be 'best_val' or 'final'");
    c.train.test_best_val = which == "best_val";
  }
  if (j.contains("model")) {
    const auto& m = j["model"];
    reject_unknown(m, {"hidden1", "hidden2", "skip_enabled", "alpha_init", "warm_start"}, "model");
    read(m, "hidden1", c.model.hidden1, "model");
    read(m, "hidden2", c.model.hidden2, "model");
    read(m, "skip_enabled", c.model.skip_enabled, "model");
    read(m, "alpha_init", c.model.alpha_init, "model");
    read(m, "warm_start", c.model.warm_start, "model");
  }
  c.model.num_features = static_cast<Eigen::Index>(c.schema.feature_columns.size());

  if (c.filter.n_min > c.filter.n_max || c.filter.n_min < 1)
    throw ConfigError("filter needs 1 <= n_min <= n_max");
  if (c.filter.p_max < 1) throw ConfigError("filter.p_max must be at least 1");
  if (c.train.t_short < 0 || c.train.t_full < 0 || c.train.t_short > c.train.t_full)
    throw ConfigError("train needs 0 <= t_short <= t_full");
  if (c.train.batch_size < 1) throw ConfigError("train.batch_size must be at least 1");
  if (c.model.hidden1 < 1 || c.model.hidden2 < 1) throw ConfigError("hidden sizes must be positive");
  if (c.model.num_features < 1) throw ConfigError("data.feature_columns is empty");
  if (c.preprocess.samples_per_class < 1) throw ConfigError("data.samples_per_class must be positive");
  if (c.workers < 1) throw ConfigError("workers must be at least 1");
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

std::string config_fingerprint(const RunConfig& cfg) {
  json j = config_to_json(cfg);
  j.erase("workers");
  j["paths"].erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(stable_hash(j.dump())));
  return buf;
}

}  // namespace qscreen
