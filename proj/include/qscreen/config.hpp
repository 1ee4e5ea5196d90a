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
#include <string>

#include <json.hpp>

#include "qscreen/data.hpp"
#include "qscreen/hybrid.hpp"
#include "qscreen/screening.hpp"

namespace qscreen {

/// Everything a pipeline run depends on.
struct RunConfig {
  std::filesystem::path data_csv;
  std::filesystem::path corpus_dir;
  std::filesystem::path output_dir;
  CsvSchema schema = CsvSchema::credit_card();
  PreprocessConfig preprocess;
  FilterConfig filter;
  TrainConfig train;
  HybridConfig model;  ///< num_features follows schema.feature_columns
  std::uint64_t seed = 42;
  int workers = 1;
};

nlohmann::json config_to_json(const RunConfig& cfg);

/// Missing keys keep their defaults; unknown keys and bad values throw
/// ConfigError. Relative paths resolve against `base_dir`.
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path);

/// Hex FNV-1a hash of the canonical (sorted-key, compact) config JSON.
/// The worker count and the output directory are left out: neither changes
/// any artifact.
std::string config_fingerprint(const RunConfig& cfg);

}  // namespace qscreen
