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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "qscreen/rng.hpp"

namespace qscreen {

struct Dataset {
  Eigen::MatrixXd features;  ///< N x f
  Eigen::VectorXi labels;    ///< N, values in {0, 1}

  Eigen::Index rows() const noexcept { return features.rows(); }
  Eigen::Index num_features() const noexcept { return features.cols(); }
  Eigen::Index count(int label) const { return (labels.array() == label).count(); }

  Dataset select(const std::vector<Eigen::Index>& rows) const;
};

struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::string label_column = "Class";

  /// V1..V28 and Class, as in the public credit-card fraud dataset.
  static CsvSchema credit_card();
};

/// Header row, comma separated; fields may be double-quoted.
Dataset parse_csv(std::string_view text, const CsvSchema& schema);
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Where a synthetic SMOTE row came from, as rows of the input dataset.
struct SyntheticOrigin {
  Eigen::Index base = 0;
  Eigen::Index neighbor = 0;
  double u = 0.0;
};

struct SmoteResult {
  Dataset data;
  /// For every output row, its input row, or -1 for synthetic rows.
  std::vector<Eigen::Index> source_rows;
  /// Parents of the synthetic rows, in output order.
  std::vector<SyntheticOrigin> synthetic;
};

/// Resamples both classes to exactly `target_per_class` rows: classes above
/// the target are downsampled without replacement, classes below it are
/// topped up with x_i + u (x_nn - x_i), x_nn one of the k nearest same-class
/// neighbours (Euclidean, exact). Kept input rows come first in their
/// original order, synthetic rows after.
SmoteResult smote_detailed(const Dataset& data, int k, Eigen::Index target_per_class, Rng& rng);

Dataset smote(const Dataset& data, int k, Eigen::Index target_per_class, Rng& rng);

struct ScalerParams {
  Eigen::VectorXd min;
  Eigen::VectorXd max;
  double low = 0.0;
  double high = 0.0;  ///< pi unless built by hand

  /// (x - min) / (max - min) mapped onto [low, high]; constant features map
  /// to `low`. With `clamp`, results outside the interval are clipped.
  Dataset transform(const Dataset& data, bool clamp = false) const;
};

ScalerParams fit_minmax(const Dataset& data);

/// Fits on `data` and transforms it onto [0, pi].
std::pair<Dataset, ScalerParams> minmax_scale(const Dataset& data);

struct SplitRatios {
  double train = 0.6;
  double val = 0.1;
  double test = 0.3;
};

struct SplitSet {
  Dataset train;
  Dataset val;
  Dataset test;
  /// Row ids behind each split (meaning depends on the producer, -1 for
  /// synthetic rows).
  std::vector<Eigen::Index> train_rows;
  std::vector<Eigen::Index> val_rows;
  std::vector<Eigen::Index> test_rows;
};

/// Per class: shuffle, then cut at round(train * m) and round(val * m).
SplitSet stratified_split(const Dataset& data, const SplitRatios& ratios, Rng& rng);

struct PreprocessConfig {
  Eigen::Index samples_per_class = 10000;
  int smote_k = 5;
  SplitRatios ratios;
  /// Split before SMOTE and scaling, so only training rows are resampled and
  /// the scaler is fit on training rows alone.
  bool split_first = false;
};

struct PreprocessResult {
  SplitSet split;
  ScalerParams scaler;
};

PreprocessResult preprocess(const Dataset& raw, const PreprocessConfig& cfg, Rng& rng);

void to_json(nlohmann::json& j, const ScalerParams& s);
void from_json(const nlohmann::json& j, ScalerParams& s);
void to_json(nlohmann::json& j, const Dataset& d);
void from_json(const nlohmann::json& j, Dataset& d);
void to_json(nlohmann::json& j, const SplitSet& s);
void from_json(const nlohmann::json& j, SplitSet& s);

}  // namespace qscreen
