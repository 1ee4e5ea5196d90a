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

#include <cstddef>

#include <Eigen/Core>
#include <json.hpp>

namespace qscreen {

/// Fraud (label 1) is the positive class.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Predicts 1 iff prob >= threshold.
ConfusionCounts confusion(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels,
                          double threshold = 0.5);

/// Scores of the fraud class. Empty denominators give 0.
ClassScores fraud_scores(const ConfusionCounts& c);

/// Scores of the non-fraud class, i.e. with the roles of the labels swapped.
ClassScores non_fraud_scores(const ConfusionCounts& c);

double accuracy(const ConfusionCounts& c);

/// Mean of the two per-class F1 scores. Throws EmptyInput on zero samples.
double macro_f1(const ConfusionCounts& c);

/// Mann-Whitney AUC with midranks for ties. Throws SingleClassInput unless
/// both labels occur.
double roc_auc(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels);

struct EvalReport {
  ClassScores fraud;
  ClassScores non_fraud;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  /// NaN when the evaluated labels contain a single class.
  double roc_auc = 0.0;
  double threshold = 0.5;
  ConfusionCounts counts;
};

EvalReport evaluate(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels,
                    double threshold = 0.5);

void to_json(nlohmann::json& j, const ConfusionCounts& c);
void to_json(nlohmann::json& j, const ClassScores& s);
void to_json(nlohmann::json& j, const EvalReport& r);

}  // namespace qscreen
