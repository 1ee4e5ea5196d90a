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

#include "qscreen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "qscreen/errors.hpp"

namespace qscreen {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassScores scores(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassScores s;
  s.precision = ratio(tp, tp + fp);
  s.recall = ratio(tp, tp + fn);
  s.f1 = ratio(2 * tp, 2 * tp + fp + fn);
  return s;
}

void check_lengths(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels) {
  if (probs.size() != labels.size()) {
    throw LengthMismatch(std::to_string(probs.size()) + " scores for " +
                         std::to_string(labels.size()) + " labels");
  }
}

}  // namespace

ConfusionCounts confusion(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels,
                          double threshold) {
  check_lengths(probs, labels);
  ConfusionCounts c;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const bool predicted = probs[i] >= threshold;
    const bool actual = labels[i] == 1;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

ClassScores fraud_scores(const ConfusionCounts& c) { return scores(c.tp, c.fp, c.fn); }

ClassScores non_fraud_scores(const ConfusionCounts& c) { return scores(c.tn, c.fn, c.fp); }

double accuracy(const ConfusionCounts& c) { return ratio(c.tp + c.tn, c.total()); }

double macro_f1(const ConfusionCounts& c) {
  if (c.total() == 0) throw EmptyInput("macro-F1 of zero samples");
  return (fraud_scores(c).f1 + non_fraud_scores(c).f1) / 2;
}

double roc_auc(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels) {
  check_lengths(probs, labels);
  const auto n = static_cast<std::size_t>(probs.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return probs[static_cast<Eigen::Index>(a)] < probs[static_cast<Eigen::Index>(b)];
  });

  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && probs[static_cast<Eigen::Index>(order[j])] ==
                        probs[static_cast<Eigen::Index>(order[i])])
      ++j;
    // 1-based ranks i+1 .. j share their mean
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[static_cast<Eigen::Index>(order[k])] == 1) {
        positive_rank_sum += midrank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) throw SingleClassInput("ROC-AUC needs both classes");
  const double np = static_cast<double>(positives);
  return (positive_rank_sum - np * (np + 1) / 2) / (np * static_cast<double>(negatives));
}

EvalReport evaluate(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels,
                    double threshold) {
  EvalReport r;
  r.threshold = threshold;
  r.counts = confusion(probs, labels, threshold);
  r.fraud = fraud_scores(r.counts);
  r.non_fraud = non_fraud_scores(r.counts);
  r.accuracy = accuracy(r.counts);
  r.macro_f1 = macro_f1(r.counts);
  const auto positives = (labels.array() == 1).count();
  r.roc_auc = (positives == 0 || positives == labels.size())
                  ? std::numeric_limits<double>::quiet_NaN()
                  : roc_auc(probs, labels);
  return r;
}

void to_json(nlohmann::json& j, const ConfusionCounts& c) {
  j = {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

void to_json(nlohmann::json& j, const ClassScores& s) {
  j = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

void to_json(nlohmann::json& j, const EvalReport& r) {
  j = {{"fraud", r.fraud},
       {"non_fraud", r.non_fraud},
       {"accuracy", r.accuracy},
       {"macro_f1", r.macro_f1},
       {"roc_auc", std::isnan(r.roc_auc) ? nlohmann::json(nullptr) : nlohmann::json(r.roc_auc)},
       {"threshold", r.threshold},
       {"confusion", r.counts}};
}

}  // namespace qscreen
