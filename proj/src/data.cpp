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

#include "qscreen/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qscreen/errors.hpp"

namespace qscreen {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

double parse_number(std::string_view field, int line, std::string_view column) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || p != field.data() + field.size() || !std::isfinite(v)) {
    throw ParseError(line, "column " + std::string(column) + ": not a finite number '" +
                               std::string(field) + "'");
  }
  return v;
}

/// Rows of each class, in input order.
std::array<std::vector<Eigen::Index>, 2> rows_by_class(const Dataset& data) {
  std::array<std::vector<Eigen::Index>, 2> out;
  for (Eigen::Index i = 0; i < data.rows(); ++i) out[static_cast<std::size_t>(data.labels[i])].push_back(i);
  return out;
}

/// k nearest same-class neighbours of every member, ties broken by row id.
std::vector<std::vector<Eigen::Index>> nearest_neighbours(const Dataset& data,
                                                          const std::vector<Eigen::Index>& members,
                                                          int k) {
  std::vector<std::vector<Eigen::Index>> out(members.size());
  std::vector<std::pair<double, Eigen::Index>> dist;
  for (std::size_t a = 0; a < members.size(); ++a) {
    dist.clear();
    for (std::size_t b = 0; b < members.size(); ++b) {
      if (a == b) continue;
      dist.emplace_back(
          (data.features.row(members[a]) - data.features.row(members[b])).squaredNorm(),
          members[b]);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    for (int i = 0; i < k; ++i) out[a].push_back(dist[static_cast<std::size_t>(i)].second);
  }
  return out;
}

Eigen::Index rounded(double ratio, Eigen::Index m) {
  return static_cast<Eigen::Index>(std::llround(ratio * static_cast<double>(m)));
}

void check_ratios(const SplitRatios& r) {
  if (r.train < 0 || r.val < 0 || r.test < 0 || std::abs(r.train + r.val + r.test - 1.0) > 1e-9)
    throw RatioError("split ratios must be non-negative and sum to 1");
}

/// Keeps at most `cap` rows of each class, chosen uniformly; original order.
std::vector<Eigen::Index> cap_per_class(const Dataset& data, Eigen::Index cap, Rng& rng) {
  auto by_class = rows_by_class(data);
  std::vector<Eigen::Index> keep;
  for (auto& rows : by_class) {
    if (static_cast<Eigen::Index>(rows.size()) > cap) {
      shuffle(rows, rng);
      rows.resize(static_cast<std::size_t>(cap));
    }
    keep.insert(keep.end(), rows.begin(), rows.end());
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

std::vector<Eigen::Index> compose(const std::vector<Eigen::Index>& outer,
                                  const std::vector<Eigen::Index>& inner) {
  std::vector<Eigen::Index> out;
  out.reserve(inner.size());
  for (auto i : inner) out.push_back(outer[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace

Dataset Dataset::select(const std::vector<Eigen::Index>& rows) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
    out.labels[static_cast<Eigen::Index>(i)] = labels[rows[i]];
  }
  return out;
}

CsvSchema CsvSchema::credit_card() {
  CsvSchema s;
  for (int i = 1; i <= 28; ++i) s.feature_columns.push_back("V" + std::to_string(i));
  s.label_column = "Class";
  return s;
}

Dataset parse_csv(std::string_view text, const CsvSchema& schema) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      lines.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  std::size_t header_at = 0;
  while (header_at < lines.size() && trim(lines[header_at]).empty()) ++header_at;
  if (header_at == lines.size()) throw ParseError(1, "missing header row");

  const auto header = split_fields(lines[header_at]);
  const int header_line = static_cast<int>(header_at) + 1;
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError(header_line, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> feature_idx;
  for (const auto& name : schema.feature_columns) feature_idx.push_back(column(name));
  const std::size_t label_idx = column(schema.label_column);

  std::vector<double> values;
  std::vector<int> labels;
  for (std::size_t li = header_at + 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const int line = static_cast<int>(li) + 1;
    const auto fields = split_fields(lines[li]);
    if (fields.size() != header.size()) {
      throw ParseError(line, "expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < feature_idx.size(); ++c)
      values.push_back(parse_number(fields[feature_idx[c]], line, schema.feature_columns[c]));
    const double label = parse_number(fields[label_idx], line, schema.label_column);
    if (label != 0.0 && label != 1.0)
      throw LabelNotBinary(line, "label '" + std::string(fields[label_idx]) + "' is not 0 or 1");
    labels.push_back(static_cast<int>(label));
  }

  const auto n = static_cast<Eigen::Index>(labels.size());
  const auto f = static_cast<Eigen::Index>(feature_idx.size());
  Dataset d;
  d.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, f);
  d.labels = Eigen::Map<const Eigen::VectorXi>(labels.data(), n);
  return d;
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), schema);
}

SmoteResult smote_detailed(const Dataset& data, int k, Eigen::Index target_per_class, Rng& rng) {
  if (k < 1) throw InputError("SMOTE needs k >= 1");
  auto by_class = rows_by_class(data);
  for (const auto& rows : by_class) {
    const auto m = static_cast<Eigen::Index>(rows.size());
    if (m < target_per_class && m < k + 1) {
      throw TooFewMinoritySamples("class with " + std::to_string(m) + " rows cannot be oversampled with k=" +
                                  std::to_string(k));
    }
  }

  SmoteResult out;
  std::vector<Eigen::Index> keep;
  std::array<std::vector<std::vector<Eigen::Index>>, 2> neighbours;
  for (std::size_t c = 0; c < 2; ++c) {
    auto rows = by_class[c];
    if (static_cast<Eigen::Index>(rows.size()) > target_per_class) {
      shuffle(rows, rng);
      rows.resize(static_cast<std::size_t>(target_per_class));
    }
    keep.insert(keep.end(), rows.begin(), rows.end());
  }
  std::sort(keep.begin(), keep.end());
  out.source_rows = keep;

  for (std::size_t c = 0; c < 2; ++c) {
    const auto& members = by_class[c];
    const auto m = static_cast<Eigen::Index>(members.size());
    if (m >= target_per_class) continue;
    const auto nn = nearest_neighbours(data, members, k);
    for (Eigen::Index s = 0; s < target_per_class - m; ++s) {
      const std::size_t i = uniform_index(rng, members.size());
      const Eigen::Index neighbor = nn[i][uniform_index(rng, static_cast<std::size_t>(k))];
      out.synthetic.push_back({members[i], neighbor, uniform01(rng)});
    }
  }

  const auto total = static_cast<Eigen::Index>(keep.size() + out.synthetic.size());
  out.data.features.resize(total, data.num_features());
  out.data.labels.resize(total);
  Eigen::Index r = 0;
  for (auto i : keep) {
    out.data.features.row(r) = data.features.row(i);
    out.data.labels[r++] = data.labels[i];
  }
  for (const auto& s : out.synthetic) {
    out.data.features.row(r) =
        data.features.row(s.base) + s.u * (data.features.row(s.neighbor) - data.features.row(s.base));
    out.data.labels[r++] = data.labels[s.base];
    out.source_rows.push_back(-1);
  }
  return out;
}

Dataset smote(const Dataset& data, int k, Eigen::Index target_per_class, Rng& rng) {
  return smote_detailed(data, k, target_per_class, rng).data;
}

ScalerParams fit_minmax(const Dataset& data) {
  ScalerParams s;
  s.low = 0.0;
  s.high = std::numbers::pi;
  if (data.rows() == 0) {
    s.min = Eigen::VectorXd::Zero(data.num_features());
    s.max = s.min;
  } else {
    s.min = data.features.colwise().minCoeff().transpose();
    s.max = data.features.colwise().maxCoeff().transpose();
  }
  return s;
}

Dataset ScalerParams::transform(const Dataset& data, bool clamp) const {
  if (data.num_features() != min.size())
    throw ShapeMismatch("scaler fit on " + std::to_string(min.size()) + " features");
  Dataset out = data;
  for (Eigen::Index c = 0; c < data.num_features(); ++c) {
    const double range = max[c] - min[c];
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
      double v = range > 0 ? (data.features(r, c) - min[c]) / range * (high - low) + low : low;
      if (clamp) v = std::clamp(v, low, high);
      out.features(r, c) = v;
    }
  }
  return out;
}

std::pair<Dataset, ScalerParams> minmax_scale(const Dataset& data) {
  auto params = fit_minmax(data);
  return {params.transform(data), params};
}

SplitSet stratified_split(const Dataset& data, const SplitRatios& ratios, Rng& rng) {
  check_ratios(ratios);
  auto by_class = rows_by_class(data);
  SplitSet out;
  for (auto& rows : by_class) {
    shuffle(rows, rng);
    const auto m = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index n_train = std::min(rounded(ratios.train, m), m);
    const Eigen::Index n_val = std::min(rounded(ratios.val, m), m - n_train);
    auto at = rows.begin();
    out.train_rows.insert(out.train_rows.end(), at, at + n_train);
    at += n_train;
    out.val_rows.insert(out.val_rows.end(), at, at + n_val);
    at += n_val;
    out.test_rows.insert(out.test_rows.end(), at, rows.end());
  }
  out.train = data.select(out.train_rows);
  out.val = data.select(out.val_rows);
  out.test = data.select(out.test_rows);
  return out;
}

PreprocessResult preprocess(const Dataset& raw, const PreprocessConfig& cfg, Rng& rng) {
  check_ratios(cfg.ratios);
  PreprocessResult out;
  if (!cfg.split_first) {
    const auto balanced = smote(raw, cfg.smote_k, cfg.samples_per_class, rng);
    auto [scaled, scaler] = minmax_scale(balanced);
    out.scaler = scaler;
    out.split = stratified_split(scaled, cfg.ratios, rng);
    return out;
  }

  const auto raw_split = stratified_split(raw, cfg.ratios, rng);
  const auto train =
      smote_detailed(raw_split.train, cfg.smote_k, rounded(cfg.ratios.train, cfg.samples_per_class), rng);
  const auto val_keep = cap_per_class(raw_split.val, rounded(cfg.ratios.val, cfg.samples_per_class), rng);
  const auto test_keep = cap_per_class(raw_split.test, rounded(cfg.ratios.test, cfg.samples_per_class), rng);

  out.scaler = fit_minmax(train.data);
  out.split.train = out.scaler.transform(train.data, true);
  out.split.val = out.scaler.transform(raw_split.val.select(val_keep), true);
  out.split.test = out.scaler.transform(raw_split.test.select(test_keep), true);
  for (auto r : train.source_rows)
    out.split.train_rows.push_back(r < 0 ? -1 : raw_split.train_rows[static_cast<std::size_t>(r)]);
  out.split.val_rows = compose(raw_split.val_rows, val_keep);
  out.split.test_rows = compose(raw_split.test_rows, test_keep);
  return out;
}

void to_json(nlohmann::json& j, const ScalerParams& s) {
  j = {{"min", std::vector<double>(s.min.begin(), s.min.end())},
       {"max", std::vector<double>(s.max.begin(), s.max.end())},
       {"low", s.low},
       {"high", s.high}};
}

void from_json(const nlohmann::json& j, ScalerParams& s) {
  const auto mn = j.at("min").get<std::vector<double>>();
  const auto mx = j.at("max").get<std::vector<double>>();
  s.min = Eigen::Map<const Eigen::VectorXd>(mn.data(), static_cast<Eigen::Index>(mn.size()));
  s.max = Eigen::Map<const Eigen::VectorXd>(mx.data(), static_cast<Eigen::Index>(mx.size()));
  s.low = j.at("low").get<double>();
  s.high = j.at("high").get<double>();
}

void to_json(nlohmann::json& j, const Dataset& d) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(d.num_features()));
    for (Eigen::Index c = 0; c < d.num_features(); ++c) row[static_cast<std::size_t>(c)] = d.features(r, c);
    rows.push_back(std::move(row));
  }
  j = {{"features", std::move(rows)},
       {"labels", std::vector<int>(d.labels.begin(), d.labels.end())},
       {"num_features", d.num_features()}};
}

void from_json(const nlohmann::json& j, Dataset& d) {
  const auto labels = j.at("labels").get<std::vector<int>>();
  const auto f = j.at("num_features").get<Eigen::Index>();
  const auto& rows = j.at("features");
  if (rows.size() != labels.size()) throw ParseError(0, "dataset features and labels differ in length");
  d.features.resize(static_cast<Eigen::Index>(labels.size()), f);
  d.labels.resize(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const auto row = rows[r].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != f) throw ParseError(0, "ragged feature row");
    for (Eigen::Index c = 0; c < f; ++c) d.features(static_cast<Eigen::Index>(r), c) = row[static_cast<std::size_t>(c)];
    if (labels[r] != 0 && labels[r] != 1) throw LabelNotBinary(0, "label is not 0 or 1");
    d.labels[static_cast<Eigen::Index>(r)] = labels[r];
  }
}

void to_json(nlohmann::json& j, const SplitSet& s) {
  j = {{"train", {{"rows", s.train_rows}, {"data", s.train}}},
       {"val", {{"rows", s.val_rows}, {"data", s.val}}},
       {"test", {{"rows", s.test_rows}, {"data", s.test}}}};
}

void from_json(const nlohmann::json& j, SplitSet& s) {
  s.train_rows = j.at("train").at("rows").get<std::vector<Eigen::Index>>();
  s.val_rows = j.at("val").at("rows").get<std::vector<Eigen::Index>>();
  s.test_rows = j.at("test").at("rows").get<std::vector<Eigen::Index>>();
  s.train = j.at("train").at("data").get<Dataset>();
  s.val = j.at("val").at("data").get<Dataset>();
  s.test = j.at("test").at("data").get<Dataset>();
}

}  // namespace qscreen
