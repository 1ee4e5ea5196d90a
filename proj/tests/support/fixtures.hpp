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

// Small datasets, circuits and scratch directories shared by the tests.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Core>

#include "qscreen/data.hpp"
#include "qscreen/qasm.hpp"
#include "qscreen/rng.hpp"

namespace qscreen::testing {

/// Two Gaussian blobs, means -0.6 and +0.6 along every feature, sd 0.5,
/// then squashed into [0, pi] the same way the scaler would.
inline Dataset separable_blobs(Eigen::Index per_class, Eigen::Index features, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.features.resize(2 * per_class, features);
  d.labels.resize(2 * per_class);
  for (Eigen::Index r = 0; r < 2 * per_class; ++r) {
    const int label = r % 2;
    d.labels[r] = label;
    for (Eigen::Index c = 0; c < features; ++c) {
      const double v = (label ? 0.6 : -0.6) + 0.5 * standard_normal(rng);
      d.features(r, c) = std::clamp((v + 2.0) / 4.0, 0.0, 1.0) * 3.141592653589793;
    }
  }
  return d;
}

/// 200/40/60 rows, balanced, 28 features.
inline SplitSet separable_split(std::uint64_t seed = 11) {
  SplitSet s;
  s.train = separable_blobs(100, 28, seed);
  s.val = separable_blobs(20, 28, seed + 1);
  s.test = separable_blobs(30, 28, seed + 2);
  return s;
}

inline std::string ring_qasm(int n, int layers) {
  std::ostringstream q;
  q << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << n << "];\n";
  for (int l = 0; l < layers; ++l) {
    for (int k = 0; k < n; ++k) q << "ry(" << 0.1 * (k + 1) << ") q[" << k << "];\n";
    for (int k = 0; k + 1 < n; ++k) q << "cx q[" << k << "],q[" << k + 1 << "];\n";
  }
  return q.str();
}

/// Three small candidates for end-to-end runs.
inline std::vector<std::pair<std::string, std::string>> toy_corpus() {
  return {
      {"toy_a", ring_qasm(3, 1)},
      {"toy_b",
       "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\nh q[0];\nrz(0.2) q[1];\n"
       "cz q[0],q[2];\nry(0.4) q[2];\n"},
      {"toy_c", ring_qasm(4, 2)},
  };
}

inline CircuitIR parse_marked(const std::string& text, const std::string& id) {
  return mark_trainable(parse_qasm(text, id), default_trainable_set());
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Fresh directory under the system temp dir; removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("qscreen_" + tag + "_" + std::to_string(rd()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Unscaled separable data, 60 legit / 15 fraud rows, 28 features.
inline Dataset raw_fixture(std::uint64_t seed = 21) {
  Rng rng(seed);
  Dataset d;
  d.features.resize(75, 28);
  d.labels.resize(75);
  for (Eigen::Index r = 0; r < 75; ++r) {
    d.labels[r] = r < 60 ? 0 : 1;
    for (Eigen::Index c = 0; c < 28; ++c) d.features(r, c) = standard_normal(rng) + (r < 60 ? -1.5 : 1.5);
  }
  return d;
}

/// Dataset as CSV with the credit-card column layout.
inline std::string to_csv(const Dataset& d) {
  std::ostringstream s;
  s.precision(17);
  s << "Time";
  for (Eigen::Index c = 0; c < d.num_features(); ++c) s << ",V" << c + 1;
  s << ",Amount,Class\n";
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    s << r;
    for (Eigen::Index c = 0; c < d.num_features(); ++c) s << ',' << d.features(r, c);
    s << ",1.0," << d.labels[r] << '\n';
  }
  return s.str();
}

}  // namespace qscreen::testing
