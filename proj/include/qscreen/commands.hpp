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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qscreen/config.hpp"
#include "qscreen/metrics.hpp"
#include "qscreen/screening.hpp"

namespace qscreen::cli {

/// Loads the data CSV, balances, scales and splits it. Writes split.json and
/// scaler.json.
PreprocessResult cmd_preprocess(const RunConfig& cfg, std::ostream& log);

/// Filters the corpus. Writes filter_report.json and prints counts per reason.
FilterResult cmd_filter(const RunConfig& cfg, std::ostream& log);

/// Short-trains every accepted circuit, smallest qubit count first. Writes
/// screening_records.json (best first), checkpoints and screening curves.
std::vector<ScreeningRecord> cmd_screen(const RunConfig& cfg, std::ostream& log);

/// Fully trains the screening winner, or `circuit` when given, and writes
/// final_report.json.
FullTrainResult cmd_train(const RunConfig& cfg, const std::optional<std::string>& circuit,
                          std::ostream& log);

/// preprocess, filter, screen, train.
FullTrainResult cmd_run_all(const RunConfig& cfg, const std::optional<std::string>& circuit,
                            std::ostream& log);

/// Entry point of the `qscreen` executable. Exit code 0 on success, 1 on
/// configuration or data errors, 2 on internal errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qscreen::cli
