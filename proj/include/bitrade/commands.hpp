// Copyright 2026 The bitrade Authors.
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
#include <utility>
#include <vector>

#include <json.hpp>

#include "bitrade/config.hpp"

namespace bitrade {

// Files a command produces (name relative to the output directory, content)
// plus a summary printed on stdout.
struct CommandOutput {
  std::vector<std::pair<std::string, std::string>> files;
  nlohmann::json summary;
  bool ok = true;  // false only for self-checks that failed
};

CommandOutput cmd_run(const ExperimentConfig& config);
CommandOutput cmd_sweep(const ExperimentConfig& config);
// Fits the synthetic table R(T) = T^0.5 and reports the exponent.
CommandOutput cmd_sweep_selftest();
CommandOutput cmd_oracle(const ExperimentConfig& config);
CommandOutput cmd_indist(const ExperimentConfig& config);
CommandOutput cmd_adversary(const ExperimentConfig& config);
// Quick end-to-end checks against closed-form values.
CommandOutput cmd_selftest();

// Output directory: config.output_dir, else $BITRADE_OUTPUT_DIR, else
// "bitrade_out".
std::filesystem::path resolve_output_dir(const ExperimentConfig& config);
void write_outputs(const CommandOutput& output, const std::filesystem::path& dir);

// The rectangles of bd_linear(0) with its first square moved right by 1/16.
MixtureDistribution perturbed_bd_linear_f();

}  // namespace bitrade
