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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bitrade/instances.hpp"
#include "bitrade/learners.hpp"

namespace bitrade {

struct AdversaryConfig {
  double epsilon = 0.05;
  std::optional<std::size_t> probe_samples;
  bool replay_probe = false;

  friend bool operator==(const AdversaryConfig&, const AdversaryConfig&) = default;
};

struct OracleConfig {
  std::size_t grid = 101;

  friend bool operator==(const OracleConfig&, const OracleConfig&) = default;
};

struct IndistConfig {
  std::size_t grid = 10000;
  bool perturb = false;  // shift one square of f by 1/16 (control run)

  friend bool operator==(const IndistConfig&, const IndistConfig&) = default;
};

// Everything a command needs. The file format is JSON; see README for the
// schema. Keys that do not apply (e.g. "lambda" for a uniform instance) are
// rejected like unknown keys.
struct ExperimentConfig {
  std::optional<InstanceSpec> instance;
  LearnerSpec learner;
  std::size_t horizon = 1000;
  std::vector<std::size_t> horizons;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::optional<std::string> output_dir;
  std::optional<FeedbackKind> feedback;  // what the environment reveals
  AdversaryConfig adversary;
  OracleConfig oracle;
  IndistConfig indist;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies "a.b.c=value". The value is read as JSON when it parses as JSON and
// as a string otherwise, so both learner.name=sb and horizon=500 work.
void apply_override(ExperimentConfig& config, std::string_view assignment);

const InstanceSpec& require_instance(const ExperimentConfig& config);

}  // namespace bitrade
