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
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bitrade/adversary.hpp"
#include "bitrade/harness.hpp"

namespace bitrade {

// Locale-independent, 17 significant digits; round-trips every double.
std::string format_real(double x);

// Columns t,price,s,b,gft,seller_accepts,buyer_accepts; booleans as 0/1.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
// Columns T,replications,mean_learner_gft,mean_hindsight_regret,
// mean_pseudo_regret,stderr,stderr_hindsight_regret.
void write_sweep_csv(std::ostream& out, const RegretReport& report);

nlohmann::json to_json(const RegretReport& report);
nlohmann::json to_json(const AdversaryReport& report);

// FNV-1a over bytes; stable across platforms, used for determinism digests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex_digest(std::string_view bytes);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace bitrade
