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

#include "bitrade/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bitrade/errors.hpp"

namespace bitrade {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (x == 0) return "0";  // also folds -0
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), x, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,price,s,b,gft,seller_accepts,buyer_accepts\n";
  for (const auto& row : trajectory.rows) {
    out << row.t << ',' << format_real(row.price) << ',' << format_real(row.s) << ','
        << format_real(row.b) << ',' << format_real(row.gft) << ',' << (row.seller_accepts ? 1 : 0)
        << ',' << (row.buyer_accepts ? 1 : 0) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const RegretReport& report) {
  out << "T,replications,mean_learner_gft,mean_hindsight_regret,mean_pseudo_regret,stderr,"
         "stderr_hindsight_regret\n";
  for (const auto& row : report.table) {
    out << row.horizon << ',' << row.replications << ',' << format_real(row.mean_learner_gft) << ','
        << format_real(row.mean_hindsight_regret) << ',' << format_real(row.mean_pseudo_regret) << ','
        << format_real(row.stderr_pseudo_regret) << ',' << format_real(row.stderr_hindsight_regret)
        << '\n';
  }
}

namespace {

nlohmann::json optional_number(const std::optional<double>& x) {
  if (!x || std::isnan(*x)) return nullptr;
  return *x;
}

nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nullptr; }

}  // namespace

nlohmann::json to_json(const RegretReport& report) {
  nlohmann::json j;
  j["learner"] = report.learner;
  j["instance"] = report.instance;
  j["learner_gft"] = optional_number(report.learner_gft);
  j["hindsight_best_price"] = optional_number(report.hindsight_best_price);
  j["hindsight_best_total"] = optional_number(report.hindsight_best_total);
  j["hindsight_regret"] = optional_number(report.hindsight_regret);
  j["pseudo_regret"] = optional_number(report.pseudo_regret);
  nlohmann::json table = nlohmann::json::array();
  for (const auto& row : report.table) {
    table.push_back({{"T", row.horizon},
                     {"replications", row.replications},
                     {"mean_learner_gft", row.mean_learner_gft},
                     {"mean_hindsight_regret", row.mean_hindsight_regret},
                     {"mean_pseudo_regret", row.mean_pseudo_regret},
                     {"stderr", number_or_null(row.stderr_pseudo_regret)},
                     {"stderr_hindsight_regret", number_or_null(row.stderr_hindsight_regret)}});
  }
  j["table"] = table;
  if (report.fit) {
    j["fitted_exponent"] = report.fit->exponent;
    j["fitted_exponent_stderr"] = number_or_null(report.fit->stderr_exponent);
    j["fitted_intercept"] = report.fit->intercept;
  } else {
    j["fitted_exponent"] = nullptr;
    j["fitted_exponent_stderr"] = nullptr;
  }
  return j;
}

nlohmann::json to_json(const AdversaryReport& r) {
  return {{"learner", r.learner},
          {"epsilon", r.epsilon},
          {"T", r.horizon},
          {"probe_samples", r.probe_samples},
          {"probe_exact", r.probe_exact},
          {"precision_bits", r.precision_bits},
          {"learner_gft", r.learner_gft},
          {"benchmark_price", r.benchmark_price},
          {"benchmark_gft", r.benchmark_gft},
          {"benchmark_gap", r.benchmark_gap},
          {"hindsight_best_price", r.hindsight_best_price},
          {"hindsight_best_total", r.hindsight_best_total},
          {"regret", r.regret},
          {"bound", r.bound},
          {"probe_stderr", r.probe_stderr},
          {"tolerance", r.tolerance},
          {"guarantee", r.probe_exact ? "exact" : "approximate"},
          {"guarantee_met", r.guarantee_met},
          {"low_branch_rounds", r.low_branch_rounds}};
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::string_view bytes) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << fnv1a64(bytes);
  return out.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

}  // namespace bitrade
