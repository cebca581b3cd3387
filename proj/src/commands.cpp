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

#include "bitrade/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "bitrade/adversary.hpp"
#include "bitrade/harness.hpp"
#include "bitrade/io.hpp"

namespace bitrade {

namespace {

using nlohmann::json;

json diagnostics_json(const Learner& learner) {
  json j = json::object();
  for (const auto& [key, value] : learner.diagnostics()) j[key] = value;
  return j;
}

std::vector<double> price_grid(std::size_t n) {
  if (n == 0) throw ParameterError("grid size must be >= 1");
  if (n == 1) return {0.5};
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  grid.back() = 1.0;
  return grid;
}

}  // namespace

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
  if (config.output_dir) return *config.output_dir;
  if (const char* env = std::getenv("BITRADE_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return "bitrade_out";
}

void write_outputs(const CommandOutput& output, const std::filesystem::path& dir) {
  for (const auto& [name, content] : output.files) write_text_file(dir / name, content);
}

CommandOutput cmd_run(const ExperimentConfig& config) {
  const InstanceSpec& spec = require_instance(config);
  const MixtureDistribution dist = make_instance(spec);
  const LearnerFactory factory = make_learner_factory(config.learner, &dist);
  Environment env = Environment::iid(dist, describe(spec));
  if (config.feedback) env.with_feedback(*config.feedback);
  auto learner = factory();
  const Trajectory tr = run_episode(*learner, env, config.horizon, config.seed);
  const EpisodeSummary summary = summarize(tr, &dist);

  RegretReport report;
  report.learner = learner->name();
  report.instance = describe(spec);
  report.learner_gft = summary.learner_gft;
  if (!tr.rows.empty()) {
    report.hindsight_best_price = summary.hindsight.price;
    report.hindsight_best_total = summary.hindsight.total;
    report.hindsight_regret = summary.hindsight_regret;
  }
  report.pseudo_regret = summary.pseudo_regret;

  std::ostringstream csv;
  write_trajectory_csv(csv, tr);
  json j = to_json(report);
  j.erase("table");
  j.erase("fitted_exponent");
  j.erase("fitted_exponent_stderr");
  j["T"] = config.horizon;
  j["seed"] = config.seed;
  j["feedback"] = std::string(to_string(tr.feedback));
  j["diagnostics"] = diagnostics_json(*learner);
  j["trajectory_digest"] = hex_digest(csv.str());

  CommandOutput out;
  out.files.emplace_back("trajectory.csv", csv.str());
  out.files.emplace_back("report.json", j.dump(2) + "\n");
  out.summary = j;
  return out;
}

CommandOutput cmd_sweep(const ExperimentConfig& config) {
  const InstanceSpec& spec = require_instance(config);
  const MixtureDistribution dist = make_instance(spec);
  const LearnerFactory factory = make_learner_factory(config.learner, &dist);
  if (config.feedback) {
    const FeedbackKind required = factory()->required_feedback();
    if (!feedback_satisfies(*config.feedback, required)) {
      throw ContractError("learner requires " + std::string(to_string(required)) +
                          " feedback but the environment reveals only " +
                          std::string(to_string(*config.feedback)) + " feedback");
    }
  }
  SweepOptions options;
  options.horizons = config.horizons.empty() ? std::vector<std::size_t>{config.horizon} : config.horizons;
  options.replications = config.replications;
  options.base_seed = config.seed;
  options.jobs = config.jobs;
  const RegretReport report = sweep(factory, dist, options, describe(spec));

  std::ostringstream csv;
  write_sweep_csv(csv, report);
  json j = to_json(report);
  j["seed"] = config.seed;
  CommandOutput out;
  out.files.emplace_back("sweep.csv", csv.str());
  out.files.emplace_back("rate.json", j.dump(2) + "\n");
  out.summary = j;
  return out;
}

CommandOutput cmd_sweep_selftest() {
  RegretReport report;
  report.learner = "synthetic";
  report.instance = "R(T) = T^0.5";
  std::vector<double> xs, ys;
  for (std::size_t t : {1000, 3000, 10000, 30000, 100000}) {
    HorizonRow row;
    row.horizon = t;
    row.replications = 1;
    row.mean_pseudo_regret = std::sqrt(static_cast<double>(t));
    row.mean_hindsight_regret = row.mean_pseudo_regret;
    report.table.push_back(row);
    xs.push_back(static_cast<double>(t));
    ys.push_back(row.mean_pseudo_regret);
  }
  report.fit = fit_rate_exponent(xs, ys);
  std::ostringstream csv;
  write_sweep_csv(csv, report);
  CommandOutput out;
  out.ok = report.fit && std::abs(report.fit->exponent - 0.5) <= 1e-12;
  out.files.emplace_back("sweep.csv", csv.str());
  json j = to_json(report);
  j["selftest_passed"] = out.ok;
  out.files.emplace_back("rate.json", j.dump(2) + "\n");
  out.summary = j;
  return out;
}

CommandOutput cmd_oracle(const ExperimentConfig& config) {
  const InstanceSpec& spec = require_instance(config);
  const MixtureDistribution dist = make_instance(spec);
  std::vector<double> prices = price_grid(config.oracle.grid);
  const std::vector<double> breaks = gft_breakpoints(dist);
  const BestPrice best = best_fixed_price(dist);
  std::vector<double> all = prices;
  all.insert(all.end(), breaks.begin(), breaks.end());
  all.push_back(best.price);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  std::ostringstream csv;
  csv << "p,expected_gft,source\n";
  for (double p : all) {
    const bool on_grid = std::binary_search(prices.begin(), prices.end(), p);
    const char* source = p == best.price ? "best" : on_grid ? "grid" : "breakpoint";
    csv << format_real(p) << ',' << format_real(expected_gft(dist, Price(p))) << ',' << source << '\n';
  }
  json j = {{"instance", describe(spec)},
            {"grid", config.oracle.grid},
            {"rows", all.size()},
            {"best_price", best.price},
            {"best_value", best.value}};
  CommandOutput out;
  out.files.emplace_back("oracle.csv", csv.str());
  out.files.emplace_back("oracle.json", j.dump(2) + "\n");
  out.summary = j;
  return out;
}

MixtureDistribution perturbed_bd_linear_f() {
  std::vector<UniformRectangle> rects = bd_linear_instance(0.0).rectangles();
  rects.front().s_lo += 1.0 / 16.0;
  rects.front().s_hi += 1.0 / 16.0;
  return MixtureDistribution::mixture(rects, {});
}

CommandOutput cmd_indist(const ExperimentConfig& config) {
  constexpr double kTolerance = 1e-12;
  const MixtureDistribution f = config.indist.perturb ? perturbed_bd_linear_f() : bd_linear_instance(0.0);
  const MixtureDistribution g = bd_linear_instance(1.0);
  double worst = 0, worst_price = 0;
  for (double p : price_grid(config.indist.grid)) {
    const FeedbackLaw a = feedback_law(f, Price(p)), b = feedback_law(g, Price(p));
    for (std::size_t k = 0; k < 4; ++k) {
      const double dev = std::abs(a.probabilities[k] - b.probabilities[k]);
      if (dev > worst) {
        worst = dev;
        worst_price = p;
      }
    }
  }
  const bool same = worst <= kTolerance;
  json j = {{"grid", config.indist.grid},
            {"perturbed", config.indist.perturb},
            {"max_abs_deviation", worst},
            {"worst_price", worst_price},
            {"tolerance", kTolerance},
            {"verdict", same ? "indistinguishable" : "distinguishable"}};
  CommandOutput out;
  out.files.emplace_back("indist.json", j.dump(2) + "\n");
  out.summary = j;
  return out;
}

CommandOutput cmd_adversary(const ExperimentConfig& config) {
  AdversaryOptions options;
  options.horizon = config.horizon;
  options.epsilon = config.adversary.epsilon;
  options.probe_samples = config.adversary.probe_samples;
  options.seed = config.seed;
  options.replay_probe = config.adversary.replay_probe;
  const AdversaryOutcome outcome = run_exact_adversarial_episode(config.learner, options);
  std::ostringstream csv;
  write_trajectory_csv(csv, outcome.trajectory);
  json j = to_json(outcome.report);
  j["seed"] = config.seed;
  CommandOutput out;
  out.files.emplace_back("adversary_trajectory.csv", csv.str());
  out.files.emplace_back("adversary.json", j.dump(2) + "\n");
  out.summary = j;
  return out;
}

CommandOutput cmd_selftest() {
  json checks = json::array();
  bool all = true;
  const auto check = [&](const std::string& name, bool pass, double observed, double expected) {
    checks.push_back({{"check", name}, {"pass", pass}, {"observed", observed}, {"expected", expected}});
    all = all && pass;
  };

  const MixtureDistribution uniform = uniform_instance();
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double v = expected_gft(uniform, Price(p));
    check("uniform expected gft at " + format_real(p), std::abs(v - p * (1 - p) / 2) <= 1e-15, v,
          p * (1 - p) / 2);
  }
  const MixtureDistribution needle = needle_instance(0.5);
  check("needle(0.5) at 0.5", expected_gft(needle, Price(0.5)) == 0.5, expected_gft(needle, Price(0.5)), 0.5);
  check("needle(0.5) at 0.3", expected_gft(needle, Price(0.3)) == 0.375, expected_gft(needle, Price(0.3)), 0.375);
  const MixtureDistribution f = bd_linear_instance(0.0);
  check("bd_linear(0) at 3/8", std::abs(expected_gft(f, Price(0.375)) - 1.0 / 3.0) <= 1e-15,
        expected_gft(f, Price(0.375)), 1.0 / 3.0);
  check("bd_linear(0) at 5/8", std::abs(expected_gft(f, Price(0.625)) - 0.25) <= 1e-15,
        expected_gft(f, Price(0.625)), 0.25);

  const CommandOutput fit = cmd_sweep_selftest();
  check("synthetic rate fit", fit.ok, fit.summary["fitted_exponent"].get<double>(), 0.5);

  ExperimentConfig config;
  config.instance = InstanceSpec{};
  config.horizon = 200;
  config.seed = 7;
  const std::string first = cmd_run(config).files.front().second;
  const std::string second = cmd_run(config).files.front().second;
  check("run determinism", first == second, static_cast<double>(first.size()),
        static_cast<double>(second.size()));

  CommandOutput out;
  out.ok = all;
  out.summary = {{"checks", checks}, {"passed", all}};
  out.files.emplace_back("selftest.json", out.summary.dump(2) + "\n");
  return out;
}

}  // namespace bitrade
