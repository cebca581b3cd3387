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

// bitrade: command-line driver for the bilateral trade simulator.
//
//   bitrade run       --config exp.json --set learner.name=sb --horizon 10000
//   bitrade sweep     --config exp.json [--selftest]
//   bitrade oracle    --instance needle --set instance.x=0.5
//   bitrade indist    [--set indist.perturb=true]
//   bitrade adversary --learner fbp --set adversary.epsilon=0.05 --horizon 10000
//   bitrade selftest
//
// Exit codes: 0 success, 1 failed self-check, 2 configuration or parameter
// error, 3 feedback-contract violation.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bitrade/commands.hpp"
#include "bitrade/errors.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::size_t> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  std::optional<unsigned> jobs;
  std::optional<std::string> out;
  std::optional<std::string> learner;
  std::optional<std::string> instance;
  bool selftest = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("-c,--config", f.config_path, "JSON experiment config");
  cmd->add_option("-s,--set", f.overrides, "override a config key, e.g. learner.name=sb")
      ->take_all();
  cmd->add_option("-T,--horizon", f.horizon, "horizon T");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("-r,--replications", f.replications, "replications per horizon");
  cmd->add_option("-j,--jobs", f.jobs, "worker threads");
  cmd->add_option("-o,--out", f.out, "output directory (default $BITRADE_OUTPUT_DIR or bitrade_out)");
  cmd->add_option("--learner", f.learner, "learner name: fbp, sb, fixed, uniform");
  cmd->add_option("--instance", f.instance, "instance name: uniform, sqrt_lower, two_third, bd_linear, needle");
  cmd->add_flag("-q,--quiet", f.quiet, "do not print the summary");
}

bitrade::ExperimentConfig build_config(const Flags& f) {
  bitrade::ExperimentConfig config;
  if (!f.config_path.empty()) config = bitrade::load_config(f.config_path);
  // Name flags go first so that --set can then fill in their parameters.
  if (f.instance) bitrade::apply_override(config, "instance.name=\"" + *f.instance + "\"");
  if (f.learner) bitrade::apply_override(config, "learner.name=\"" + *f.learner + "\"");
  for (const auto& assignment : f.overrides) bitrade::apply_override(config, assignment);
  if (f.horizon) config.horizon = *f.horizon;
  if (f.seed) config.seed = *f.seed;
  if (f.replications) config.replications = *f.replications;
  if (f.jobs) config.jobs = *f.jobs;
  if (f.out) config.output_dir = *f.out;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regret minimization in repeated bilateral trade"};
  app.require_subcommand(1);
  Flags flags;
  auto* run = app.add_subcommand("run", "one episode: trajectory CSV and regret report");
  auto* sweep = app.add_subcommand("sweep", "horizon sweep with replications and rate fit");
  auto* oracle = app.add_subcommand("oracle", "expected-GFT curve of an instance");
  auto* indist = app.add_subcommand("indist", "feedback-law comparison of the two bd_linear densities");
  auto* adversary = app.add_subcommand("adversary", "nested-interval adversary against a learner");
  auto* selftest = app.add_subcommand("selftest", "closed-form sanity checks");
  for (auto* cmd : {run, sweep, oracle, indist, adversary, selftest}) add_common(cmd, flags);
  sweep->add_flag("--selftest", flags.selftest, "fit the synthetic T^0.5 table instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const bitrade::ExperimentConfig config = build_config(flags);
    bitrade::CommandOutput output;
    if (run->parsed()) {
      output = bitrade::cmd_run(config);
    } else if (sweep->parsed()) {
      output = flags.selftest ? bitrade::cmd_sweep_selftest() : bitrade::cmd_sweep(config);
    } else if (oracle->parsed()) {
      output = bitrade::cmd_oracle(config);
    } else if (indist->parsed()) {
      output = bitrade::cmd_indist(config);
    } else if (adversary->parsed()) {
      output = bitrade::cmd_adversary(config);
    } else {
      output = bitrade::cmd_selftest();
    }
    const auto dir = bitrade::resolve_output_dir(config);
    bitrade::write_outputs(output, dir);
    if (!flags.quiet) std::cout << output.summary.dump(2) << "\n";
    return output.ok ? 0 : 1;
  } catch (const bitrade::ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 3;
  } catch (const bitrade::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const bitrade::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
