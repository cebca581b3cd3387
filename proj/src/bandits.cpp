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

#include "bitrade/bandits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bitrade/errors.hpp"

namespace bitrade {

std::size_t ucb1_select(std::span<const ArmStats> stats, std::size_t t) {
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (stats[i].pulls == 0) return i;
  }
  // sqrt(2 ln t / n) evaluated as sqrt(2 ln t) * (1 / sqrt(n)), matching Ucb1.
  const double scale = std::sqrt(2 * std::log(static_cast<double>(std::max<std::size_t>(t, 1))));
  std::size_t best = 0;
  double best_index = -1;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const double index = stats[i].mean_reward() +
                         scale * (1.0 / std::sqrt(static_cast<double>(stats[i].pulls)));
    if (index > best_index) {
      best_index = index;
      best = i;
    }
  }
  return best;
}

void Ucb1::init(std::size_t arms, std::size_t /*horizon*/) {
  if (arms == 0) throw ParameterError("bandit needs at least one arm");
  stats_.assign(arms, {});
  means_.assign(arms, 0.0);
  inv_sqrt_pulls_.assign(arms, 0.0);
  round_ = 0;
  unpulled_ = 0;
}

std::size_t Ucb1::select() {
  ++round_;
  if (unpulled_ < stats_.size()) return unpulled_;
  const double scale = std::sqrt(2 * std::log(static_cast<double>(round_)));
  std::size_t best = 0;
  double best_index = -1;
  for (std::size_t i = 0; i < means_.size(); ++i) {
    const double index = means_[i] + scale * inv_sqrt_pulls_[i];
    if (index > best_index) {
      best_index = index;
      best = i;
    }
  }
  return best;
}

void Ucb1::update(std::size_t arm, double reward) {
  auto& s = stats_.at(arm);
  s.record(reward);
  means_[arm] = s.mean_reward();
  inv_sqrt_pulls_[arm] = 1.0 / std::sqrt(static_cast<double>(s.pulls));
  while (unpulled_ < stats_.size() && stats_[unpulled_].pulls > 0) ++unpulled_;
}

void ActionElimination::init(std::size_t arms, std::size_t horizon) {
  if (arms == 0) throw ParameterError("bandit needs at least one arm");
  stats_.assign(arms, {});
  horizon_ = std::max<std::size_t>(horizon, 1);
  cursor_ = 0;
  active_.resize(arms);
  for (std::size_t i = 0; i < arms; ++i) active_[i] = i;
}

double ActionElimination::radius(std::size_t pulls) const {
  const double k = static_cast<double>(stats_.size());
  return std::sqrt(std::log(2 * k * static_cast<double>(horizon_)) /
                   (2 * static_cast<double>(pulls)));
}

std::size_t ActionElimination::select() { return active_[cursor_]; }

void ActionElimination::update(std::size_t arm, double reward) {
  stats_.at(arm).record(reward);
  if (++cursor_ < active_.size()) return;
  cursor_ = 0;
  eliminate();
}

void ActionElimination::eliminate() {
  if (active_.size() <= 1) return;
  // All active arms have the same pull count at the end of a pass.
  const double r = radius(stats_[active_.front()].pulls);
  double best_lower = -1;
  for (auto i : active_) best_lower = std::max(best_lower, stats_[i].mean_reward() - r);
  std::erase_if(active_, [&](std::size_t i) { return stats_[i].mean_reward() + r < best_lower; });
}

std::unique_ptr<BanditAlgorithm> make_bandit(std::string_view name) {
  if (name == "ucb1") return std::make_unique<Ucb1>();
  if (name == "action_elim") return std::make_unique<ActionElimination>();
  throw ParameterError("unknown bandit '" + std::string(name) + "' (expected ucb1 or action_elim)");
}

}  // namespace bitrade
