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

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace bitrade {

struct ArmStats {
  std::size_t pulls = 0;
  double reward_sum = 0;

  double mean_reward() const { return pulls == 0 ? 0.0 : reward_sum / static_cast<double>(pulls); }
  void record(double reward) {
    ++pulls;
    reward_sum += reward;
  }
};

// Stochastic K-armed bandit with rewards in [0,1]. select() and update() must
// alternate; selection is deterministic given the update history.
class BanditAlgorithm {
 public:
  virtual ~BanditAlgorithm() = default;

  virtual void init(std::size_t arms, std::size_t horizon) = 0;
  virtual std::size_t select() = 0;
  virtual void update(std::size_t arm, double reward) = 0;
  virtual std::string_view name() const = 0;

  const std::vector<ArmStats>& stats() const { return stats_; }

 protected:
  std::vector<ArmStats> stats_;
};

// UCB1 index rule for round t (1-based): unpulled arms first in index order,
// then argmax of mean + sqrt(2 ln t / pulls); lowest index wins ties.
std::size_t ucb1_select(std::span<const ArmStats> stats, std::size_t t);

class Ucb1 final : public BanditAlgorithm {
 public:
  void init(std::size_t arms, std::size_t horizon) override;
  std::size_t select() override;
  void update(std::size_t arm, double reward) override;
  std::string_view name() const override { return "ucb1"; }

 private:
  std::size_t round_ = 0;
  std::size_t unpulled_ = 0;
  // Cached per-arm terms so the index scan is a fused multiply-add.
  std::vector<double> means_;
  std::vector<double> inv_sqrt_pulls_;
};

// Round-robin over the active set; after every full pass, arms whose upper
// confidence bound falls below the best lower bound are dropped. The radius
// is sqrt(ln(2 K H) / (2 n)) for n pulls per active arm and horizon H.
class ActionElimination final : public BanditAlgorithm {
 public:
  void init(std::size_t arms, std::size_t horizon) override;
  std::size_t select() override;
  void update(std::size_t arm, double reward) override;
  std::string_view name() const override { return "action_elim"; }

  const std::vector<std::size_t>& active() const { return active_; }
  double radius(std::size_t pulls) const;

 private:
  void eliminate();

  std::size_t horizon_ = 1;
  std::size_t cursor_ = 0;
  std::vector<std::size_t> active_;
};

std::unique_ptr<BanditAlgorithm> make_bandit(std::string_view name);

}  // namespace bitrade
