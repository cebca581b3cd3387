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

#include "bitrade/learners.hpp"

#include <cmath>

namespace bitrade {
namespace {

// Ceiling that ignores relative rounding noise below 1e-12, so that e.g.
// 1 / 1000^(-1/3) = 10 (up to rounding) gives 10, not 11.
std::size_t robust_ceil(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, std::abs(x))) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace

SbState sb_configure(double density_bound, std::size_t horizon, std::optional<double> epsilon,
                     std::string_view bandit) {
  if (!(density_bound >= 1)) throw ParameterError("density bound M must be >= 1");
  if (horizon < 1) throw ParameterError("scouting bandits needs a horizon T >= 1");
  SbState state;
  state.density_bound = density_bound;
  state.horizon = horizon;
  state.epsilon = epsilon.value_or(1.0 / std::cbrt(static_cast<double>(horizon)));
  if (!(state.epsilon > 0)) throw ParameterError("epsilon must be > 0");
  const double cbrt_m = std::cbrt(density_bound);
  state.ell = cbrt_m * cbrt_m;
  state.delta = state.epsilon * cbrt_m;
  state.arms = std::max<std::size_t>(1, robust_ceil(state.ell / state.epsilon));
  const double k = static_cast<double>(state.arms);
  const double t0 = std::log(4 * k / state.delta) / (2 * state.epsilon * state.epsilon);
  state.scouting_rounds = std::min(horizon, std::max<std::size_t>(1, robust_ceil(t0)));
  state.grid.resize(state.arms);
  const double spacing = state.epsilon / state.ell;
  for (std::size_t i = 0; i < state.arms; ++i) state.grid[i] = static_cast<double>(i) * spacing;
  state.seller_integral.assign(state.arms, 0.0);
  state.buyer_integral.assign(state.arms, 0.0);
  state.bandit = make_bandit(bandit);
  state.phase = SbPhase::kScouting;
  return state;
}

Price sb_act(SbState& state, std::size_t round, double u) {
  if (round <= state.scouting_rounds || state.phase == SbPhase::kScouting) return Price(u);
  state.current_arm = state.bandit->select();
  return Price(state.grid[state.current_arm]);
}

void sb_observe(SbState& state, std::size_t round, Price posted, const RealisticFeedback& fb) {
  if (state.phase == SbPhase::kScouting) {
    const double p = posted.value();
    for (std::size_t i = 0; i < state.arms; ++i) {
      const double q = state.grid[i];
      if (fb.seller_accepts && p <= q) state.seller_integral[i] += 1;
      if (fb.buyer_accepts && p >= q) state.buyer_integral[i] += 1;
    }
    if (round == state.scouting_rounds) {
      const double t0 = static_cast<double>(state.scouting_rounds);
      for (auto& v : state.seller_integral) v /= t0;
      for (auto& v : state.buyer_integral) v /= t0;
      if (state.scouting_rounds < state.horizon) {
        state.bandit->init(state.arms, state.horizon - state.scouting_rounds);
        state.phase = SbPhase::kBandits;
      }
    }
    return;
  }
  const std::size_t i = state.current_arm;
  const double reward = (fb.seller_accepts ? state.buyer_integral[i] : 0.0) +
                        (fb.buyer_accepts ? state.seller_integral[i] : 0.0);
  state.bandit->update(i, 0.5 * reward);
}

ScoutingBandits::ScoutingBandits(double density_bound, std::optional<double> epsilon,
                                 std::string bandit)
    : density_bound_(density_bound), epsilon_(epsilon), bandit_(std::move(bandit)) {
  if (!(density_bound_ >= 1)) throw ParameterError("density bound M must be >= 1");
  if (epsilon_ && !(*epsilon_ > 0)) throw ParameterError("epsilon must be > 0");
  (void)make_bandit(bandit_);
}

void ScoutingBandits::reset(std::optional<std::size_t> horizon, std::uint64_t seed) {
  if (!horizon) {
    throw ContractError("scouting bandits needs the horizon; wrap it in the doubling learner");
  }
  state_ = sb_configure(density_bound_, *horizon, epsilon_, bandit_);
  stream_ = UniformStream(seed);
  round_ = 0;
}

Price ScoutingBandits::act(std::size_t round) {
  round_ = round;
  last_price_ = sb_act(state_, round, stream_.next());
  return last_price_;
}

void ScoutingBandits::observe(const Feedback& feedback) {
  const auto* fb = std::get_if<RealisticFeedback>(&feedback);
  if (fb == nullptr) throw ContractError("scouting bandits consumes accept/reject feedback only");
  sb_observe(state_, round_, last_price_, *fb);
}

std::vector<std::pair<std::string, double>> ScoutingBandits::diagnostics() const {
  return {{"M", state_.density_bound},
          {"epsilon", state_.epsilon},
          {"ell", state_.ell},
          {"delta", state_.delta},
          {"K", static_cast<double>(state_.arms)},
          {"T0", static_cast<double>(state_.scouting_rounds)}};
}

DoublingLearner::DoublingLearner(LearnerFactory inner) : factory_(std::move(inner)) {
  inner_ = factory_();
  kind_ = inner_->required_feedback();
  inner_name_ = inner_->name();
}

void DoublingLearner::reset(std::optional<std::size_t>, std::uint64_t seed) {
  seed_ = seed;
  epoch_ = 0;
  epoch_start_ = 1;
  epoch_length_ = 0;
}

Price DoublingLearner::act(std::size_t round) {
  if (epoch_length_ == 0 || round >= epoch_start_ + epoch_length_) {
    if (epoch_length_ != 0) {
      epoch_start_ += epoch_length_;
      ++epoch_;
    }
    epoch_length_ = std::size_t{1} << epoch_;
    inner_ = factory_();
    inner_->reset(epoch_length_, derive_seed(seed_, epoch_));
  }
  return inner_->act(round - epoch_start_ + 1);
}

void DoublingLearner::observe(const Feedback& feedback) { inner_->observe(feedback); }

LearnerFactory make_learner_factory(const LearnerSpec& spec, const MixtureDistribution* instance) {
  if (spec.name != "sb") {
    if (spec.doubling) throw ParameterError("doubling applies to the sb learner only");
    return make_basic_learner_factory<double>(spec);
  }
  std::optional<double> bound = spec.density_bound;
  if (!bound && instance != nullptr) bound = instance->density_bound();
  if (!bound) {
    throw ParameterError("sb needs a density bound M (the instance has none; set learner.M)");
  }
  const double m = *bound;
  const auto epsilon = spec.epsilon;
  const std::string bandit = spec.bandit;
  ScoutingBandits check(m, epsilon, bandit);
  LearnerFactory base = [m, epsilon, bandit] {
    return std::make_unique<ScoutingBandits>(m, epsilon, bandit);
  };
  if (!spec.doubling) return base;
  return [base] { return std::make_unique<DoublingLearner>(base); };
}

}  // namespace bitrade
