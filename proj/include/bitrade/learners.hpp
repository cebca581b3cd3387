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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bitrade/bandits.hpp"
#include "bitrade/core.hpp"
#include "bitrade/detail/cumulative_gft_tree.hpp"
#include "bitrade/dist.hpp"
#include "bitrade/rng.hpp"

namespace bitrade {

// A pricing strategy. act() for round t may depend only on the seed and on the
// feedback of rounds 1..t-1; the same seed and feedback give the same prices.
template <typename Scalar>
class BasicLearner {
 public:
  virtual ~BasicLearner() = default;

  virtual FeedbackKind required_feedback() const = 0;
  virtual void reset(std::optional<std::size_t> horizon, std::uint64_t seed) = 0;
  virtual BasicPrice<Scalar> act(std::size_t round) = 0;
  virtual void observe(const BasicFeedback<Scalar>& feedback) = 0;
  virtual std::string name() const = 0;
  // True when the next price is a function of the feedback history alone.
  virtual bool deterministic() const { return false; }
  // Derived parameters worth reporting (e.g. grid size, scouting length).
  virtual std::vector<std::pair<std::string, double>> diagnostics() const { return {}; }
};

template <typename Scalar>
using BasicLearnerFactory = std::function<std::unique_ptr<BasicLearner<Scalar>>()>;

using Learner = BasicLearner<double>;
using LearnerFactory = BasicLearnerFactory<double>;

template <typename Scalar>
const BasicFullFeedback<Scalar>& expect_full(const BasicFeedback<Scalar>& feedback,
                                             const std::string& who) {
  if (const auto* full = std::get_if<BasicFullFeedback<Scalar>>(&feedback)) return *full;
  throw ContractError(who + " requires full feedback but received accept/reject bits");
}

// ---------------------------------------------------------------------------
// Follow the Best Price

template <typename Scalar>
struct FbpState {
  Scalar initial_price{0};
  std::size_t observed_pairs = 0;
  detail::CumulativeGftTree<Scalar> objective;
};

template <typename Scalar>
void fbp_observe(FbpState<Scalar>& state, const BasicValuationPair<Scalar>& v) {
  state.objective.add_pair(v.s, v.b);
  ++state.observed_pairs;
}

// Initial price before any observation; afterwards the smallest observed
// valuation maximising the cumulative hindsight GFT.
template <typename Scalar>
BasicPrice<Scalar> fbp_act(const FbpState<Scalar>& state) {
  if (state.objective.empty()) return BasicPrice<Scalar>(state.initial_price);
  return BasicPrice<Scalar>(state.objective.best_price());
}

template <typename Scalar>
class BasicFollowTheBestPrice final : public BasicLearner<Scalar> {
 public:
  explicit BasicFollowTheBestPrice(double initial_price = 0.0) : initial_price_(initial_price) {
    BasicPrice<Scalar> check{Scalar(initial_price)};
    (void)check;
    reset(std::nullopt, 0);
  }

  FeedbackKind required_feedback() const override { return FeedbackKind::kFull; }
  void reset(std::optional<std::size_t>, std::uint64_t) override {
    state_ = FbpState<Scalar>{};
    state_.initial_price = Scalar(initial_price_);
  }
  BasicPrice<Scalar> act(std::size_t) override { return fbp_act(state_); }
  void observe(const BasicFeedback<Scalar>& feedback) override {
    fbp_observe(state_, expect_full(feedback, name()).valuations);
  }
  std::string name() const override { return "fbp"; }
  bool deterministic() const override { return true; }

  const FbpState<Scalar>& state() const { return state_; }

 private:
  double initial_price_;
  FbpState<Scalar> state_;
};

// ---------------------------------------------------------------------------
// Baselines. They ignore feedback; `declared` is the kind they report so they
// can be paired with either feedback model.

template <typename Scalar>
class BasicFixedPrice final : public BasicLearner<Scalar> {
 public:
  explicit BasicFixedPrice(double price, FeedbackKind declared = FeedbackKind::kFull)
      : price_(Scalar(price)), declared_(declared) {}

  FeedbackKind required_feedback() const override { return declared_; }
  void reset(std::optional<std::size_t>, std::uint64_t) override {}
  BasicPrice<Scalar> act(std::size_t) override { return price_; }
  void observe(const BasicFeedback<Scalar>&) override {}
  std::string name() const override { return "fixed"; }
  bool deterministic() const override { return true; }

 private:
  BasicPrice<Scalar> price_;
  FeedbackKind declared_;
};

template <typename Scalar>
class BasicUniformPrice final : public BasicLearner<Scalar> {
 public:
  explicit BasicUniformPrice(FeedbackKind declared = FeedbackKind::kFull) : declared_(declared) {}

  FeedbackKind required_feedback() const override { return declared_; }
  void reset(std::optional<std::size_t>, std::uint64_t seed) override { stream_ = UniformStream(seed); }
  BasicPrice<Scalar> act(std::size_t) override { return BasicPrice<Scalar>(Scalar(stream_.next())); }
  void observe(const BasicFeedback<Scalar>&) override {}
  std::string name() const override { return "uniform"; }

 private:
  FeedbackKind declared_;
  UniformStream stream_;
};

using FollowTheBestPrice = BasicFollowTheBestPrice<double>;
using FixedPrice = BasicFixedPrice<double>;
using UniformPrice = BasicUniformPrice<double>;

// ---------------------------------------------------------------------------
// Scouting Bandits

enum class SbPhase { kScouting, kBandits };

struct SbState {
  double density_bound = 1;  // M
  double epsilon = 0;
  double ell = 1;    // M^(2/3)
  double delta = 0;  // epsilon * M^(1/3)
  std::size_t arms = 0;            // K
  std::size_t scouting_rounds = 0;  // T0, clamped to the horizon
  std::size_t horizon = 0;
  std::vector<double> grid;           // q_i = i * epsilon / ell
  std::vector<double> seller_integral;  // I-hat, raw counts until normalised
  std::vector<double> buyer_integral;   // J-hat
  std::unique_ptr<BanditAlgorithm> bandit;
  SbPhase phase = SbPhase::kScouting;
  std::size_t current_arm = 0;
};

// Derives l, delta, K, T0 and the price grid. epsilon defaults to T^(-1/3).
SbState sb_configure(double density_bound, std::size_t horizon,
                     std::optional<double> epsilon = std::nullopt,
                     std::string_view bandit = "ucb1");

// Scouting rounds post the uniform draw u; later rounds post the bandit's arm.
Price sb_act(SbState& state, std::size_t round, double u);

// Scouting rounds accumulate the integral estimators (normalised at round T0,
// when the bandit is initialised); bandit rounds feed
//   r = 1{seller accepts} J-hat_i + 1{buyer accepts} I-hat_i,
// halved into [0,1].
void sb_observe(SbState& state, std::size_t round, Price posted, const RealisticFeedback& fb);

class ScoutingBandits final : public Learner {
 public:
  ScoutingBandits(double density_bound, std::optional<double> epsilon = std::nullopt,
                  std::string bandit = "ucb1");

  FeedbackKind required_feedback() const override { return FeedbackKind::kRealistic; }
  void reset(std::optional<std::size_t> horizon, std::uint64_t seed) override;
  Price act(std::size_t round) override;
  void observe(const Feedback& feedback) override;
  std::string name() const override { return "sb"; }
  std::vector<std::pair<std::string, double>> diagnostics() const override;

  const SbState& state() const { return state_; }

 private:
  double density_bound_;
  std::optional<double> epsilon_;
  std::string bandit_;
  SbState state_;
  UniformStream stream_;
  std::size_t round_ = 0;
  Price last_price_;
};

// Restarts a horizon-dependent learner on epochs of length 1, 2, 4, ...
class DoublingLearner final : public Learner {
 public:
  explicit DoublingLearner(LearnerFactory inner);

  FeedbackKind required_feedback() const override { return kind_; }
  void reset(std::optional<std::size_t> horizon, std::uint64_t seed) override;
  Price act(std::size_t round) override;
  void observe(const Feedback& feedback) override;
  std::string name() const override { return "doubling(" + inner_name_ + ")"; }

  std::size_t epoch() const { return epoch_; }

 private:
  LearnerFactory factory_;
  std::unique_ptr<Learner> inner_;
  FeedbackKind kind_;
  std::string inner_name_;
  std::uint64_t seed_ = 0;
  std::size_t epoch_ = 0;
  std::size_t epoch_start_ = 1;  // first global round of the current epoch
  std::size_t epoch_length_ = 0;
};

// ---------------------------------------------------------------------------
// Construction from configuration

struct LearnerSpec {
  std::string name = "fbp";  // fbp | sb | fixed | uniform
  double initial_price = 0;  // fbp
  double price = 0.5;        // fixed
  std::optional<double> density_bound;  // sb; defaults to the instance's bound
  std::optional<double> epsilon;        // sb; defaults to T^(-1/3)
  std::string bandit = "ucb1";          // sb
  bool doubling = false;                // sb
  std::optional<FeedbackKind> feedback;  // declared kind for fixed / uniform

  friend bool operator==(const LearnerSpec&, const LearnerSpec&) = default;
};

LearnerFactory make_learner_factory(const LearnerSpec& spec,
                                    const MixtureDistribution* instance = nullptr);

// Learners usable with a non-double scalar: everything except Scouting
// Bandits, which needs realistic feedback.
template <typename Scalar>
BasicLearnerFactory<Scalar> make_basic_learner_factory(const LearnerSpec& spec) {
  const FeedbackKind declared = spec.feedback.value_or(FeedbackKind::kFull);
  if (spec.name == "fbp") {
    const double initial = spec.initial_price;
    return [initial] { return std::make_unique<BasicFollowTheBestPrice<Scalar>>(initial); };
  }
  if (spec.name == "fixed") {
    const double price = spec.price;
    Price check(price);
    (void)check;
    return [price, declared] { return std::make_unique<BasicFixedPrice<Scalar>>(price, declared); };
  }
  if (spec.name == "uniform") {
    return [declared] { return std::make_unique<BasicUniformPrice<Scalar>>(declared); };
  }
  if (spec.name == "sb") {
    throw ContractError("scouting bandits requires realistic feedback");
  }
  throw ParameterError("unknown learner '" + spec.name + "'");
}

}  // namespace bitrade
