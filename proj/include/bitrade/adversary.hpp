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

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bitrade/harness.hpp"
#include "bitrade/learners.hpp"

namespace bitrade {

// Nested intervals [c_t, d_t] of the Cantor-style adversary. After t >= 1
// emitted rounds, d - c = epsilon / 3^(t-1) and [c_t, d_t] lies inside every
// earlier interval.
template <typename Scalar>
struct CantorState {
  Scalar epsilon{0};
  Scalar c{0};
  Scalar d{1};
  Scalar width{1};  // epsilon / 3^(t-1) once t >= 1
  std::size_t t = 0;  // rounds emitted
  std::vector<BasicValuationPair<Scalar>> history;
};

inline void validate_cantor_epsilon(double epsilon) {
  if (!(epsilon > 0 && epsilon < 1.0 / 18.0)) {
    throw ParameterError("adversary epsilon must lie in (0, 1/18), got " + std::to_string(epsilon));
  }
}

template <typename Scalar>
CantorState<Scalar> make_cantor_state(double epsilon) {
  validate_cantor_epsilon(epsilon);
  CantorState<Scalar> state;
  state.epsilon = Scalar(epsilon);
  return state;
}

// Estimates nu_{t+1}[0, x], the law of the learner's next price given the
// valuation history the probe has observed.
template <typename Scalar>
class BasicPriceProbe {
 public:
  virtual ~BasicPriceProbe() = default;
  virtual double mass_at_most(const Scalar& x) = 0;
  virtual void observe(const BasicValuationPair<Scalar>& v) = 0;
  virtual std::size_t samples() const = 0;
  virtual bool exact() const = 0;

  // Binomial standard error of an estimate `mass` from samples() replays.
  double standard_error(double mass) const {
    if (exact()) return 0.0;
    return std::sqrt(std::max(0.0, mass * (1 - mass)) / static_cast<double>(samples()));
  }
};

// N learner instances with fresh seeds that are fed the same full-feedback
// history as the target. Because a learner's next price depends only on its
// seed and the feedback so far, each instance's next price is a draw from
// nu_{t+1}, the same as re-instantiating and replaying the history, at O(1)
// cost per round instead of O(t).
template <typename Scalar>
class ShadowProbe final : public BasicPriceProbe<Scalar> {
 public:
  ShadowProbe(const BasicLearnerFactory<Scalar>& factory, std::size_t samples, std::size_t horizon,
              std::uint64_t seed, bool exact)
      : exact_(exact) {
    if (samples == 0) throw ParameterError("probe needs at least one sample");
    shadows_.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      shadows_.push_back(factory());
      shadows_.back()->reset(horizon, derive_seed(seed, i));
    }
    advance();
  }

  double mass_at_most(const Scalar& x) override {
    std::size_t hits = 0;
    for (const auto& p : next_) hits += (p <= x) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(next_.size());
  }

  void observe(const BasicValuationPair<Scalar>& v) override {
    for (auto& shadow : shadows_) shadow->observe(BasicFullFeedback<Scalar>{v});
    advance();
  }

  std::size_t samples() const override { return shadows_.size(); }
  bool exact() const override { return exact_; }

 private:
  void advance() {
    ++round_;
    next_.clear();
    for (auto& shadow : shadows_) next_.push_back(shadow->act(round_).value());
  }

  std::vector<std::unique_ptr<BasicLearner<Scalar>>> shadows_;
  std::vector<Scalar> next_;
  std::size_t round_ = 0;
  bool exact_;
};

// Re-instantiates the learner N times per query and replays the whole history.
// Quadratic in the horizon; kept as the reference for ShadowProbe.
template <typename Scalar>
class ReplayProbe final : public BasicPriceProbe<Scalar> {
 public:
  ReplayProbe(BasicLearnerFactory<Scalar> factory, std::size_t samples, std::size_t horizon,
              std::uint64_t seed, bool exact)
      : factory_(std::move(factory)), samples_(samples), horizon_(horizon), seed_(seed), exact_(exact) {
    if (samples == 0) throw ParameterError("probe needs at least one sample");
  }

  double mass_at_most(const Scalar& x) override {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples_; ++i) {
      auto learner = factory_();
      learner->reset(horizon_, derive_seed(seed_, i));
      for (std::size_t k = 0; k < history_.size(); ++k) {
        (void)learner->act(k + 1);
        learner->observe(BasicFullFeedback<Scalar>{history_[k]});
      }
      hits += (learner->act(history_.size() + 1).value() <= x) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(samples_);
  }

  void observe(const BasicValuationPair<Scalar>& v) override { history_.push_back(v); }
  std::size_t samples() const override { return samples_; }
  bool exact() const override { return exact_; }

 private:
  BasicLearnerFactory<Scalar> factory_;
  std::size_t samples_, horizon_;
  std::uint64_t seed_;
  bool exact_;
  std::vector<BasicValuationPair<Scalar>> history_;
};

template <typename Scalar>
struct CantorStep {
  BasicValuationPair<Scalar> pair;
  double probe_mass = 0;  // estimate of nu at the branch threshold
  double probe_stderr = 0;
  bool low_branch = false;  // emitted (0, d) rather than (c, 1)
};

// One round of the construction. Round 1 splits around 1/2 with threshold
// 1/2 - epsilon/2; round t + 1 >= 2 tests nu[0, c_t + epsilon/3^t] <= 1/2 and
// keeps the third of [c_t, d_t] the learner is less likely to hit from below
// (low branch) or from above. The probe is advanced past the emitted pair.
template <typename Scalar>
CantorStep<Scalar> cantor_step(CantorState<Scalar>& state, BasicPriceProbe<Scalar>& probe) {
  const Scalar half = Scalar(1) / 2;
  const Scalar& eps = state.epsilon;
  Scalar threshold = state.t == 0 ? Scalar(half - eps / 2) : Scalar(state.c + state.width / 3);
  CantorStep<Scalar> step;
  step.probe_mass = probe.mass_at_most(threshold);
  if (!(step.probe_mass >= 0 && step.probe_mass <= 1)) {
    throw ContractError("price probe returned " + std::to_string(step.probe_mass) + " at round " +
                        std::to_string(state.t + 1));
  }
  step.probe_stderr = probe.standard_error(step.probe_mass);
  step.low_branch = step.probe_mass <= 0.5;
  if (state.t == 0) {
    if (step.low_branch) {
      state.c = half - 3 * eps / 2;
      state.d = half - eps / 2;
    } else {
      state.c = half + eps / 2;
      state.d = half + 3 * eps / 2;
    }
    state.width = eps;
  } else {
    const Scalar third = state.width / 3;
    if (step.low_branch) {
      state.d -= 2 * third;
    } else {
      state.c += 2 * third;
    }
    state.width = third;
  }
  step.pair = step.low_branch ? BasicValuationPair<Scalar>{Scalar(0), state.d}
                              : BasicValuationPair<Scalar>{state.c, Scalar(1)};
  state.history.push_back(step.pair);
  ++state.t;
  probe.observe(step.pair);
  return step;
}

struct AdversaryOptions {
  std::size_t horizon = 0;
  double epsilon = 0.05;
  std::optional<std::size_t> probe_samples;  // default 1 if deterministic, else 512
  std::uint64_t seed = 0;
  bool replay_probe = false;  // quadratic reference probe
};

struct AdversaryReport {
  std::string learner;
  double epsilon = 0;
  std::size_t horizon = 0;
  std::size_t probe_samples = 0;
  bool probe_exact = false;
  std::size_t precision_bits = 53;
  double learner_gft = 0;
  double benchmark_price = 0;  // midpoint of the final interval
  double benchmark_gft = 0;    // sum of b_t - s_t, all traded at benchmark_price
  double benchmark_gap = 0;    // benchmark_gft - learner_gft
  double hindsight_best_price = 0;
  double hindsight_best_total = 0;
  double regret = 0;  // hindsight_best_total - learner_gft
  double bound = 0;   // (1 - 3 epsilon) / 4 * T
  // Regret-scale standard deviation induced by probe noise:
  // sqrt(sum_t (b_t - s_t)^2 nu_t (1 - nu_t) / N). Zero for an exact probe.
  double probe_stderr = 0;
  double tolerance = 0;  // 3 * probe_stderr
  bool guarantee_met = false;  // regret >= bound - tolerance
  std::size_t low_branch_rounds = 0;
};

template <typename Scalar>
struct AdversarialEpisode {
  Trajectory trajectory;
  AdversaryReport report;
  CantorState<Scalar> state;
  std::vector<CantorStep<Scalar>> steps;
};

template <typename Scalar>
double to_double(const Scalar& x) {
  return static_cast<double>(x);
}

// Runs the live learner against the construction. The live learner and the
// probe replays use distinct seeds; the adversary never sees the live prices.
template <typename Scalar>
AdversarialEpisode<Scalar> run_adversarial_episode(const BasicLearnerFactory<Scalar>& factory,
                                                   const AdversaryOptions& options) {
  validate_cantor_epsilon(options.epsilon);
  auto learner = factory();
  if (learner->required_feedback() != FeedbackKind::kFull) {
    throw ContractError("the adversarial construction reveals full feedback; learner '" +
                        learner->name() + "' requires realistic feedback");
  }
  const bool deterministic = learner->deterministic();
  const std::size_t samples = options.probe_samples.value_or(deterministic ? 1 : 512);
  const std::size_t horizon = options.horizon;
  const std::uint64_t probe_seed = derive_seed(options.seed, 3);
  std::unique_ptr<BasicPriceProbe<Scalar>> probe;
  if (options.replay_probe) {
    probe = std::make_unique<ReplayProbe<Scalar>>(factory, samples, horizon, probe_seed, deterministic);
  } else {
    probe = std::make_unique<ShadowProbe<Scalar>>(factory, samples, horizon, probe_seed, deterministic);
  }

  AdversarialEpisode<Scalar> episode;
  episode.state = make_cantor_state<Scalar>(options.epsilon);
  Trajectory& tr = episode.trajectory;
  tr.seed = options.seed;
  tr.instance = "cantor(" + std::to_string(options.epsilon) + ")";
  tr.iid = false;
  tr.feedback = FeedbackKind::kFull;
  tr.rows.reserve(horizon);
  learner->reset(horizon, derive_seed(options.seed, 2));

  Scalar learner_gft(0);
  double probe_var = 0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    CantorStep<Scalar> step = cantor_step(episode.state, *probe);
    const BasicPrice<Scalar> p = learner->act(t);
    const Scalar gain = gain_from_trade(p, step.pair);
    const RealisticFeedback bits = realistic_feedback(p, step.pair);
    learner_gft += gain;
    learner->observe(BasicFullFeedback<Scalar>{step.pair});
    const double surplus = to_double(Scalar(step.pair.b - step.pair.s));
    probe_var += surplus * surplus * step.probe_stderr * step.probe_stderr;
    tr.rows.push_back({t, to_double(p.value()), to_double(step.pair.s), to_double(step.pair.b),
                       to_double(gain), bits.seller_accepts, bits.buyer_accepts});
    episode.steps.push_back(std::move(step));
  }

  AdversaryReport& r = episode.report;
  r.learner = learner->name();
  r.epsilon = options.epsilon;
  r.horizon = horizon;
  r.probe_samples = samples;
  r.probe_exact = deterministic;
  r.precision_bits = std::numeric_limits<double>::digits;  // callers with other scalars overwrite
  r.learner_gft = to_double(learner_gft);
  r.bound = (1 - 3 * options.epsilon) / 4 * static_cast<double>(horizon);
  r.probe_stderr = std::sqrt(probe_var);
  r.tolerance = 3 * r.probe_stderr;
  for (const auto& s : episode.steps) r.low_branch_rounds += s.low_branch ? 1 : 0;
  if (horizon > 0) {
    const Scalar mid = (episode.state.c + episode.state.d) / 2;
    Scalar benchmark(0);
    for (const auto& v : episode.state.history) benchmark += gain_from_trade(BasicPrice<Scalar>(mid), v);
    const auto best = hindsight_best<Scalar>(std::span<const BasicValuationPair<Scalar>>(episode.state.history));
    r.benchmark_price = to_double(mid);
    r.benchmark_gft = to_double(benchmark);
    r.benchmark_gap = to_double(Scalar(benchmark - learner_gft));
    r.hindsight_best_price = to_double(best.price);
    r.hindsight_best_total = to_double(best.total);
    r.regret = to_double(Scalar(best.total - learner_gft));
  }
  r.guarantee_met = r.regret >= r.bound - r.tolerance;
  return episode;
}

struct AdversaryOutcome {
  Trajectory trajectory;
  AdversaryReport report;
};

// Runs the construction in ExactScalar with enough mantissa bits for the
// horizon; double arithmetic would merge c_t and d_t after about 33 rounds.
AdversaryOutcome run_exact_adversarial_episode(const LearnerSpec& spec, const AdversaryOptions& options);

}  // namespace bitrade
