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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bitrade/dist.hpp"
#include "bitrade/learners.hpp"

namespace bitrade {

struct TrajectoryRow {
  std::size_t t = 0;
  double price = 0, s = 0, b = 0, gft = 0;
  bool seller_accepts = false, buyer_accepts = false;

  friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  std::uint64_t seed = 0;
  std::string instance;
  bool iid = false;
  FeedbackKind feedback = FeedbackKind::kFull;

  double learner_gft() const;
};

// Valuation source for an episode: iid draws from a mixture, or a fixed script.
class Environment {
 public:
  static Environment iid(MixtureDistribution dist, std::string descriptor = "custom");
  static Environment scripted(std::vector<ValuationPair> pairs, std::string descriptor = "scripted");

  // Restricts what the learner may be shown; by default the learner gets the
  // kind it declares.
  Environment& with_feedback(FeedbackKind kind) {
    feedback_ = kind;
    return *this;
  }

  bool is_iid() const { return std::holds_alternative<MixtureDistribution>(source_); }
  const MixtureDistribution& distribution() const { return std::get<MixtureDistribution>(source_); }
  const std::string& descriptor() const { return descriptor_; }
  const std::optional<FeedbackKind>& feedback() const { return feedback_; }

  ValuationPair draw(std::size_t round, UniformStream& stream) const;
  // The feedback kind actually delivered to `learner_kind`; throws ContractError
  // when the environment cannot serve it.
  FeedbackKind delivered_kind(FeedbackKind learner_kind) const;

 private:
  Environment() = default;
  std::variant<std::vector<ValuationPair>, MixtureDistribution> source_;
  std::string descriptor_;
  std::optional<FeedbackKind> feedback_;
};

// Learning protocol: each round draws (s_t, b_t), asks the learner for P_t,
// records GFT and reveals the delivered feedback. Deterministic given seed.
Trajectory run_episode(Learner& learner, const Environment& env, std::size_t horizon,
                       std::uint64_t seed);

template <typename Scalar>
struct BasicHindsightBest {
  Scalar price{0};
  Scalar total{0};
};
using HindsightBest = BasicHindsightBest<double>;

// Best fixed price in hindsight by a sweep over the 2T candidate valuations:
// V(p) = sum (b - s) 1{s <= p <= b} is piecewise constant and changes only at
// valuations. Returns the smallest maximising candidate.
template <typename Scalar>
BasicHindsightBest<Scalar> hindsight_best(std::span<const BasicValuationPair<Scalar>> pairs) {
  if (pairs.empty()) throw ParameterError("hindsight benchmark of an empty trajectory");
  struct Event {
    Scalar key;
    Scalar surplus;
  };
  std::vector<Event> opens, closes;
  std::vector<Scalar> candidates;
  candidates.reserve(2 * pairs.size());
  for (const auto& v : pairs) {
    candidates.push_back(v.s);
    candidates.push_back(v.b);
    if (v.s <= v.b) {
      opens.push_back({v.s, Scalar(v.b - v.s)});
      closes.push_back({v.b, Scalar(v.b - v.s)});
    }
  }
  const auto by_key = [](const Event& x, const Event& y) { return x.key < y.key; };
  std::sort(opens.begin(), opens.end(), by_key);
  std::sort(closes.begin(), closes.end(), by_key);
  std::sort(candidates.begin(), candidates.end());
  std::size_t next_open = 0, next_close = 0;
  Scalar running(0);
  BasicHindsightBest<Scalar> best{candidates.front(), Scalar(0)};
  bool first = true;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i > 0 && candidates[i] == candidates[i - 1]) continue;
    const Scalar& p = candidates[i];
    while (next_open < opens.size() && opens[next_open].key <= p) running += opens[next_open++].surplus;
    while (next_close < closes.size() && closes[next_close].key < p) running -= closes[next_close++].surplus;
    if (first || running > best.total) {
      best = {p, running};
      first = false;
    }
  }
  return best;
}

HindsightBest hindsight_best(const Trajectory& trajectory);

// T * E[GFT(p*)] - sum_t E[GFT(P_t)] with p* from best_fixed_price.
double pseudo_regret(const MixtureDistribution& instance, const Trajectory& trajectory);

struct EpisodeSummary {
  double learner_gft = 0;
  HindsightBest hindsight;
  double hindsight_regret = 0;
  std::optional<double> pseudo_regret;
};

EpisodeSummary summarize(const Trajectory& trajectory, const MixtureDistribution* instance);

struct RateFit {
  double exponent = 0;
  double stderr_exponent = 0;  // NaN with fewer than three points
  double intercept = 0;
};

// Least squares of log(regret) on log(T). Empty with fewer than two points or
// a non-positive regret.
std::optional<RateFit> fit_rate_exponent(std::span<const double> horizons,
                                         std::span<const double> regrets);

struct HorizonRow {
  std::size_t horizon = 0;
  std::size_t replications = 0;
  double mean_learner_gft = 0;
  double mean_hindsight_regret = 0;
  double mean_pseudo_regret = 0;
  double stderr_pseudo_regret = 0;  // standard error of the mean
  double stderr_hindsight_regret = 0;
};

struct RegretReport {
  std::string learner;
  std::string instance;
  // Single-episode fields.
  std::optional<double> learner_gft;
  std::optional<double> hindsight_best_price;
  std::optional<double> hindsight_best_total;
  std::optional<double> hindsight_regret;
  std::optional<double> pseudo_regret;
  // Sweep fields.
  std::vector<HorizonRow> table;
  std::optional<RateFit> fit;  // on mean pseudo-regret
};

struct SweepOptions {
  std::vector<std::size_t> horizons;
  std::size_t replications = 1;
  std::uint64_t base_seed = 0;
  unsigned jobs = 1;
};

// Replication r of every horizon uses seed derive_seed(base_seed, r); results
// are reduced in replication order, so the report does not depend on jobs.
RegretReport sweep(const LearnerFactory& factory, const MixtureDistribution& instance,
                   const SweepOptions& options, const std::string& instance_descriptor = "");

}  // namespace bitrade
