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

#include "bitrade/harness.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace bitrade {

double Trajectory::learner_gft() const {
  double total = 0;
  for (const auto& row : rows) total += row.gft;
  return total;
}

Environment Environment::iid(MixtureDistribution dist, std::string descriptor) {
  Environment env;
  env.source_ = std::move(dist);
  env.descriptor_ = std::move(descriptor);
  return env;
}

Environment Environment::scripted(std::vector<ValuationPair> pairs, std::string descriptor) {
  for (const auto& v : pairs) validate(v);
  Environment env;
  env.source_ = std::move(pairs);
  env.descriptor_ = std::move(descriptor);
  return env;
}

ValuationPair Environment::draw(std::size_t round, UniformStream& stream) const {
  if (const auto* dist = std::get_if<MixtureDistribution>(&source_)) {
    const double u1 = stream.next(), u2 = stream.next(), u3 = stream.next();
    return sample(*dist, u1, u2, u3);
  }
  const auto& script = std::get<std::vector<ValuationPair>>(source_);
  if (round == 0 || round > script.size()) {
    throw ParameterError("scripted environment has " + std::to_string(script.size()) +
                         " rounds, asked for round " + std::to_string(round));
  }
  return script[round - 1];
}

FeedbackKind Environment::delivered_kind(FeedbackKind learner_kind) const {
  if (!feedback_) return learner_kind;
  if (!feedback_satisfies(*feedback_, learner_kind)) {
    throw ContractError("learner requires " + std::string(to_string(learner_kind)) +
                        " feedback but the environment reveals only " +
                        std::string(to_string(*feedback_)) + " feedback");
  }
  return learner_kind;
}

Trajectory run_episode(Learner& learner, const Environment& env, std::size_t horizon,
                       std::uint64_t seed) {
  const FeedbackKind kind = env.delivered_kind(learner.required_feedback());
  Trajectory trajectory;
  trajectory.seed = seed;
  trajectory.instance = env.descriptor();
  trajectory.iid = env.is_iid();
  trajectory.feedback = kind;
  trajectory.rows.reserve(horizon);
  UniformStream valuations(derive_seed(seed, 1));
  learner.reset(horizon, derive_seed(seed, 2));
  for (std::size_t t = 1; t <= horizon; ++t) {
    const ValuationPair v = env.draw(t, valuations);
    const Price p = learner.act(t);
    const RealisticFeedback bits = realistic_feedback(p, v);
    trajectory.rows.push_back(
        {t, p.value(), v.s, v.b, gain_from_trade(p, v), bits.seller_accepts, bits.buyer_accepts});
    if (kind == FeedbackKind::kFull) {
      learner.observe(FullFeedback{v});
    } else {
      learner.observe(bits);
    }
  }
  return trajectory;
}

HindsightBest hindsight_best(const Trajectory& trajectory) {
  std::vector<ValuationPair> pairs;
  pairs.reserve(trajectory.rows.size());
  for (const auto& row : trajectory.rows) pairs.push_back({row.s, row.b});
  return hindsight_best<double>(std::span<const ValuationPair>(pairs));
}

double pseudo_regret(const MixtureDistribution& instance, const Trajectory& trajectory) {
  if (!trajectory.iid) {
    throw ContractError("pseudo-regret needs an iid environment, not a scripted sequence");
  }
  const BestPrice best = best_fixed_price(instance);
  double total = 0;
  for (const auto& row : trajectory.rows) total += best.value - expected_gft(instance, Price(row.price));
  return total;
}

EpisodeSummary summarize(const Trajectory& trajectory, const MixtureDistribution* instance) {
  EpisodeSummary summary;
  summary.learner_gft = trajectory.learner_gft();
  if (!trajectory.rows.empty()) {
    summary.hindsight = hindsight_best(trajectory);
    summary.hindsight_regret = summary.hindsight.total - summary.learner_gft;
  }
  if (instance != nullptr && trajectory.iid) summary.pseudo_regret = pseudo_regret(*instance, trajectory);
  return summary;
}

std::optional<RateFit> fit_rate_exponent(std::span<const double> horizons,
                                         std::span<const double> regrets) {
  if (horizons.size() != regrets.size()) throw ParameterError("rate fit needs paired inputs");
  const std::size_t n = horizons.size();
  if (n < 2) return std::nullopt;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(horizons[i] > 0) || !(regrets[i] > 0)) return std::nullopt;
    x[i] = std::log(horizons[i]);
    y[i] = std::log(regrets[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) return std::nullopt;
  RateFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  if (n > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (fit.intercept + fit.exponent * x[i]);
      rss += r * r;
    }
    fit.stderr_exponent = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  } else {
    fit.stderr_exponent = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

RegretReport sweep(const LearnerFactory& factory, const MixtureDistribution& instance,
                   const SweepOptions& options, const std::string& instance_descriptor) {
  if (options.replications == 0) throw ParameterError("sweep needs at least one replication");
  if (!std::is_sorted(options.horizons.begin(), options.horizons.end())) {
    throw ParameterError("sweep horizons must be ascending");
  }
  struct Outcome {
    double gft = 0, hindsight = 0, pseudo = 0;
  };
  const std::size_t reps = options.replications;
  const std::size_t tasks = options.horizons.size() * reps;
  std::vector<Outcome> outcomes(tasks);
  const Environment env = Environment::iid(instance, instance_descriptor);
  const BestPrice best = best_fixed_price(instance);

  RegretReport report;
  report.instance = instance_descriptor;
  report.learner = factory()->name();

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t task = next++; task < tasks; task = next++) {
      const std::size_t h = task / reps, r = task % reps;
      auto learner = factory();
      const Trajectory tr = run_episode(*learner, env, options.horizons[h], derive_seed(options.base_seed, r));
      Outcome& out = outcomes[task];
      out.gft = tr.learner_gft();
      out.hindsight = hindsight_best(tr).total - out.gft;
      double pseudo = 0;
      for (const auto& row : tr.rows) pseudo += best.value - expected_gft(instance, Price(row.price));
      out.pseudo = pseudo;
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(tasks)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  std::vector<double> xs, ys;
  for (std::size_t h = 0; h < options.horizons.size(); ++h) {
    HorizonRow row;
    row.horizon = options.horizons[h];
    row.replications = reps;
    double sum_p = 0, sum_p2 = 0, sum_h = 0, sum_h2 = 0, sum_g = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const Outcome& o = outcomes[h * reps + r];
      sum_g += o.gft;
      sum_p += o.pseudo;
      sum_p2 += o.pseudo * o.pseudo;
      sum_h += o.hindsight;
      sum_h2 += o.hindsight * o.hindsight;
    }
    const double n = static_cast<double>(reps);
    row.mean_learner_gft = sum_g / n;
    row.mean_pseudo_regret = sum_p / n;
    row.mean_hindsight_regret = sum_h / n;
    const auto stderr_of = [n](double sum, double sum2) {
      if (n < 2) return 0.0;
      const double var = std::max(0.0, (sum2 - sum * sum / n) / (n - 1));
      return std::sqrt(var / n);
    };
    row.stderr_pseudo_regret = stderr_of(sum_p, sum_p2);
    row.stderr_hindsight_regret = stderr_of(sum_h, sum_h2);
    report.table.push_back(row);
    xs.push_back(static_cast<double>(row.horizon));
    ys.push_back(row.mean_pseudo_regret);
  }
  report.fit = fit_rate_exponent(xs, ys);
  return report;
}

}  // namespace bitrade
