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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bitrade/instances.hpp"
#include "bitrade/learners.hpp"
#include "oracles.hpp"

using namespace bitrade;

namespace {

Feedback full(double s, double b) { return FullFeedback{{s, b}}; }

double fbp_after(const std::vector<std::pair<double, double>>& pairs) {
  FollowTheBestPrice fbp;
  for (const auto& [s, b] : pairs) fbp.observe(full(s, b));
  return fbp.act(pairs.size() + 1).value();
}

}  // namespace

TEST_CASE("fbp examples") {
  FollowTheBestPrice fbp;
  CHECK(fbp.act(1).value() == 0.0);
  CHECK(fbp.required_feedback() == FeedbackKind::kFull);
  CHECK(fbp.deterministic());
  CHECK(fbp_after({{0.2, 0.8}, {0.5, 0.6}}) == 0.5);
  CHECK(fbp_after({{0.3, 0.9}}) == 0.3);
  CHECK(fbp_after({{0.9, 0.1}}) == 0.1);
  CHECK(FollowTheBestPrice(0.7).act(1).value() == 0.7);
  CHECK_THROWS_AS(FollowTheBestPrice(1.5), ParameterError);
}

TEST_CASE("fbp rejects accept/reject feedback") {
  FollowTheBestPrice fbp;
  CHECK_THROWS_AS(fbp.observe(RealisticFeedback{true, true}), ContractError);
}

TEST_CASE("fbp argmax equals brute force after every round") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    FollowTheBestPrice fbp;
    std::vector<oracle::Pair> pairs;
    for (int t = 1; t <= 200; ++t) {
      // Dyadic values on some trials force exact ties between candidates.
      const auto draw = [&] { return trial % 2 == 0 ? std::round(u(rng) * 16) / 16 : u(rng); };
      const oracle::Pair v{draw(), draw()};
      pairs.push_back(v);
      fbp.observe(full(v.s, v.b));
      const double p = fbp.act(t + 1).value();
      const oracle::Best best = oracle::brute_force_best(pairs);
      CHECK(p == best.price);
      const double at_p = oracle::cumulative(p, pairs);
      for (const auto& w : pairs) {
        CHECK(at_p >= oracle::cumulative(w.s, pairs));
        CHECK(at_p >= oracle::cumulative(w.b, pairs));
      }
    }
  }
}

TEST_CASE("fbp candidate maximum is never beaten by a fine grid") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<oracle::Pair> pairs(1 + trial % 7);
    FollowTheBestPrice fbp;
    for (auto& v : pairs) {
      v = {u(rng), u(rng)};
      fbp.observe(full(v.s, v.b));
    }
    const double best = oracle::cumulative(fbp.act(pairs.size() + 1).value(), pairs);
    CHECK(oracle::grid_max(pairs, 100001) <= best);
  }
}

TEST_CASE("sb_configure examples") {
  const SbState a = sb_configure(1, 100000, 0.1);
  CHECK(a.ell == 1);
  CHECK(a.delta == doctest::Approx(0.1));
  CHECK(a.arms == 10);
  CHECK(a.scouting_rounds == 300);
  const SbState b = sb_configure(1, 1000);
  CHECK(b.epsilon == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(b.arms == 10);
  CHECK(b.scouting_rounds == 300);
  const SbState c = sb_configure(8, 100000, 0.5);
  CHECK(c.ell == doctest::Approx(4));
  CHECK(c.delta == doctest::Approx(1));
  CHECK(c.arms == 8);
  CHECK(c.scouting_rounds == 7);
  CHECK(c.grid.front() == 0);
  CHECK(c.grid.back() < 1);
  CHECK(c.grid[3] == doctest::Approx(3 * 0.5 / 4));
  // Scouting longer than the horizon is clamped.
  CHECK(sb_configure(1, 50, 0.1).scouting_rounds == 50);
  CHECK_THROWS_AS(sb_configure(1, 100, 0.0), ParameterError);
  CHECK_THROWS_AS(sb_configure(0.5, 100), ParameterError);
  CHECK_THROWS_AS(sb_configure(1, 100, 0.1, "exp3"), ParameterError);
}

TEST_CASE("sb_configure grid invariants over a parameter sweep") {
  for (double m : {1.0, 2.0, 8.0, 24.0, 187.2}) {
    for (std::size_t t : {1000u, 10000u, 300000u}) {
      const SbState s = sb_configure(m, t);
      CHECK(s.grid.size() == s.arms);
      CHECK(s.grid.front() == 0);
      CHECK(s.grid.back() < 1);
      CHECK(s.scouting_rounds >= 1);
      CHECK(s.scouting_rounds <= t);
    }
  }
}

TEST_CASE("sb_act and sb_observe examples") {
  SbState s = sb_configure(1, 100000, 0.1);
  CHECK(sb_act(s, 1, 0.42).value() == 0.42);
  sb_observe(s, 1, Price(0.42), {true, true});
  CHECK(s.seller_integral[7] == 1);  // 0.42 <= 0.7
  CHECK(s.buyer_integral[7] == 0);   // 0.42 < 0.7
  sb_observe(s, 2, Price(0.42), {false, true});
  CHECK(s.seller_integral[3] == 0);
  CHECK(s.buyer_integral[3] == 2);  // 0.3 <= 0.42, in both rounds

  // Drive to the end of scouting; the phase switches exactly at T0.
  for (std::size_t t = 3; t <= s.scouting_rounds; ++t) {
    CHECK(s.phase == SbPhase::kScouting);
    const Price p = sb_act(s, t, 0.5);
    sb_observe(s, t, p, {false, false});
  }
  CHECK(s.phase == SbPhase::kBandits);
  for (std::size_t i = 0; i < s.arms; ++i) {
    CHECK(s.seller_integral[i] >= 0);
    CHECK(s.seller_integral[i] <= 1);
    CHECK(s.buyer_integral[i] >= 0);
    CHECK(s.buyer_integral[i] <= 1);
  }
  const Price first = sb_act(s, s.scouting_rounds + 1, 0.9);
  CHECK(s.current_arm == 0);
  CHECK(first.value() == 0.0);

  // Arm with I = 0.2, J = 0.4 and feedback (true, false) earns 0.4, fed as 0.2.
  s.current_arm = 7;
  CHECK(s.grid[7] == doctest::Approx(0.7));
  s.seller_integral[7] = 0.2;
  s.buyer_integral[7] = 0.4;
  sb_observe(s, s.scouting_rounds + 1, Price(0.7), {true, false});
  CHECK(s.bandit->stats()[7].pulls == 1);
  CHECK(s.bandit->stats()[7].reward_sum == doctest::Approx(0.2));
}

TEST_CASE("scouting estimators are unbiased") {
  const auto d = sqrt_lower_instance(0.3);
  const auto [fs, fb] = sqrt_lower_marginals(0.3);
  const int phases = 200;
  SbState probe = sb_configure(1, 100000, 0.1);
  const std::size_t k = probe.arms;
  std::vector<double> sum_i(k, 0), sum2_i(k, 0), sum_j(k, 0), sum2_j(k, 0);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int phase = 0; phase < phases; ++phase) {
    SbState s = sb_configure(1, 100000, 0.1);
    for (std::size_t t = 1; t <= s.scouting_rounds; ++t) {
      const Price p = sb_act(s, t, u(rng));
      const ValuationPair v = sample(d, u(rng), u(rng), u(rng));
      sb_observe(s, t, p, {v.s <= p.value(), p.value() <= v.b});
    }
    for (std::size_t i = 0; i < k; ++i) {
      sum_i[i] += s.seller_integral[i];
      sum2_i[i] += s.seller_integral[i] * s.seller_integral[i];
      sum_j[i] += s.buyer_integral[i];
      sum2_j[i] += s.buyer_integral[i] * s.buyer_integral[i];
    }
  }
  const double n = phases;
  for (std::size_t i = 0; i < k; ++i) {
    const double q = probe.grid[i];
    const double exact_i = fs.cdf_integral(q);
    const double exact_j = (1 - q) - (fb.cdf_integral(1) - fb.cdf_integral(q));
    const double mean_i = sum_i[i] / n, mean_j = sum_j[i] / n;
    const double se_i = std::sqrt(std::max(0.0, sum2_i[i] / n - mean_i * mean_i) / n);
    const double se_j = std::sqrt(std::max(0.0, sum2_j[i] / n - mean_j * mean_j) / n);
    CAPTURE(q);
    CHECK(std::abs(mean_i - exact_i) <= 4 * se_i + 1e-12);
    CHECK(std::abs(mean_j - exact_j) <= 4 * se_j + 1e-12);
  }
}

TEST_CASE("scouting bandits learner contract and determinism") {
  ScoutingBandits sb(1.0, 0.1);
  CHECK(sb.required_feedback() == FeedbackKind::kRealistic);
  CHECK_THROWS_AS(sb.reset(std::nullopt, 1), ContractError);
  sb.reset(2000, 1);
  sb.act(1);
  CHECK_THROWS_AS(sb.observe(full(0.1, 0.9)), ContractError);

  const auto d = uniform_instance();
  const auto trace = [&](std::uint64_t seed) {
    ScoutingBandits learner(1.0, std::nullopt, "ucb1");
    learner.reset(3000, seed);
    std::mt19937_64 env(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> prices;
    for (std::size_t t = 1; t <= 3000; ++t) {
      const Price p = learner.act(t);
      prices.push_back(p.value());
      const ValuationPair v = sample(d, u(env), u(env), u(env));
      learner.observe(realistic_feedback(p, v));
    }
    return prices;
  };
  CHECK(trace(5) == trace(5));
  CHECK(trace(5) != trace(6));

  ScoutingBandits diag(24.0, std::nullopt);
  diag.reset(10000, 0);
  const auto values = diag.diagnostics();
  CHECK(values.size() == 6);
  CHECK(values[4].first == "K");
  CHECK(values[4].second == static_cast<double>(diag.state().arms));
}

TEST_CASE("doubling restarts at powers of two") {
  const LearnerFactory inner = [] { return std::make_unique<ScoutingBandits>(1.0); };
  DoublingLearner learner(inner);
  CHECK(learner.required_feedback() == FeedbackKind::kRealistic);
  CHECK(learner.name() == "doubling(sb)");
  learner.reset(std::nullopt, 3);
  std::vector<std::size_t> epochs;
  for (std::size_t t = 1; t <= 15; ++t) {
    learner.act(t);
    epochs.push_back(learner.epoch());
    learner.observe(RealisticFeedback{true, true});
  }
  CHECK(epochs == std::vector<std::size_t>{0, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3});
}

TEST_CASE("baselines") {
  FixedPrice fixed(0.5);
  fixed.reset(10, 0);
  for (std::size_t t = 1; t <= 20; ++t) {
    CHECK(fixed.act(t).value() == 0.5);
    fixed.observe(full(0.1, 0.2));
    fixed.observe(RealisticFeedback{false, false});
  }
  CHECK(FixedPrice(0.3, FeedbackKind::kRealistic).required_feedback() == FeedbackKind::kRealistic);
  CHECK_THROWS_AS(FixedPrice(-0.1), ParameterError);

  UniformPrice uniform;
  uniform.reset(10, 42);
  UniformStream stream(42);
  for (std::size_t t = 1; t <= 20; ++t) CHECK(uniform.act(t).value() == stream.next());
}

TEST_CASE("learner factory") {
  LearnerSpec spec;
  CHECK(make_learner_factory(spec)()->name() == "fbp");
  spec.name = "sb";
  CHECK_THROWS_AS(make_learner_factory(spec), ParameterError);
  const auto needle = needle_instance(0.5);
  CHECK_THROWS_AS(make_learner_factory(spec, &needle), ParameterError);
  const auto tt = two_third_instance(0.3);
  auto sb = make_learner_factory(spec, &tt)();
  sb->reset(10000, 0);
  CHECK(sb->diagnostics()[0].second == doctest::Approx(*tt.density_bound()));
  spec.density_bound = 2.0;
  spec.doubling = true;
  CHECK(make_learner_factory(spec)()->name() == "doubling(sb)");
  spec.name = "fbp";
  CHECK_THROWS_AS(make_learner_factory(spec), ParameterError);
  spec.doubling = false;
  spec.name = "gradient";
  CHECK_THROWS_AS(make_learner_factory(spec), ParameterError);
}
