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
#include <sstream>

#include "bitrade/harness.hpp"
#include "bitrade/instances.hpp"
#include "bitrade/io.hpp"
#include "oracles.hpp"

using namespace bitrade;

namespace {

HindsightBest best_of(std::vector<ValuationPair> pairs) {
  return hindsight_best<double>(std::span<const ValuationPair>(pairs));
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream out;
  write_trajectory_csv(out, tr);
  return out.str();
}

}  // namespace

TEST_CASE("fixed price episode on the uniform product") {
  FixedPrice fixed(0.5);
  const Trajectory tr = run_episode(fixed, Environment::iid(uniform_instance(), "uniform"), 4, 3);
  REQUIRE(tr.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& row = tr.rows[i];
    CHECK(row.t == i + 1);
    CHECK(row.price == 0.5);
    CHECK(row.gft == ((row.s <= 0.5 && 0.5 <= row.b) ? row.b - row.s : 0.0));
    CHECK(row.seller_accepts == (row.s <= 0.5));
    CHECK(row.buyer_accepts == (0.5 <= row.b));
  }
  CHECK(tr.iid);
  CHECK(tr.instance == "uniform");
}

TEST_CASE("fbp on a scripted sequence") {
  FollowTheBestPrice fbp;
  const auto env = Environment::scripted({{0.2, 0.8}, {0.5, 0.6}, {0.2, 0.8}});
  const Trajectory tr = run_episode(fbp, env, 3, 0);
  REQUIRE(tr.rows.size() == 3);
  CHECK(tr.rows[0].price == 0.0);
  CHECK(tr.rows[1].price == 0.2);
  CHECK(tr.rows[2].price == 0.5);
  CHECK(tr.rows[0].gft == 0);
  CHECK(tr.rows[1].gft == 0);
  CHECK(tr.rows[2].gft == 0.8 - 0.2);
  CHECK_FALSE(tr.iid);
  CHECK_THROWS_AS(pseudo_regret(uniform_instance(), tr), ContractError);
  CHECK_THROWS_AS(run_episode(fbp, env, 4, 0), ParameterError);
}

TEST_CASE("empty episode") {
  FollowTheBestPrice fbp;
  const Trajectory tr = run_episode(fbp, Environment::iid(uniform_instance()), 0, 1);
  CHECK(tr.rows.empty());
  CHECK(tr.learner_gft() == 0);
  CHECK_THROWS_AS(hindsight_best(tr), ParameterError);
  CHECK(pseudo_regret(uniform_instance(), tr) == 0);
}

TEST_CASE("feedback contract is enforced by the environment") {
  FollowTheBestPrice fbp;
  auto env = Environment::iid(uniform_instance());
  env.with_feedback(FeedbackKind::kRealistic);
  CHECK_THROWS_AS(run_episode(fbp, env, 10, 0), ContractError);
  ScoutingBandits sb(1.0);
  CHECK(run_episode(sb, env, 10, 0).feedback == FeedbackKind::kRealistic);
  auto full_env = Environment::iid(uniform_instance());
  full_env.with_feedback(FeedbackKind::kFull);
  // Full feedback can always be reduced to the accept/reject bits.
  CHECK(run_episode(sb, full_env, 10, 0).feedback == FeedbackKind::kRealistic);
}

TEST_CASE("hindsight best examples") {
  const HindsightBest a = best_of({{0.2, 0.8}, {0.5, 0.6}});
  CHECK(a.price == 0.5);
  CHECK(a.total == doctest::Approx(0.7).epsilon(1e-15));
  const HindsightBest b = best_of({{0.9, 0.1}});
  CHECK(b.price == 0.1);
  CHECK(b.total == 0);
  const HindsightBest c = best_of(std::vector<ValuationPair>(10, {0.3, 0.7}));
  CHECK(c.price == 0.3);
  CHECK(c.total == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("sweep line agrees with brute force and a fine grid") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(u(rng) * 100);
    std::vector<ValuationPair> pairs;
    std::vector<oracle::Pair> plain;
    for (std::size_t i = 0; i < n; ++i) {
      // Dyadic coordinates on half the trials give exact ties.
      const auto draw = [&] { return trial % 2 ? std::round(u(rng) * 32) / 32 : u(rng); };
      const oracle::Pair v{draw(), draw()};
      plain.push_back(v);
      pairs.push_back({v.s, v.b});
    }
    const HindsightBest sweep_best = best_of(pairs);
    const oracle::Best brute = oracle::brute_force_best(plain);
    if (trial % 2) {
      CHECK(sweep_best.price == brute.price);
      CHECK(sweep_best.total == brute.total);
    } else {
      CHECK(std::abs(sweep_best.total - brute.total) <= 1e-12);
      CHECK(std::abs(oracle::cumulative(sweep_best.price, plain) - brute.total) <= 1e-12);
    }
    CHECK(oracle::grid_max(plain, 100001) <= sweep_best.total + 1e-12);
  }
}

TEST_CASE("pseudo-regret examples") {
  const auto d = uniform_instance();
  FixedPrice at_best(0.5);
  CHECK(pseudo_regret(d, run_episode(at_best, Environment::iid(d), 100, 1)) == 0.0);
  FixedPrice off(0.3);
  CHECK(pseudo_regret(d, run_episode(off, Environment::iid(d), 100, 1)) == doctest::Approx(2.0).epsilon(1e-12));

  UniformPrice uniform;
  const std::size_t horizon = 200000;
  const double r = pseudo_regret(d, run_episode(uniform, Environment::iid(d), horizon, 5));
  // Per-round gap has mean 1/24 and variance below 0.125^2.
  const double se = 0.125 / std::sqrt(static_cast<double>(horizon));
  CHECK(std::abs(r / horizon - 1.0 / 24) <= 4 * se);
}

TEST_CASE("regret non-negativity") {
  const std::vector<std::pair<std::string, MixtureDistribution>> instances = {
      {"uniform", uniform_instance()}, {"sqrt", sqrt_lower_instance(0.3)},
      {"two_third", two_third_instance(-0.3)}, {"needle", needle_instance(0.4)}};
  for (const auto& [name, d] : instances) {
    for (const char* learner : {"fbp", "uniform", "fixed"}) {
      LearnerSpec spec;
      spec.name = learner;
      spec.price = 0.37;
      auto l = make_learner_factory(spec, &d)();
      const Trajectory tr = run_episode(*l, Environment::iid(d, name), 500, 11);
      const EpisodeSummary s = summarize(tr, &d);
      CAPTURE(name);
      CAPTURE(learner);
      CHECK(s.hindsight.total >= s.learner_gft);
      CHECK(s.hindsight_regret >= 0);
      REQUIRE(s.pseudo_regret.has_value());
      CHECK(*s.pseudo_regret >= -1e-9);
      for (const auto& row : tr.rows) CHECK(row.gft == gain_from_trade(Price(row.price), {row.s, row.b}));
    }
  }
}

TEST_CASE("episodes are deterministic") {
  const auto d = two_third_instance(0.3);
  for (const char* learner : {"fbp", "sb", "uniform"}) {
    LearnerSpec spec;
    spec.name = learner;
    const auto factory = make_learner_factory(spec, &d);
    auto a = factory(), b = factory(), c = factory();
    const std::string x = trajectory_csv(run_episode(*a, Environment::iid(d), 2000, 42));
    const std::string y = trajectory_csv(run_episode(*b, Environment::iid(d), 2000, 42));
    const std::string z = trajectory_csv(run_episode(*c, Environment::iid(d), 2000, 43));
    CHECK(hex_digest(x) == hex_digest(y));
    CHECK(x == y);
    CHECK(x != z);
  }
}

TEST_CASE("rate exponent fit") {
  const std::vector<double> t = {1e3, 3e3, 1e4, 3e4, 1e5};
  std::vector<double> sqrt_r, two_third_r;
  for (double x : t) {
    sqrt_r.push_back(std::sqrt(x));
    two_third_r.push_back(3 * std::pow(x, 2.0 / 3));
  }
  const auto a = fit_rate_exponent(t, sqrt_r);
  REQUIRE(a);
  CHECK(std::abs(a->exponent - 0.5) <= 1e-12);
  CHECK(a->stderr_exponent <= 1e-12);
  const auto b = fit_rate_exponent(t, two_third_r);
  REQUIRE(b);
  CHECK(std::abs(b->exponent - 2.0 / 3) <= 1e-12);
  CHECK(std::abs(b->intercept - std::log(3.0)) <= 1e-10);

  const std::vector<double> two = {10, 100}, two_r = {1, 10};
  const auto c = fit_rate_exponent(two, two_r);
  REQUIRE(c);
  CHECK(c->exponent == doctest::Approx(1));
  CHECK(std::isnan(c->stderr_exponent));

  const std::vector<double> one = {10}, one_r = {1};
  CHECK_FALSE(fit_rate_exponent(one, one_r));
  const std::vector<double> zero_r = {0, 1};
  CHECK_FALSE(fit_rate_exponent(two, zero_r));
}

TEST_CASE("sweep aggregates replications deterministically") {
  const auto d = uniform_instance();
  LearnerSpec spec;
  spec.name = "uniform";
  SweepOptions options;
  options.horizons = {100, 400, 1600};
  options.replications = 8;
  options.base_seed = 9;
  options.jobs = 1;
  const RegretReport serial = sweep(make_learner_factory(spec, &d), d, options, "uniform");
  options.jobs = 3;
  const RegretReport parallel = sweep(make_learner_factory(spec, &d), d, options, "uniform");
  REQUIRE(serial.table.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(serial.table[i].mean_pseudo_regret == parallel.table[i].mean_pseudo_regret);
    CHECK(serial.table[i].mean_hindsight_regret == parallel.table[i].mean_hindsight_regret);
    CHECK(serial.table[i].replications == 8);
  }
  REQUIRE(serial.fit);
  // Uniform prices have linear pseudo-regret.
  CHECK(serial.fit->exponent == doctest::Approx(1).epsilon(0.05));

  // The first row equals the mean over hand-run replications.
  double total = 0;
  for (std::size_t r = 0; r < 8; ++r) {
    UniformPrice l;
    total += pseudo_regret(d, run_episode(l, Environment::iid(d), 100, derive_seed(9, r)));
  }
  CHECK(serial.table[0].mean_pseudo_regret == doctest::Approx(total / 8).epsilon(1e-12));

  options.replications = 0;
  CHECK_THROWS_AS(sweep(make_learner_factory(spec, &d), d, options), ParameterError);
  options.replications = 2;
  options.horizons = {400, 100};
  CHECK_THROWS_AS(sweep(make_learner_factory(spec, &d), d, options), ParameterError);
  options.horizons = {100};
  CHECK_FALSE(sweep(make_learner_factory(spec, &d), d, options).fit);
}
