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

#include "bitrade/adversary.hpp"
#include "bitrade/multiprecision.hpp"

using namespace bitrade;

namespace {

// Probe that reports a fixed cumulative law, for hand-checked branch tests.
class LawProbe final : public BasicPriceProbe<double> {
 public:
  explicit LawProbe(double (*cdf)(double)) : cdf_(cdf) {}
  double mass_at_most(const double& x) override { return cdf_(x); }
  void observe(const ValuationPair&) override {}
  std::size_t samples() const override { return 1; }
  bool exact() const override { return true; }

 private:
  double (*cdf_)(double);
};

LearnerSpec learner(const std::string& name, double price = 0.5) {
  LearnerSpec spec;
  spec.name = name;
  spec.price = price;
  return spec;
}

AdversaryOptions options(std::size_t horizon, double epsilon = 0.05) {
  AdversaryOptions o;
  o.horizon = horizon;
  o.epsilon = epsilon;
  o.seed = 1;
  return o;
}

}  // namespace

TEST_CASE("first step examples") {
  {
    auto state = make_cantor_state<double>(0.03);
    LawProbe always_high([](double x) { return x >= 0.9 ? 1.0 : 0.0; });
    const auto step = cantor_step(state, always_high);
    CHECK(step.low_branch);
    CHECK(step.probe_mass == 0);
    CHECK(state.c == doctest::Approx(0.455).epsilon(1e-15));
    CHECK(state.d == doctest::Approx(0.485).epsilon(1e-15));
    CHECK(step.pair.s == 0);
    CHECK(step.pair.b == doctest::Approx(0.485).epsilon(1e-15));
  }
  {
    auto state = make_cantor_state<double>(0.03);
    LawProbe uniform([](double x) { return x; });
    const auto step = cantor_step(state, uniform);
    CHECK(step.probe_mass == doctest::Approx(0.485));
    CHECK(step.low_branch);
    CHECK(step.pair.b == doctest::Approx(0.485).epsilon(1e-15));
  }
  {
    auto state = make_cantor_state<double>(0.03);
    LawProbe always_low([](double) { return 1.0; });
    const auto step = cantor_step(state, always_low);
    CHECK_FALSE(step.low_branch);
    CHECK(state.c == doctest::Approx(0.515).epsilon(1e-15));
    CHECK(state.d == doctest::Approx(0.545).epsilon(1e-15));
    CHECK(step.pair.s == doctest::Approx(0.515).epsilon(1e-15));
    CHECK(step.pair.b == 1);
  }
}

TEST_CASE("fixed(0.9) never trades against the construction") {
  auto episode = run_adversarial_episode<double>(make_basic_learner_factory<double>(learner("fixed", 0.9)),
                                                 options(100, 0.03));
  CHECK(episode.report.learner_gft == 0);
  CHECK(episode.report.low_branch_rounds == 100);
  CHECK(episode.report.benchmark_gft >= 0.455 * 100);
  CHECK(episode.report.probe_exact);
  CHECK(episode.report.probe_samples == 1);
}

TEST_CASE("epsilon validation and feedback contract") {
  CHECK_THROWS_AS(make_cantor_state<double>(0.0), ParameterError);
  CHECK_THROWS_AS(make_cantor_state<double>(1.0 / 18), ParameterError);
  CHECK_THROWS_AS(make_cantor_state<double>(0.2), ParameterError);
  CHECK_NOTHROW(make_cantor_state<double>(0.055));
  auto realistic = learner("fixed");
  realistic.feedback = FeedbackKind::kRealistic;
  CHECK_THROWS_AS(run_exact_adversarial_episode(realistic, options(10)), ContractError);
  CHECK_THROWS_AS(run_exact_adversarial_episode(learner("sb"), options(10)), ContractError);
  CHECK_THROWS_AS(run_exact_adversarial_episode(learner("fbp"), options(10, 0.1)), ParameterError);
}

TEST_CASE("nesting and width are exact in extended precision") {
  const std::size_t horizon = 300;
  PrecisionScope scope(cantor_precision_bits(horizon));
  for (const char* name : {"fbp", "fixed", "uniform"}) {
    const auto factory = make_basic_learner_factory<ExactScalar>(learner(name, 0.51));
    auto o = options(horizon);
    o.probe_samples = 16;
    const auto episode = run_adversarial_episode<ExactScalar>(factory, o);
    // Replay the recorded branches independently.
    const ExactScalar eps(0.05);
    ExactScalar c(0), d(1), third_power(1);
    for (std::size_t t = 1; t <= horizon; ++t) {
      const auto& step = episode.steps[t - 1];
      ExactScalar nc = c, nd = d;
      if (t == 1) {
        nc = step.low_branch ? ExactScalar(0.5) - 3 * eps / 2 : ExactScalar(0.5) + eps / 2;
        nd = nc + eps;
      } else if (step.low_branch) {
        nd = d - 2 * eps / (third_power * 3);
      } else {
        nc = c + 2 * eps / (third_power * 3);
      }
      if (t > 1) third_power *= 3;
      const ExactScalar width = eps / third_power;  // eps / 3^(t-1)
      CHECK(nc >= c);
      CHECK(nd <= d);
      CHECK(nc < nd);
      const ExactScalar rel = boost::multiprecision::abs((nd - nc) - width) / width;
      // The 64 guard bits leave about 2^-60 relative error in the last round.
      CHECK(rel < ExactScalar(std::ldexp(1.0, -50)));
      CHECK(step.pair.s <= nc);
      CHECK(step.pair.b >= nd);
      CHECK(step.pair.b - step.pair.s >= (1 - 3 * eps) / 2);
      c = nc;
      d = nd;
    }
    CHECK(boost::multiprecision::abs(episode.state.c - c) / episode.state.width < ExactScalar(std::ldexp(1.0, -50)));
    CHECK(boost::multiprecision::abs(episode.state.d - d) / episode.state.width < ExactScalar(std::ldexp(1.0, -50)));
    // The final midpoint trades in every round.
    const ExactScalar mid = (episode.state.c + episode.state.d) / 2;
    for (const auto& v : episode.state.history) {
      CHECK(v.s <= mid);
      CHECK(mid <= v.b);
    }
  }
}

TEST_CASE("double precision loses the nesting within a few dozen rounds") {
  const auto factory = make_basic_learner_factory<double>(learner("fbp"));
  const auto episode = run_adversarial_episode<double>(factory, options(200));
  // Once eps / 3^t drops below the spacing of doubles near 1/2, the endpoints stop moving.
  const double gap = episode.state.d - episode.state.c;
  const double expected_width = 0.05 / std::pow(3.0, 199);
  const bool collapsed = std::abs(gap - expected_width) > expected_width;
  CHECK(collapsed);
}

TEST_CASE("shadow probe agrees with literal replay") {
  for (const char* name : {"fbp", "uniform"}) {
    const auto factory = make_basic_learner_factory<double>(learner(name));
    auto o = options(40);
    o.probe_samples = 8;
    const auto shadow = run_adversarial_episode<double>(factory, o);
    o.replay_probe = true;
    const auto replay = run_adversarial_episode<double>(factory, o);
    REQUIRE(shadow.steps.size() == replay.steps.size());
    for (std::size_t t = 0; t < shadow.steps.size(); ++t) {
      CHECK(shadow.steps[t].probe_mass == replay.steps[t].probe_mass);
      CHECK(shadow.steps[t].low_branch == replay.steps[t].low_branch);
    }
    CHECK(shadow.trajectory.rows == replay.trajectory.rows);
  }
}

TEST_CASE("guarantee for deterministic learners") {
  for (std::size_t horizon : {100u, 1000u, 10000u}) {
    for (const auto& spec : {learner("fbp"), learner("fixed", 0.5), learner("fixed", 0.9), learner("fixed", 0.476)}) {
      if (horizon == 10000 && spec.name == "fixed" && spec.price != 0.5) continue;
      const auto outcome = run_exact_adversarial_episode(spec, options(horizon));
      const auto& r = outcome.report;
      CAPTURE(horizon);
      CAPTURE(spec.name);
      CAPTURE(spec.price);
      CHECK(r.probe_exact);
      CHECK(r.tolerance == 0);
      CHECK(r.bound == doctest::Approx((1 - 0.15) / 4 * horizon));
      CHECK(r.regret >= r.bound - 1);
      CHECK(r.guarantee_met);
      CHECK(r.benchmark_gft >= (1 - 0.15) / 2 * horizon - 1e-6);
      CHECK(r.hindsight_best_total >= r.benchmark_gft - 1e-6);
      CHECK(r.precision_bits >= cantor_precision_bits(horizon));
    }
  }
}

TEST_CASE("randomized learner report carries the probe error") {
  auto o = options(500);
  o.probe_samples = 64;
  const auto outcome = run_exact_adversarial_episode(learner("uniform"), o);
  const auto& r = outcome.report;
  CHECK_FALSE(r.probe_exact);
  CHECK(r.probe_samples == 64);
  CHECK(r.probe_stderr > 0);
  CHECK(r.tolerance == doctest::Approx(3 * r.probe_stderr));
  CHECK(r.guarantee_met == (r.regret >= r.bound - r.tolerance));
  CHECK(r.regret >= r.bound - r.tolerance);
}

TEST_CASE("small epsilon limit") {
  const auto outcome = run_exact_adversarial_episode(learner("fixed", 0.9), options(50, 1e-6));
  CHECK(outcome.report.benchmark_gft / 50 == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("precision scope restores the previous default") {
  const unsigned before = ExactScalar::default_precision();
  {
    PrecisionScope scope(1000);
    CHECK(ExactScalar::default_precision() >= 300);
  }
  CHECK(ExactScalar::default_precision() == before);
  CHECK(cantor_precision_bits(10000) == 15914);
}
