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

#include "bitrade/adversary.hpp"

#include "bitrade/multiprecision.hpp"

namespace bitrade {

AdversaryOutcome run_exact_adversarial_episode(const LearnerSpec& spec, const AdversaryOptions& options) {
  validate_cantor_epsilon(options.epsilon);
  const std::size_t bits = cantor_precision_bits(options.horizon);
  PrecisionScope scope(bits);
  const auto factory = make_basic_learner_factory<ExactScalar>(spec);
  auto episode = run_adversarial_episode<ExactScalar>(factory, options);
  episode.report.precision_bits = static_cast<std::size_t>(mpfr_get_prec(episode.state.c.backend().data()));
  return {std::move(episode.trajectory), std::move(episode.report)};
}

}  // namespace bitrade
