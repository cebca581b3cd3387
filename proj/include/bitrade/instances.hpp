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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitrade/dist.hpp"

namespace bitrade {

// Bump width of the two-thirds construction.
inline constexpr double kTwoThirdTheta = 1.0 / 48.0;

enum class InstanceKind { kUniform, kSqrtLower, kTwoThird, kBdLinear, kNeedle, kCustom };

struct InstanceSpec {
  InstanceKind kind = InstanceKind::kUniform;
  double epsilon = 0;  // sqrt_lower, two_third; the sign picks the branch
  double lambda = 0;   // bd_linear mixing weight towards g
  double x = 0.5;      // needle location
  std::vector<UniformRectangle> rectangles;  // custom
  std::vector<Atom> atoms;                   // custom
  std::optional<double> density_bound;       // custom

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

std::string_view instance_name(InstanceKind kind);
InstanceKind parse_instance_kind(std::string_view name);
// Short human-readable tag, e.g. "two_third(epsilon=0.3)".
std::string describe(const InstanceSpec& spec);

MixtureDistribution uniform_instance();

// Seller density 2(1+e) on [0,1/4] and 2(1-e) on [1/2,3/4]; buyer density 2
// on [1/4,1/2] and [3/4,1].
MixtureDistribution sqrt_lower_instance(double epsilon);
std::pair<PiecewiseConstant1D, PiecewiseConstant1D> sqrt_lower_marginals(double epsilon);

// Width-1/48 bumps: seller at 0, 1/6, 1/4, 2/3 with masses (1+e)/4, (1-e)/4,
// 1/4, 1/4; buyer ending at 1/3, 3/4, 5/6, 1 with mass 1/4 each.
MixtureDistribution two_third_instance(double epsilon);
std::pair<PiecewiseConstant1D, PiecewiseConstant1D> two_third_marginals(double epsilon);

// (1 - lambda) f + lambda g, where f is uniform on three 1/8-squares and
// g(s,b) = f(1-b, 1-s). Correlated; density bound 64/3.
MixtureDistribution bd_linear_instance(double lambda);

// S in {0, x} and B in {x, 1}, independent fair coins.
MixtureDistribution needle_instance(double x);

MixtureDistribution make_instance(const InstanceSpec& spec);

}  // namespace bitrade
