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

#include "bitrade/instances.hpp"

#include <cmath>
#include <sstream>

namespace bitrade {
namespace {

// Every breakpoint is a small rational; converting once keeps repeated
// constructions bit-identical.
constexpr double rational(long numerator, long denominator) {
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

void check_signed_epsilon(double epsilon) {
  if (!(epsilon >= -1 && epsilon <= 1)) {
    throw ParameterError("epsilon must lie in [-1,1], got " + std::to_string(epsilon));
  }
}

}  // namespace

std::string_view instance_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kUniform: return "uniform";
    case InstanceKind::kSqrtLower: return "sqrt_lower";
    case InstanceKind::kTwoThird: return "two_third";
    case InstanceKind::kBdLinear: return "bd_linear";
    case InstanceKind::kNeedle: return "needle";
    case InstanceKind::kCustom: return "custom";
  }
  return "unknown";
}

InstanceKind parse_instance_kind(std::string_view name) {
  for (auto kind : {InstanceKind::kUniform, InstanceKind::kSqrtLower, InstanceKind::kTwoThird,
                    InstanceKind::kBdLinear, InstanceKind::kNeedle, InstanceKind::kCustom}) {
    if (instance_name(kind) == name) return kind;
  }
  throw ParameterError("unknown instance '" + std::string(name) + "'");
}

std::string describe(const InstanceSpec& spec) {
  std::ostringstream out;
  out << instance_name(spec.kind);
  switch (spec.kind) {
    case InstanceKind::kSqrtLower:
    case InstanceKind::kTwoThird: out << "(epsilon=" << spec.epsilon << ")"; break;
    case InstanceKind::kBdLinear: out << "(lambda=" << spec.lambda << ")"; break;
    case InstanceKind::kNeedle: out << "(x=" << spec.x << ")"; break;
    case InstanceKind::kCustom:
      out << "(" << spec.rectangles.size() << " rectangles, " << spec.atoms.size() << " atoms)";
      break;
    case InstanceKind::kUniform: break;
  }
  return out.str();
}

MixtureDistribution uniform_instance() {
  return product_distribution(PiecewiseConstant1D::uniform(), PiecewiseConstant1D::uniform());
}

std::pair<PiecewiseConstant1D, PiecewiseConstant1D> sqrt_lower_marginals(double epsilon) {
  check_signed_epsilon(epsilon);
  auto seller = PiecewiseConstant1D::from_pieces({
      {0.0, rational(1, 4), 2 * (1 + epsilon)},
      {rational(1, 2), rational(3, 4), 2 * (1 - epsilon)},
  });
  auto buyer = PiecewiseConstant1D::from_pieces({
      {rational(1, 4), rational(1, 2), 2.0},
      {rational(3, 4), 1.0, 2.0},
  });
  return {std::move(seller), std::move(buyer)};
}

MixtureDistribution sqrt_lower_instance(double epsilon) {
  auto [seller, buyer] = sqrt_lower_marginals(epsilon);
  return product_distribution(seller, buyer);
}

std::pair<PiecewiseConstant1D, PiecewiseConstant1D> two_third_marginals(double epsilon) {
  check_signed_epsilon(epsilon);
  // Positions in units of theta = 1/48; bump height is 1/(4 theta) = 12.
  const double height = 1.0 / (4 * kTwoThirdTheta);
  auto seller = PiecewiseConstant1D::from_pieces({
      {0.0, rational(1, 48), (1 + epsilon) * height},
      {rational(8, 48), rational(9, 48), (1 - epsilon) * height},
      {rational(12, 48), rational(13, 48), height},
      {rational(32, 48), rational(33, 48), height},
  });
  auto buyer = PiecewiseConstant1D::from_pieces({
      {rational(15, 48), rational(16, 48), height},
      {rational(35, 48), rational(36, 48), height},
      {rational(39, 48), rational(40, 48), height},
      {rational(47, 48), 1.0, height},
  });
  return {std::move(seller), std::move(buyer)};
}

MixtureDistribution two_third_instance(double epsilon) {
  auto [seller, buyer] = two_third_marginals(epsilon);
  return product_distribution(seller, buyer);
}

MixtureDistribution bd_linear_instance(double lambda) {
  if (!(lambda >= 0 && lambda <= 1)) {
    throw ParameterError("lambda must lie in [0,1], got " + std::to_string(lambda));
  }
  const auto e = [](long k) { return rational(k, 8); };
  const double wf = (1 - lambda) / 3, wg = lambda / 3;
  return MixtureDistribution::mixture(
      {
          {e(0), e(1), e(3), e(4), wf},
          {e(2), e(3), e(7), e(8), wf},
          {e(4), e(5), e(5), e(6), wf},
          // reflections (s, b) -> (1 - b, 1 - s)
          {e(4), e(5), e(7), e(8), wg},
          {e(0), e(1), e(5), e(6), wg},
          {e(2), e(3), e(3), e(4), wg},
      },
      {}, 64.0 / 3.0);
}

MixtureDistribution needle_instance(double x) {
  if (!(x > 0 && x < 1)) {
    throw ParameterError("needle location must lie in (0,1), got " + std::to_string(x));
  }
  return discrete_product({{0.0, 0.5}, {x, 0.5}}, {{x, 0.5}, {1.0, 0.5}});
}

MixtureDistribution make_instance(const InstanceSpec& spec) {
  switch (spec.kind) {
    case InstanceKind::kUniform: return uniform_instance();
    case InstanceKind::kSqrtLower: return sqrt_lower_instance(spec.epsilon);
    case InstanceKind::kTwoThird: return two_third_instance(spec.epsilon);
    case InstanceKind::kBdLinear: return bd_linear_instance(spec.lambda);
    case InstanceKind::kNeedle: return needle_instance(spec.x);
    case InstanceKind::kCustom: return MixtureDistribution::mixture(spec.rectangles, spec.atoms, spec.density_bound);
  }
  throw ParameterError("unknown instance kind");
}

}  // namespace bitrade
