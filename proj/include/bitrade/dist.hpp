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

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "bitrade/core.hpp"

namespace bitrade {

// Uniform law on [s_lo,s_hi] x [b_lo,b_hi] carrying `weight` probability mass.
struct UniformRectangle {
  double s_lo = 0, s_hi = 1, b_lo = 0, b_hi = 1;
  double weight = 1;

  double area() const { return (s_hi - s_lo) * (b_hi - b_lo); }
  double density() const { return weight / area(); }

  friend bool operator==(const UniformRectangle&, const UniformRectangle&) = default;
};

struct Atom {
  ValuationPair point;
  double weight = 0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Piecewise-constant density on [0,1]. heights[i] applies on
// [breakpoints[i], breakpoints[i+1]).
class PiecewiseConstant1D {
 public:
  struct Piece {
    double lo, hi, height;
  };

  PiecewiseConstant1D(std::vector<double> breakpoints, std::vector<double> heights);

  // Builds a density from disjoint bumps; gaps get height zero.
  static PiecewiseConstant1D from_pieces(std::vector<Piece> pieces);
  static PiecewiseConstant1D uniform();

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& heights() const { return heights_; }
  std::size_t size() const { return heights_.size(); }

  double mass(std::size_t piece) const;
  double max_height() const;
  // P[X <= x].
  double cdf(double x) const;
  // Integral of the cdf over [0, x]; piecewise quadratic.
  double cdf_integral(double x) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> heights_;
  std::vector<double> cdf_at_;           // cdf at each breakpoint
  std::vector<double> cdf_integral_at_;  // cdf_integral at each breakpoint
};

// Joint valuation law: a finite mixture of uniform rectangles and point atoms.
// Immutable once built.
class MixtureDistribution {
 public:
  // General (possibly correlated) mixture. Zero-weight components are dropped;
  // the density bound is the largest rectangle density when there are no atoms.
  static MixtureDistribution mixture(std::vector<UniformRectangle> rectangles,
                                     std::vector<Atom> atoms,
                                     std::optional<double> density_bound = std::nullopt);

  const std::vector<UniformRectangle>& rectangles() const { return rectangles_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<double>& density_bound() const { return density_bound_; }
  bool independent() const { return independent_; }
  // Marginal densities when built by product_distribution.
  const std::optional<std::pair<PiecewiseConstant1D, PiecewiseConstant1D>>& marginals() const {
    return marginals_;
  }

  std::size_t component_count() const { return rectangles_.size() + atoms_.size(); }

  friend MixtureDistribution product_distribution(const PiecewiseConstant1D& seller,
                                                  const PiecewiseConstant1D& buyer);
  friend MixtureDistribution discrete_product(
      const std::vector<std::pair<double, double>>& seller,
      const std::vector<std::pair<double, double>>& buyer);
  friend ValuationPair sample(const MixtureDistribution& dist, double u1, double u2, double u3);

 private:
  MixtureDistribution() = default;
  void finalize();

  std::vector<UniformRectangle> rectangles_;
  std::vector<Atom> atoms_;
  std::optional<double> density_bound_;
  bool independent_ = false;
  std::optional<std::pair<PiecewiseConstant1D, PiecewiseConstant1D>> marginals_;
  std::vector<double> cumulative_;  // component selection table for sample()
};

// Product of two piecewise-constant marginals; one rectangle per pair of
// positive-mass pieces.
MixtureDistribution product_distribution(const PiecewiseConstant1D& seller,
                                         const PiecewiseConstant1D& buyer);

// Product of two discrete marginals given as (value, probability) lists,
// expanded into atoms in seller-major order.
MixtureDistribution discrete_product(const std::vector<std::pair<double, double>>& seller,
                                     const std::vector<std::pair<double, double>>& buyer);

// u1 picks the component by cumulative weight, (u2,u3) map affinely into the
// chosen rectangle and are ignored for atoms.
ValuationPair sample(const MixtureDistribution& dist, double u1, double u2, double u3);

// E[(B - S) 1{S <= p <= B}] in closed form, component by component.
double expected_gft(const MixtureDistribution& dist, Price p);

// The same expectation through the independent-marginals decomposition
//   P[S<=p] * int_p^1 P[B>=l] dl + P[B>=p] * int_0^p P[S<=l] dl.
double expected_gft_independent(const PiecewiseConstant1D& seller,
                                const PiecewiseConstant1D& buyer, Price p);

struct BestPrice {
  double price = 0;
  double value = 0;
};

// Exact maximiser of p -> expected_gft(dist, p); smallest price on ties.
BestPrice best_fixed_price(const MixtureDistribution& dist);

// Sorted, de-duplicated breakpoints of the expected-GFT curve (includes 0, 1).
std::vector<double> gft_breakpoints(const MixtureDistribution& dist);

// Probabilities of the four accept/reject outcomes at price p.
struct FeedbackLaw {
  std::array<double, 4> probabilities{};  // index 2*seller_accepts + buyer_accepts

  double operator()(bool seller_accepts, bool buyer_accepts) const {
    return probabilities[2 * static_cast<int>(seller_accepts) + static_cast<int>(buyer_accepts)];
  }
};

FeedbackLaw feedback_law(const MixtureDistribution& dist, Price p);

}  // namespace bitrade
