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

#include "bitrade/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bitrade {
namespace {

constexpr double kMassTolerance = 1e-12;

bool in_unit(double x) { return x >= 0 && x <= 1; }

void check_total(double total, const char* what) {
  if (!(std::abs(total - 1.0) <= kMassTolerance)) {
    throw ParameterError(std::string(what) + " must have total mass 1, got " +
                         std::to_string(total));
  }
}

// Seller-side quantities of a rectangle at price p: P[S <= p] and E[S 1{S <= p}].
struct SellerTerms {
  double accept, partial_mean;
};
SellerTerms seller_terms(const UniformRectangle& r, double p) {
  if (p <= r.s_lo) return {0, 0};
  if (p >= r.s_hi) return {1, 0.5 * (r.s_lo + r.s_hi)};
  const double width = r.s_hi - r.s_lo;
  return {(p - r.s_lo) / width, (p - r.s_lo) * (p + r.s_lo) / (2 * width)};
}

// Buyer-side quantities: P[B >= p] and E[B 1{B >= p}].
struct BuyerTerms {
  double accept, partial_mean;
};
BuyerTerms buyer_terms(const UniformRectangle& r, double p) {
  if (p >= r.b_hi) return {0, 0};
  if (p <= r.b_lo) return {1, 0.5 * (r.b_lo + r.b_hi)};
  const double width = r.b_hi - r.b_lo;
  return {(r.b_hi - p) / width, (r.b_hi - p) * (r.b_hi + p) / (2 * width)};
}

// Coefficients (c0, c1, c2) of the rectangle's unweighted expected GFT on the
// open interval containing `mid`, where no rectangle edge is crossed.
std::array<double, 3> rectangle_quadratic(const UniformRectangle& r, double mid) {
  const bool s_below = mid < r.s_lo, s_above = mid > r.s_hi;
  const bool b_below = mid < r.b_lo, b_above = mid > r.b_hi;
  if (s_below || b_above) return {0, 0, 0};
  const double ws = r.s_hi - r.s_lo, wb = r.b_hi - r.b_lo;
  const double mean_s = 0.5 * (r.s_lo + r.s_hi), mean_b = 0.5 * (r.b_lo + r.b_hi);
  if (s_above && b_below) return {mean_b - mean_s, 0, 0};
  if (s_above) {
    // (b_hi^2 - p^2) / (2 wb) - (b_hi - p) / wb * mean_s
    return {(r.b_hi * r.b_hi / 2 - r.b_hi * mean_s) / wb, mean_s / wb, -0.5 / wb};
  }
  if (b_below) {
    // (p - s_lo) / ws * mean_b - (p^2 - s_lo^2) / (2 ws)
    return {(r.s_lo * r.s_lo / 2 - r.s_lo * mean_b) / ws, mean_b / ws, -0.5 / ws};
  }
  // Both interior: (p - s_lo)(b_hi - p)(b_hi - s_lo) / (2 ws wb).
  const double k = (r.b_hi - r.s_lo) / (2 * ws * wb);
  return {-k * r.s_lo * r.b_hi, k * (r.s_lo + r.b_hi), -k};
}

void validate_rectangle(const UniformRectangle& r) {
  if (!(in_unit(r.s_lo) && in_unit(r.s_hi) && in_unit(r.b_lo) && in_unit(r.b_hi) &&
        r.s_lo < r.s_hi && r.b_lo < r.b_hi)) {
    throw ParameterError("rectangle must satisfy 0 <= lo < hi <= 1 on both axes");
  }
  if (!(r.weight >= 0 && std::isfinite(r.weight))) {
    throw ParameterError("rectangle weight must be finite and non-negative");
  }
}

void validate_atom(const Atom& a) {
  validate(a.point);
  if (!(a.weight >= 0 && std::isfinite(a.weight))) {
    throw ParameterError("atom weight must be finite and non-negative");
  }
}

// Largest joint density over the arrangement of (possibly overlapping) rectangles.
double max_joint_density(const std::vector<UniformRectangle>& rectangles) {
  std::vector<double> xs, ys;
  for (const auto& r : rectangles) {
    xs.insert(xs.end(), {r.s_lo, r.s_hi});
    ys.insert(ys.end(), {r.b_lo, r.b_hi});
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  double best = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x = 0.5 * (xs[i] + xs[i + 1]);
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const double y = 0.5 * (ys[j] + ys[j + 1]);
      double density = 0;
      for (const auto& r : rectangles) {
        if (r.s_lo < x && x < r.s_hi && r.b_lo < y && y < r.b_hi) density += r.density();
      }
      best = std::max(best, density);
    }
  }
  return best;
}

}  // namespace

PiecewiseConstant1D::PiecewiseConstant1D(std::vector<double> breakpoints,
                                         std::vector<double> heights)
    : breakpoints_(std::move(breakpoints)), heights_(std::move(heights)) {
  if (breakpoints_.size() < 2 || heights_.size() + 1 != breakpoints_.size()) {
    throw ParameterError("piecewise density needs n+1 breakpoints for n heights");
  }
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw ParameterError("piecewise density breakpoints must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1])) {
      throw ParameterError("piecewise density breakpoints must be strictly increasing");
    }
    if (!(heights_[i] >= 0 && std::isfinite(heights_[i]))) {
      throw ParameterError("piecewise density heights must be finite and non-negative");
    }
  }
  cdf_at_.assign(breakpoints_.size(), 0.0);
  cdf_integral_at_.assign(breakpoints_.size(), 0.0);
  for (std::size_t i = 0; i < heights_.size(); ++i) {
    const double width = breakpoints_[i + 1] - breakpoints_[i];
    cdf_at_[i + 1] = cdf_at_[i] + heights_[i] * width;
    cdf_integral_at_[i + 1] =
        cdf_integral_at_[i] + cdf_at_[i] * width + 0.5 * heights_[i] * width * width;
  }
  check_total(cdf_at_.back(), "piecewise density");
}

PiecewiseConstant1D PiecewiseConstant1D::from_pieces(std::vector<Piece> pieces) {
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  std::vector<double> breakpoints{0.0};
  std::vector<double> heights;
  for (const auto& piece : pieces) {
    if (!(in_unit(piece.lo) && in_unit(piece.hi) && piece.lo < piece.hi)) {
      throw ParameterError("density piece must satisfy 0 <= lo < hi <= 1");
    }
    if (piece.lo < breakpoints.back()) throw ParameterError("density pieces overlap");
    if (piece.lo > breakpoints.back()) {
      heights.push_back(0.0);
      breakpoints.push_back(piece.lo);
    }
    heights.push_back(piece.height);
    breakpoints.push_back(piece.hi);
  }
  if (breakpoints.back() < 1.0) {
    heights.push_back(0.0);
    breakpoints.push_back(1.0);
  }
  return PiecewiseConstant1D(std::move(breakpoints), std::move(heights));
}

PiecewiseConstant1D PiecewiseConstant1D::uniform() { return PiecewiseConstant1D({0.0, 1.0}, {1.0}); }

double PiecewiseConstant1D::mass(std::size_t piece) const {
  return heights_[piece] * (breakpoints_[piece + 1] - breakpoints_[piece]);
}

double PiecewiseConstant1D::max_height() const {
  return *std::max_element(heights_.begin(), heights_.end());
}

double PiecewiseConstant1D::cdf(double x) const {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return cdf_at_[i] + heights_[i] * (x - breakpoints_[i]);
}

double PiecewiseConstant1D::cdf_integral(double x) const {
  if (x <= 0) return 0;
  x = std::min(x, 1.0);
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto i = std::min(static_cast<std::size_t>(it - breakpoints_.begin()) - 1, heights_.size() - 1);
  const double d = x - breakpoints_[i];
  return cdf_integral_at_[i] + cdf_at_[i] * d + 0.5 * heights_[i] * d * d;
}

MixtureDistribution MixtureDistribution::mixture(std::vector<UniformRectangle> rectangles,
                                                 std::vector<Atom> atoms,
                                                 std::optional<double> density_bound) {
  MixtureDistribution dist;
  double total = 0;
  for (const auto& r : rectangles) {
    validate_rectangle(r);
    total += r.weight;
    if (r.weight > 0) dist.rectangles_.push_back(r);
  }
  for (const auto& a : atoms) {
    validate_atom(a);
    total += a.weight;
    if (a.weight > 0) dist.atoms_.push_back(a);
  }
  check_total(total, "mixture");
  const double joint = max_joint_density(dist.rectangles_);
  if (density_bound) {
    if (!dist.atoms_.empty()) throw ParameterError("a density bound excludes atoms");
    if (!(*density_bound >= 1) || joint > *density_bound * (1 + 1e-12)) {
      throw ParameterError("density bound must be >= 1 and dominate every rectangle density");
    }
    dist.density_bound_ = density_bound;
  } else if (dist.atoms_.empty()) {
    dist.density_bound_ = std::max(1.0, joint);
  }
  dist.finalize();
  return dist;
}

void MixtureDistribution::finalize() {
  cumulative_.clear();
  double acc = 0;
  for (const auto& r : rectangles_) cumulative_.push_back(acc += r.weight);
  for (const auto& a : atoms_) cumulative_.push_back(acc += a.weight);
}

MixtureDistribution product_distribution(const PiecewiseConstant1D& seller,
                                         const PiecewiseConstant1D& buyer) {
  MixtureDistribution dist;
  const auto& sb = seller.breakpoints();
  const auto& bb = buyer.breakpoints();
  double total = 0;
  for (std::size_t i = 0; i < seller.size(); ++i) {
    const double ms = seller.mass(i);
    if (ms <= 0) continue;
    for (std::size_t j = 0; j < buyer.size(); ++j) {
      const double mb = buyer.mass(j);
      if (mb <= 0) continue;
      dist.rectangles_.push_back({sb[i], sb[i + 1], bb[j], bb[j + 1], ms * mb});
      total += ms * mb;
    }
  }
  check_total(total, "product distribution");
  dist.density_bound_ = seller.max_height() * buyer.max_height();
  dist.independent_ = true;
  dist.marginals_.emplace(seller, buyer);
  dist.finalize();
  return dist;
}

MixtureDistribution discrete_product(const std::vector<std::pair<double, double>>& seller,
                                     const std::vector<std::pair<double, double>>& buyer) {
  const auto check = [](const std::vector<std::pair<double, double>>& law, const char* who) {
    double total = 0;
    for (const auto& [value, prob] : law) {
      if (!in_unit(value) || !(prob >= 0)) {
        throw ParameterError(std::string(who) + " atoms need values in [0,1] and prob >= 0");
      }
      total += prob;
    }
    check_total(total, who);
  };
  check(seller, "seller law");
  check(buyer, "buyer law");
  MixtureDistribution dist;
  for (const auto& [s, ps] : seller) {
    for (const auto& [b, pb] : buyer) {
      if (ps * pb > 0) dist.atoms_.push_back({{s, b}, ps * pb});
    }
  }
  dist.independent_ = true;
  dist.finalize();
  return dist;
}

ValuationPair sample(const MixtureDistribution& dist, double u1, double u2, double u3) {
  const auto& cumulative = dist.cumulative_;
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u1);
  auto index = static_cast<std::size_t>(it - cumulative.begin());
  index = std::min(index, cumulative.size() - 1);
  const auto& rectangles = dist.rectangles();
  if (index < rectangles.size()) {
    const auto& r = rectangles[index];
    return {r.s_lo + u2 * (r.s_hi - r.s_lo), r.b_lo + u3 * (r.b_hi - r.b_lo)};
  }
  return dist.atoms()[index - rectangles.size()].point;
}

double expected_gft(const MixtureDistribution& dist, Price p) {
  const double price = p.value();
  double total = 0;
  for (const auto& r : dist.rectangles()) {
    const auto seller = seller_terms(r, price);
    const auto buyer = buyer_terms(r, price);
    total += r.weight * (seller.accept * buyer.partial_mean - buyer.accept * seller.partial_mean);
  }
  for (const auto& a : dist.atoms()) total += a.weight * gain_from_trade(p, a.point);
  return total;
}

double expected_gft_independent(const PiecewiseConstant1D& seller,
                                const PiecewiseConstant1D& buyer, Price p) {
  const double price = p.value();
  const double seller_accepts = seller.cdf(price);
  const double buyer_accepts = 1.0 - buyer.cdf(price);
  // int_p^1 P[B >= l] dl = (1 - p) - int_p^1 F_B
  const double buyer_tail =
      (1.0 - price) - (buyer.cdf_integral(1.0) - buyer.cdf_integral(price));
  const double seller_head = seller.cdf_integral(price);
  return seller_accepts * buyer_tail + buyer_accepts * seller_head;
}

std::vector<double> gft_breakpoints(const MixtureDistribution& dist) {
  std::vector<double> points{0.0, 1.0};
  for (const auto& r : dist.rectangles()) points.insert(points.end(), {r.s_lo, r.s_hi, r.b_lo, r.b_hi});
  for (const auto& a : dist.atoms()) points.insert(points.end(), {a.point.s, a.point.b});
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

BestPrice best_fixed_price(const MixtureDistribution& dist) {
  const auto breakpoints = gft_breakpoints(dist);
  std::vector<double> candidates = breakpoints;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double lo = breakpoints[i], hi = breakpoints[i + 1];
    const double mid = 0.5 * (lo + hi);
    double c1 = 0, c2 = 0;
    for (const auto& r : dist.rectangles()) {
      const auto q = rectangle_quadratic(r, mid);
      c1 += r.weight * q[1];
      c2 += r.weight * q[2];
    }
    if (c2 < 0) {
      const double vertex = -c1 / (2 * c2);
      if (lo < vertex && vertex < hi) candidates.push_back(vertex);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  BestPrice best{candidates.front(), expected_gft(dist, Price(candidates.front()))};
  for (const double c : candidates) {
    const double value = expected_gft(dist, Price(c));
    if (value > best.value) best = {c, value};
  }
  return best;
}

FeedbackLaw feedback_law(const MixtureDistribution& dist, Price p) {
  const double price = p.value();
  FeedbackLaw law;
  auto& pr = law.probabilities;
  for (const auto& r : dist.rectangles()) {
    const double qs = std::clamp((price - r.s_lo) / (r.s_hi - r.s_lo), 0.0, 1.0);
    const double qb = std::clamp((r.b_hi - price) / (r.b_hi - r.b_lo), 0.0, 1.0);
    pr[0] += r.weight * (1 - qs) * (1 - qb);
    pr[1] += r.weight * (1 - qs) * qb;
    pr[2] += r.weight * qs * (1 - qb);
    pr[3] += r.weight * qs * qb;
  }
  for (const auto& a : dist.atoms()) {
    const auto fb = realistic_feedback(p, a.point);
    pr[2 * static_cast<int>(fb.seller_accepts) + static_cast<int>(fb.buyer_accepts)] += a.weight;
  }
  return law;
}

}  // namespace bitrade
