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

#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "bitrade/errors.hpp"

namespace bitrade {

// A posted price in [0,1]. Scalar is double everywhere except the adversarial
// construction, which needs more precision than a double carries.
template <typename Scalar>
class BasicPrice {
 public:
  BasicPrice() = default;
  explicit BasicPrice(Scalar value) : value_(std::move(value)) {
    if (!(value_ >= 0 && value_ <= 1)) {
      throw ParameterError("price must lie in [0,1], got " +
                           std::to_string(static_cast<double>(value_)));
    }
  }

  const Scalar& value() const noexcept { return value_; }

 private:
  Scalar value_{0};
};

// One round's private valuations. No ordering between s and b is implied.
template <typename Scalar>
struct BasicValuationPair {
  Scalar s{0};
  Scalar b{0};

  friend bool operator==(const BasicValuationPair&, const BasicValuationPair&) = default;
};

struct RealisticFeedback {
  bool seller_accepts = false;  // s <= p
  bool buyer_accepts = false;   // p <= b

  friend bool operator==(const RealisticFeedback&, const RealisticFeedback&) = default;
};

template <typename Scalar>
struct BasicFullFeedback {
  BasicValuationPair<Scalar> valuations;
};

template <typename Scalar>
using BasicFeedback = std::variant<BasicFullFeedback<Scalar>, RealisticFeedback>;

enum class FeedbackKind { kFull, kRealistic };

using Price = BasicPrice<double>;
using ValuationPair = BasicValuationPair<double>;
using FullFeedback = BasicFullFeedback<double>;
using Feedback = BasicFeedback<double>;

inline std::string_view to_string(FeedbackKind kind) {
  return kind == FeedbackKind::kFull ? "full" : "realistic";
}

inline FeedbackKind parse_feedback_kind(std::string_view name) {
  if (name == "full") return FeedbackKind::kFull;
  if (name == "realistic") return FeedbackKind::kRealistic;
  throw ParameterError("unknown feedback kind '" + std::string(name) + "'");
}

// Full feedback reveals enough to reconstruct the accept bits, so it serves
// learners of either kind; realistic feedback serves only realistic learners.
inline bool feedback_satisfies(FeedbackKind provided, FeedbackKind required) {
  return provided == FeedbackKind::kFull || required == FeedbackKind::kRealistic;
}

inline void validate(const ValuationPair& v) {
  if (!(v.s >= 0 && v.s <= 1 && v.b >= 0 && v.b <= 1)) {
    throw ParameterError("valuations must lie in [0,1]^2, got (" + std::to_string(v.s) + ", " +
                         std::to_string(v.b) + ")");
  }
}

// (b - s) * 1{s <= p <= b}, both inequalities inclusive.
template <typename Scalar>
Scalar gain_from_trade(const BasicPrice<Scalar>& p, const BasicValuationPair<Scalar>& v) {
  const Scalar& price = p.value();
  if (v.s <= price && price <= v.b) return Scalar(v.b - v.s);
  return Scalar(0);
}

template <typename Scalar>
RealisticFeedback realistic_feedback(const BasicPrice<Scalar>& p,
                                     const BasicValuationPair<Scalar>& v) {
  return {v.s <= p.value(), p.value() <= v.b};
}

}  // namespace bitrade
