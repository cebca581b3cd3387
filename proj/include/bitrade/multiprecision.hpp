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

#include <cmath>
#include <cstddef>

#include <boost/multiprecision/mpfr.hpp>

namespace bitrade {

// Binary floating point with a runtime-chosen mantissa. Expression templates
// are off so that the generic code paths can treat it like double.
using ExactScalar =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

// Sets the default precision of ExactScalar for its lifetime. Values created
// inside the scope keep their precision afterwards. The setting is process
// wide, so scopes must not overlap across threads.
class PrecisionScope {
 public:
  explicit PrecisionScope(std::size_t bits)
      : previous_(ExactScalar::default_precision()) {
    ExactScalar::default_precision(digits10_for(bits));
  }
  ~PrecisionScope() { ExactScalar::default_precision(previous_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  static unsigned digits10_for(std::size_t bits) {
    return static_cast<unsigned>(std::ceil(static_cast<double>(bits) * 0.30102999566398120)) + 1;
  }

 private:
  unsigned previous_;
};

// Mantissa bits that keep the nested intervals of a horizon-T Cantor run
// separated: each round shrinks the width by 3, i.e. log2(3) bits.
inline std::size_t cantor_precision_bits(std::size_t horizon) {
  return 64 + static_cast<std::size_t>(std::ceil(static_cast<double>(horizon) * 1.5849625007211562));
}

}  // namespace bitrade
