// Copyright 2026 The cmw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace cmw {

// PCG32 (O'Neill's pcg32_random_r). Integer-only state transitions, so the
// stream is bit-identical across platforms. Distinct `stream` values select
// statistically independent sequences for the same seed; experiments give
// the environment and each agent their own stream so that, e.g., switching
// the inner solver never perturbs the environment draws.
class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0) {
    inc_ = (stream << 1u) | 1u;
    state_ = 0;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  // 53-bit uniform double in [0, 1).
  double uniform01() {
    std::uint64_t hi = next_u32() >> 5;  // 27 bits
    std::uint64_t lo = next_u32() >> 6;  // 26 bits
    return static_cast<double>(hi * 67108864ULL + lo) *
           (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

}  // namespace cmw
