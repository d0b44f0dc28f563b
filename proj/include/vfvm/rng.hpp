// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace vfvm {

// Uniform doubles straight from mt19937_64 bits; bypasses the distribution
// classes so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed = 42) : eng_(seed) {}
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace vfvm
