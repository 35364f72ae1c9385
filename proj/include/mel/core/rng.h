// Copyright 2026 The MEL Authors.
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

#ifndef MEL_CORE_RNG_H_
#define MEL_CORE_RNG_H_

#include <cstdint>
#include <random>
#include <span>

namespace mel {

// Mixes (seed, stream) into a well-distributed 64-bit seed.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

// Seeded random source. All draws are built from raw 64-bit engine words, so
// a given seed yields the same sequence under any standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextWord() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., n - 1}; n >= 1.
  int UniformInt(int n);

  // Index drawn with probability proportional to probs[k]. The weights must
  // be nonnegative with a positive sum.
  int Categorical(std::span<const double> probs);

  // Independent generator for a numbered sub-stream.
  Rng Fork(uint64_t stream) { return Rng(DeriveSeed(engine_(), stream)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mel

#endif  // MEL_CORE_RNG_H_
