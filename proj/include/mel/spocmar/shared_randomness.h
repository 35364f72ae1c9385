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

#ifndef MEL_SPOCMAR_SHARED_RANDOMNESS_H_
#define MEL_SPOCMAR_SHARED_RANDOMNESS_H_

#include <cstdint>

namespace mel {

// Public random string. Word k is a fixed function of (seed, k), so every
// reader that consumes the same prefix observes the same values.
class SharedRandomness {
 public:
  explicit SharedRandomness(uint64_t seed) : seed_(seed) {}
  uint64_t seed() const { return seed_; }
  uint64_t Word(int64_t index) const;

 private:
  uint64_t seed_;
};

// Sequential bit reader over a SharedRandomness string.
class SharedReader {
 public:
  explicit SharedReader(SharedRandomness stream) : stream_(stream) {}

  int NextBit();

  // Exactly uniform on {0, ..., n - 1} via the Fast Dice Roller. Consumes
  // no bits when n == 1 and about log2(n) + 2 bits on average otherwise.
  int UniformIndex(int n);

  int64_t bits_consumed() const { return position_; }

  // Advances without reading; used to model a desynchronized agent.
  void Skip(int64_t bits) { position_ += bits; }

 private:
  SharedRandomness stream_;
  int64_t position_ = 0;
  int64_t cached_index_ = -1;
  uint64_t cached_word_ = 0;
};

}  // namespace mel

#endif  // MEL_SPOCMAR_SHARED_RANDOMNESS_H_
