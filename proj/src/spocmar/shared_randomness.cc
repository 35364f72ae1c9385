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

#include "mel/spocmar/shared_randomness.h"

#include "mel/core/errors.h"
#include "mel/core/rng.h"

namespace mel {

uint64_t SharedRandomness::Word(int64_t index) const {
  return DeriveSeed(seed_, static_cast<uint64_t>(index));
}

int SharedReader::NextBit() {
  const int64_t word_index = position_ / 64;
  if (word_index != cached_index_) {
    cached_word_ = stream_.Word(word_index);
    cached_index_ = word_index;
  }
  const int bit = static_cast<int>((cached_word_ >> (position_ % 64)) & 1);
  ++position_;
  return bit;
}

int SharedReader::UniformIndex(int n) {
  if (n < 1) throw InputError("UniformIndex requires n >= 1");
  // Invariant: c is uniform on {0, ..., v - 1}.
  int64_t v = 1;
  int64_t c = 0;
  while (n > 1) {
    v <<= 1;
    c = 2 * c + NextBit();
    if (v >= n) {
      if (c < n) return static_cast<int>(c);
      v -= n;
      c -= n;
    }
  }
  return 0;
}

}  // namespace mel
