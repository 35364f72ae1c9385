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

#include "mel/core/joint_action.h"

#include <algorithm>
#include <limits>

#include "mel/core/errors.h"

namespace mel {

JointActionSpace::JointActionSpace(std::vector<int> action_counts)
    : counts_(std::move(action_counts)) {
  if (counts_.empty()) throw InputError("at least one player is required");
  strides_.assign(counts_.size(), 1);
  long long size = 1;
  for (int i = static_cast<int>(counts_.size()) - 1; i >= 0; --i) {
    if (counts_[i] < 1) throw InputError("action counts must be positive");
    strides_[i] = static_cast<int>(size);
    size *= counts_[i];
    if (size > std::numeric_limits<int>::max() / 2) {
      throw InputError("joint action space too large");
    }
  }
  size_ = static_cast<int>(size);
}

int JointActionSpace::max_actions() const {
  return *std::max_element(counts_.begin(), counts_.end());
}

int JointActionSpace::Encode(std::span<const int> actions) const {
  if (actions.size() != counts_.size()) {
    throw InputError("profile length does not match player count");
  }
  int joint = 0;
  for (size_t i = 0; i < counts_.size(); ++i) {
    if (actions[i] < 0 || actions[i] >= counts_[i]) {
      throw InputError("action index out of range");
    }
    joint += actions[i] * strides_[i];
  }
  return joint;
}

std::vector<int> JointActionSpace::Decode(int joint) const {
  std::vector<int> actions(counts_.size());
  for (size_t i = 0; i < counts_.size(); ++i) {
    actions[i] = ActionOf(joint, static_cast<int>(i));
  }
  return actions;
}

}  // namespace mel
