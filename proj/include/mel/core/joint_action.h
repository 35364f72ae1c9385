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

#ifndef MEL_CORE_JOINT_ACTION_H_
#define MEL_CORE_JOINT_ACTION_H_

#include <span>
#include <vector>

namespace mel {

// Flat encoding of joint action profiles. The index is row-major over
// (a_1, ..., a_m): the last player's action varies fastest.
class JointActionSpace {
 public:
  JointActionSpace() = default;
  explicit JointActionSpace(std::vector<int> action_counts);

  int num_players() const { return static_cast<int>(counts_.size()); }
  int num_actions(int player) const { return counts_[player]; }
  const std::vector<int>& action_counts() const { return counts_; }
  int size() const { return size_; }
  int max_actions() const;

  int Encode(std::span<const int> actions) const;
  std::vector<int> Decode(int joint) const;

  int ActionOf(int joint, int player) const {
    return (joint / strides_[player]) % counts_[player];
  }
  // The profile `joint` with player's action replaced by `action`.
  int Replace(int joint, int player, int action) const {
    return joint + (action - ActionOf(joint, player)) * strides_[player];
  }

  bool operator==(const JointActionSpace& other) const {
    return counts_ == other.counts_;
  }

 private:
  std::vector<int> counts_;
  std::vector<int> strides_;
  int size_ = 0;
};

}  // namespace mel

#endif  // MEL_CORE_JOINT_ACTION_H_
