// Copyright 2026 The uqgame Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>

namespace uqgame {

/// A size or combinatorial bound was exceeded (dimension cap, partition guard).
class GuardViolation : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// A player's move does not respect that player's capability.
class IllegalMove : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

} // namespace uqgame
