// Copyright 2026 The scesep Authors. All Rights Reserved.
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

#include <cstdint>
#include <random>
#include <string_view>

namespace scesep {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent 64-bit seed for a named purpose from a master
/// seed. All randomness in the toolkit flows through this splitter so that
/// every consumer draws from its own stream regardless of call order.
std::uint64_t stream_seed(std::uint64_t master, std::string_view purpose) noexcept;
std::uint64_t stream_seed(std::uint64_t master, std::string_view purpose,
                          std::uint64_t index) noexcept;

inline Rng make_rng(std::uint64_t master, std::string_view purpose) {
  return Rng(stream_seed(master, purpose));
}

inline Rng make_rng(std::uint64_t master, std::string_view purpose,
                    std::uint64_t index) {
  return Rng(stream_seed(master, purpose, index));
}

}  // namespace scesep
