// Copyright 2026 The qscreen Authors
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

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace qscreen {

/// The one generator used everywhere. Derived helpers below avoid the
/// std:: distributions so streams are identical across standard libraries.
using Rng = std::mt19937_64;

/// Stable 64-bit seed from a global seed and a string (FNV-1a then splitmix64).
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view salt) noexcept;

/// Stable 64-bit hash of a byte string (FNV-1a).
std::uint64_t stable_hash(std::string_view bytes) noexcept;

/// Uniform on [0, 1) with 53 random bits.
double uniform01(Rng& rng);

double uniform(Rng& rng, double lo, double hi);

/// Uniform on {0, ..., n-1}, unbiased. n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

/// Standard normal via Box-Muller.
double standard_normal(Rng& rng);

/// Fisher-Yates with uniform_index.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace qscreen
