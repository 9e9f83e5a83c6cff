// Copyright 2026 The toksim Authors
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

#ifndef TOKSIM_RNG_HPP_
#define TOKSIM_RNG_HPP_

#include <cstdint>
#include <string_view>

namespace toksim {

// SplitMix64 generator. Deliberately not std::mt19937 plus distributions:
// std::uniform_int_distribution is implementation defined, and the
// experiment harness promises byte identical output across runs, thread
// counts, and standard libraries. Every draw below is fully specified.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform draw in [0, n). Rejection on the top of the range.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

 private:
  std::uint64_t state_;
};

// One finalizer round of SplitMix64, used as a mixing function.
inline std::uint64_t mix_u64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Combines a seed with a subordinate stream index. Used to derive
// independent deterministic streams (per output, per iteration).
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  return mix_u64(seed ^ mix_u64(index + 0x632be59bd9b4e019ULL));
}

// FNV-1a over bytes, mixed once more. Keys per-output streams by prompt id.
inline std::uint64_t hash_bytes(std::string_view bytes,
                                std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix_u64(h);
}

}  // namespace toksim

#endif  // TOKSIM_RNG_HPP_
