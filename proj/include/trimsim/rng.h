// Copyright 2026 The Trimsim Authors
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

#ifndef TRIMSIM_RNG_H_
#define TRIMSIM_RNG_H_

#include <cstdint>
#include <limits>
#include <string_view>

namespace trimsim {

// SplitMix64 output function.
constexpr uint64_t Mix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a over the bytes of `tag`; used to fold stream labels into keys.
constexpr uint64_t HashTag(std::string_view tag) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : tag) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-mode pseudo random stream. The i-th output depends only on
// (key, i), so draws can be addressed by position (e.g. by row index) and
// the sequence does not depend on how work is scheduled.
//
// Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = uint64_t;

  explicit Stream(uint64_t key) : key_(Mix64(key ^ 0x6a09e667f3bcc909ULL)) {}

  // Stream for (seed, operator id, purpose). Distinct tuples give
  // statistically independent streams.
  static Stream Derive(uint64_t seed, uint64_t id, std::string_view tag) {
    return Stream(Mix64(Mix64(seed) ^ Mix64(id + 0x9e3779b97f4a7c15ULL)) ^
                  HashTag(tag));
  }

  // Child stream; does not advance this one.
  Stream Fork(uint64_t id) const {
    return Stream(Mix64(key_ + Mix64(id ^ 0xa0761d6478bd642fULL)));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return At(counter_++); }

  result_type At(uint64_t index) const {
    return Mix64(key_ + (index + 1) * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform on [0, 1) with 53 bits of precision.
  double Uniform() { return ToUnit(operator()()); }
  double UniformAt(uint64_t index) const { return ToUnit(At(index)); }

  // Uniform integer in [0, bound), bound > 0. Unbiased (Lemire).
  uint64_t Below(uint64_t bound) {
    unsigned __int128 m =
        static_cast<unsigned __int128>(operator()()) * bound;
    auto low = static_cast<uint64_t>(m);
    if (low < bound) {
      const uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(operator()()) * bound;
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  uint64_t position() const { return counter_; }

 private:
  static double ToUnit(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace trimsim

#endif  // TRIMSIM_RNG_H_
