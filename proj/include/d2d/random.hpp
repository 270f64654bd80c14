#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace d2d {

using Rng = std::mt19937_64;

// Seeds a generator from a list of 64-bit words (experiment seed, sweep
// coordinates, stream tag). Distinct lists give independent streams.
inline Rng make_rng(std::initializer_list<std::uint64_t> words) {
  std::vector<std::uint32_t> seq;
  seq.reserve(words.size() * 2);
  for (std::uint64_t w : words) {
    seq.push_back(static_cast<std::uint32_t>(w & 0xffffffffu));
    seq.push_back(static_cast<std::uint32_t>(w >> 32));
  }
  std::seed_seq ss(seq.begin(), seq.end());
  return Rng(ss);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace d2d
