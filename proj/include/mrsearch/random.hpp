#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace mrsearch {

using Rng = std::mt19937_64;

/// Derives an independent engine from a trial seed and a list of stream tags
/// (robot id, purpose). Identical inputs always give the identical stream.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words;
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  for (auto t : tags) {
    words.push_back(static_cast<std::uint32_t>(t));
    words.push_back(static_cast<std::uint32_t>(t >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace mrsearch
