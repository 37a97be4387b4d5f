#include "hawkqk/random.hpp"

#include <vector>

namespace hawkqk {

namespace {

std::vector<std::uint32_t> seed_words(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * stream.size());
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto s : stream) push(s);
  return words;
}

}  // namespace

Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  auto words = seed_words(seed, stream);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  auto words = seed_words(seed, stream);
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace hawkqk
