#include "pda/rng.hpp"

#include <stdexcept>

namespace pda {

double RandomSource::uniform01() {
  // 53 high bits give every representable multiple of 2^-53 in [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t RandomSource::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("index: empty range");
  // Rejection sampling keeps the draw unbiased and platform independent.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return static_cast<std::size_t>(x % n);
}

double ScriptedRandom::uniform01() {
  if (uniforms_.empty()) return RandomSource::uniform01();
  const double u = uniforms_[next_uniform_ % uniforms_.size()];
  ++next_uniform_;
  return u;
}

std::size_t ScriptedRandom::index(std::size_t n) {
  if (indices_.empty()) return RandomSource::index(n);
  const std::size_t i = indices_[next_index_ % indices_.size()];
  ++next_index_;
  if (i >= n) throw std::out_of_range("scripted index out of range");
  return i;
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) {
  std::uint64_t z = parent + 0x9e3779b97f4a7c15ULL * (key + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view label) {
  // FNV-1a over the label, then mixed like a numeric key.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(parent, h);
}

}  // namespace pda
