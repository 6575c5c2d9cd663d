#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pda {

/// Source of randomness used by agents, players and the search.
///
/// Every stream in the library is derived from an explicit seed; tests
/// substitute ScriptedRandom to pin individual draws.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual std::uint64_t next_u64() = 0;

  /// Uniform on [0, 1).
  virtual double uniform01();

  /// Uniform on {0, ..., n - 1}; n must be positive.
  virtual std::size_t index(std::size_t n);
};

class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() override { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Replays fixed draws, cycling when exhausted. next_u64 falls back to a
/// seeded stream so that unrelated draws stay deterministic.
class ScriptedRandom final : public RandomSource {
 public:
  ScriptedRandom(std::vector<double> uniforms, std::vector<std::size_t> indices,
                 std::uint64_t fallback_seed = 0)
      : uniforms_(std::move(uniforms)),
        indices_(std::move(indices)),
        fallback_(fallback_seed) {}

  std::uint64_t next_u64() override { return fallback_(); }
  double uniform01() override;
  std::size_t index(std::size_t n) override;

 private:
  std::vector<double> uniforms_;
  std::vector<std::size_t> indices_;
  std::size_t next_uniform_ = 0;
  std::size_t next_index_ = 0;
  std::mt19937_64 fallback_;
};

/// Mixes a parent seed with a stream key (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key);
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);

}  // namespace pda
