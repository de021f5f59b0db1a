// random.hpp - portable seeded random streams and stable seed derivation.
//
// Every draw in the toolkit goes through RandomSource so that the exact
// sequence is fixed by the seed on every platform (the standard library
// distributions are implementation-defined, so none are used here).

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <string_view>

namespace ocrsynth {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over bytes; stable across platforms.
constexpr std::uint64_t hash_bytes(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t hash_combine(std::uint64_t seed,
                                     std::uint64_t value) noexcept {
  return mix64(seed ^ mix64(value));
}

/// record_seed = stable_hash(master_seed, tag, index)
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                    std::uint64_t index) noexcept {
  return hash_combine(hash_combine(master, hash_bytes(tag)), index);
}

/// Source of uniform draws. Generators only see this interface, which lets
/// tests script exact draws.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  /// Uniform integer in [0, n); n >= 1.
  virtual std::uint64_t below(std::uint64_t n) = 0;
  /// Uniform real in [0, 1).
  virtual double uniform01() = 0;

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }
  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }
  bool bernoulli(double p) { return uniform01() < p; }

  template <typename Range>
  const auto& pick(const Range& items) {
    return items[below(std::size(items))];
  }

  /// Index drawn with probability proportional to weights[i].
  std::size_t weighted_index(std::span<const double> weights);
};

/// mt19937_64 engine (output sequence fixed by the C++ standard) with
/// hand-rolled unbiased range reduction.
class Rng final : public RandomSource {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) override;
  double uniform01() override;
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Replays queued draws; throws Error(Contract) when exhausted or when a
/// queued integer is out of range for the request.
class ScriptedDraws final : public RandomSource {
 public:
  ScriptedDraws& integers(std::initializer_list<std::uint64_t> values);
  ScriptedDraws& reals(std::initializer_list<double> values);

  std::uint64_t below(std::uint64_t n) override;
  double uniform01() override;

  bool exhausted() const { return ints_.empty() && reals_.empty(); }

 private:
  std::deque<std::uint64_t> ints_;
  std::deque<double> reals_;
};

}  // namespace ocrsynth
