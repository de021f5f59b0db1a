// random.cpp

#include "ocrsynth/random.hpp"

#include <string>

#include "ocrsynth/error.hpp"

namespace ocrsynth {

std::size_t RandomSource::weighted_index(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (weights.empty() || !(total > 0.0)) {
    throw Error(ErrorKind::Contract, "weighted_index needs a positive weight");
  }
  const double target = uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  return weights.size() - 1;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::Contract, "below(0)");
  // Rejection sampling on the largest multiple of n.
  const std::uint64_t limit = ~0ULL - (~0ULL % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

ScriptedDraws& ScriptedDraws::integers(
    std::initializer_list<std::uint64_t> values) {
  ints_.insert(ints_.end(), values.begin(), values.end());
  return *this;
}

ScriptedDraws& ScriptedDraws::reals(std::initializer_list<double> values) {
  reals_.insert(reals_.end(), values.begin(), values.end());
  return *this;
}

std::uint64_t ScriptedDraws::below(std::uint64_t n) {
  if (ints_.empty()) throw Error(ErrorKind::Contract, "scripted integers exhausted");
  const std::uint64_t v = ints_.front();
  ints_.pop_front();
  if (v >= n) {
    throw Error(ErrorKind::Contract, "scripted integer " + std::to_string(v) +
                                         " out of range [0, " +
                                         std::to_string(n) + ")");
  }
  return v;
}

double ScriptedDraws::uniform01() {
  if (reals_.empty()) throw Error(ErrorKind::Contract, "scripted reals exhausted");
  const double v = reals_.front();
  reals_.pop_front();
  return v;
}

}  // namespace ocrsynth
