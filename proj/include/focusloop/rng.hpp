#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace focusloop {

// A deterministic random stream identified by (seed, name). Two streams with
// the same seed but different names are statistically independent, so adding a
// consumer of randomness never perturbs the draws of another one.
//
// Only mt19937_64 raw output is used; the bounded draws below are implemented
// here because std::uniform_int_distribution is not specified bit-exactly
// across standard libraries.
class RandomStream {
 public:
  RandomStream() : RandomStream(0, "default") {}
  RandomStream(std::uint64_t seed, std::string_view name);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [lo, hi] (inclusive). Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform01();

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view name);

}  // namespace focusloop
