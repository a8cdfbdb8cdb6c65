#pragma once

#include <cstdint>
#include <random>

namespace iprior {

// Seedable generator with a portable output sequence. std::mt19937_64 is
// bit-specified by the standard; the distributions in <random> are not, so
// the conversions to doubles and bounded integers live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  // Independent stream keyed by (seed, stream). Used for one stream per
  // document and one per synthetic generator.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace iprior
