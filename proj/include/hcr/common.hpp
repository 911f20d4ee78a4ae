#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace hcr {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Unusable input data: unreadable files, blank images, classes with too few
// samples. CLI maps this to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: singular systems, non-finite parameters. Exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic draws over a mt19937_64 stream. The standard <random>
// distributions are not bit-stable across library implementations, so every
// reproducible artifact (glyph jitter, weight init, shuffles) goes through
// these fixed mappings instead.
inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
  return lo + u * (hi - lo);
}

// Inclusive on both ends.
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

}  // namespace hcr
