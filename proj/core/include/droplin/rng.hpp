#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace droplin {

// Splittable counter-free PRNG.  One root seed plus (purpose, index)
// tags derive independent sub-streams, so sample i's draws never
// depend on how work was chunked across threads.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Sub-stream rooted at (seed, purpose, index).  Two mixing rounds
  // decorrelate streams whose tags differ in a single bit.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t purpose,
                              std::uint64_t index) {
    std::uint64_t s = mix(seed + 0x9e3779b97f4a7c15ULL * (purpose + 1));
    s = mix(s + 0x9e3779b97f4a7c15ULL * (index + 1));
    return SplitMix64(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform on [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Standard normal via Box-Muller; no rejection, so the draw count
  // per call is fixed and streams stay aligned.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::vector<double> gaussian_vector(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = next_gaussian();
    return v;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Stream purposes used across the library.  Fixed numbers: changing
// them changes every seeded result.
namespace stream_purpose {
inline constexpr std::uint64_t kData = 1;
inline constexpr std::uint64_t kMask = 2;
inline constexpr std::uint64_t kInitU = 3;
inline constexpr std::uint64_t kInitV = 4;
inline constexpr std::uint64_t kMonteCarlo = 5;
inline constexpr std::uint64_t kSuite = 6;
inline constexpr std::uint64_t kSweepRun = 7;
}  // namespace stream_purpose

}  // namespace droplin
