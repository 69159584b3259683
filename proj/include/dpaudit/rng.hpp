#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string_view>

namespace dpaudit {

// Deterministic, splittable random stream. Substreams are derived by
// absorbing a list of keys into a seeding hash; distinct key lists give
// independent-looking streams. State advances with xoshiro256++.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { seed_state(seed); }

  // Derive a substream from labelled keys, e.g. rng.substream({rep, pair, stage}).
  [[nodiscard]] Rng substream(std::initializer_list<std::uint64_t> keys) const {
    std::uint64_t x = seed_;
    for (std::uint64_t k : keys) x = mix(x ^ (k + 0x9e3779b97f4a7c15ULL));
    return Rng(x);
  }
  [[nodiscard]] Rng substream(std::string_view label,
                              std::initializer_list<std::uint64_t> keys) const {
    std::uint64_t x = seed_;
    for (char c : label) x = mix(x ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    for (std::uint64_t k : keys) x = mix(x ^ (k + 0x9e3779b97f4a7c15ULL));
    return Rng(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1); safe as input to inverse CDFs.
  double uniform() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  void seed_state(std::uint64_t seed) {
    seed_ = seed;
    std::uint64_t x = seed;
    for (auto& s : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      s = mix(x);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t seed_ = 0;
  std::uint64_t s_[4] = {};
};

// Centered Laplace draw with scale b via the inverse CDF, so a fixed seed
// is bit-reproducible.
double sample_laplace(double scale, Rng& rng);

// Inverse-CDF map from a uniform u in (0,1) to Laplace(scale); exposed so the
// median-maps-to-zero identity is testable without a stream.
double laplace_inverse_cdf(double scale, double u);

}  // namespace dpaudit
