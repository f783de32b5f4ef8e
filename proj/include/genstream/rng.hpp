#pragma once

#include <cstdint>
#include <random>

namespace genstream {

// splitmix64 finalizer; derives independent stream seeds from (seed, tag).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded random source. Only raw mt19937_64 output is used; the std
// distribution adaptors are implementation-defined and would break the
// same-seed-same-result contract across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0,1), 53 bits
  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

  // uniform in [0, 2^bits), bits <= 8
  std::uint8_t next_bits(unsigned bits) {
    return static_cast<std::uint8_t>(gen_() & ((1ULL << bits) - 1));
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace genstream
