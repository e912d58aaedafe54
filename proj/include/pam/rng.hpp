// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PAM_RNG_HPP
#define PAM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace pam {

// Finalizer from the splitmix64 generator. Good avalanche, three multiplies.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0,1) with 53 random bits.
inline double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline std::uint64_t zigzag(long long v) {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

// Site-keyed uniform variate: hash of (seed, coordinates). Counter-mode, so
// a site's value never depends on the box it was generated in.
inline std::uint64_t site_hash(std::uint64_t seed, const long long* z, int d) {
  std::uint64_t h = mix64(seed);
  for (int i = 0; i < d; ++i) h = mix64(h ^ zigzag(z[i]));
  return h;
}

inline double site_uniform(std::uint64_t seed, const long long* z, int d) {
  return to_unit(site_hash(seed, z, d));
}

// Seed splitting for ensemble replicas.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(base ^ mix64(index));
}

// Small counter-free generator for Monte Carlo sampling (xoshiro256**).
// Portable output stream; all variate transforms below are ours, so a
// given seed reproduces the same doubles on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : s_) {
      s += 0x9e3779b97f4a7c15ULL;
      w = mix64(s);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform() { return to_unit(next_u64()); }  // [0,1)

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  double laplace(double scale) {
    double u = uniform() - 0.5;
    return (u < 0 ? scale : -scale) * std::log1p(-2.0 * std::fabs(u));
  }

  double normal() {
    // Box-Muller; second variate discarded.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Knuth for small mean, normal approximation past 720 where the
  // product underflows (only hit by pathological windows).
  long long poisson(double mean) {
    if (mean <= 0) return 0;
    if (mean < 720.0) {
      double limit = std::exp(-mean), prod = uniform();
      long long n = 0;
      while (prod > limit) {
        prod *= uniform();
        ++n;
      }
      return n;
    }
    double x = mean + std::sqrt(mean) * normal();
    return x < 0 ? 0 : static_cast<long long>(x + 0.5);
  }

  long long uniform_int(long long n) {  // in [0, n)
    return static_cast<long long>(next_u64() % static_cast<std::uint64_t>(n));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

}  // namespace pam

#endif
