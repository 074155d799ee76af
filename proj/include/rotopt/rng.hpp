#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace rotopt {

// Philox4x64-10 counter-based generator (Salmon et al. reference constants).
// Distinct (seed, stream) keys give independent sequences, so sample layouts
// are reproducible no matter how callers partition work across streams.
// Round function cross-checked against numpy.random.Philox raw output.
class Philox4x64 {
 public:
  Philox4x64(uint64_t seed, uint64_t stream) : key_{seed, stream} {}

  std::array<uint64_t, 4> next_block() {
    std::array<uint64_t, 4> c = counter_;
    std::array<uint64_t, 2> k = key_;
    for (int round = 0; round < 10; ++round) {
      c = round_once(c, k);
      k[0] += 0x9E3779B97F4A7C15ull;
      k[1] += 0xBB67AE8584CAA73Bull;
    }
    for (auto& word : counter_)
      if (++word != 0) break;
    return c;
  }

 private:
  static std::array<uint64_t, 4> round_once(const std::array<uint64_t, 4>& c,
                                            const std::array<uint64_t, 2>& k) {
    const auto p0 = static_cast<unsigned __int128>(0xD2E7470EE14C6C93ull) * c[0];
    const auto p1 = static_cast<unsigned __int128>(0xCA5A826395121157ull) * c[2];
    return {static_cast<uint64_t>(p1 >> 64) ^ c[1] ^ k[0], static_cast<uint64_t>(p1),
            static_cast<uint64_t>(p0 >> 64) ^ c[3] ^ k[1], static_cast<uint64_t>(p0)};
  }

  std::array<uint64_t, 2> key_;
  std::array<uint64_t, 4> counter_{0, 0, 0, 0};
};

// Buffered scalar draws on top of Philox: uniforms strictly inside (0,1),
// Box-Muller gaussians, and the unit-second-moment Rayleigh law.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0) : gen_(seed, stream) {}

  uint64_t next_u64() {
    if (pos_ == 4) {
      buf_ = gen_.next_block();
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  // Density 2a*exp(-a^2) for a >= 0, so E[a^2] = 1.
  double next_rayleigh() { return std::sqrt(-std::log(next_double())); }

 private:
  Philox4x64 gen_;
  std::array<uint64_t, 4> buf_{};
  int pos_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rotopt
