#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotopt/constellation.hpp"
#include "rotopt/rng.hpp"

namespace rotopt {

// How E_b is resolved for multidimensional constellations: per full n-D
// symbol (default, q = log2 M) or per 2-D sub-symbol (q' = q * 2/n).
enum class EbConvention { kPerSymbol, kPerTwoDims };

inline double effective_bits(int m, int n, EbConvention conv) {
  const double q = std::log2(static_cast<double>(m));
  return conv == EbConvention::kPerSymbol ? q : q * 2.0 / static_cast<double>(n);
}

inline const char* convention_name(EbConvention conv) {
  return conv == EbConvention::kPerSymbol ? "per-nD-symbol" : "per-2D-symbol";
}

// SNR specification. Per-dimension noise variance is n0/2; E_b = E_s / q with
// E_s the mean symbol energy, and n0 = E_b * 10^(-dB/10).
struct NoiseSpec {
  double ebn0_db = std::numeric_limits<double>::quiet_NaN();
  double bits_per_symbol = 0.0;
  double n0 = 0.0;

  static NoiseSpec from_ebn0_db(double db, double bits_per_symbol, double es = 1.0) {
    if (!(bits_per_symbol > 0.0))
      throw std::invalid_argument("NoiseSpec: bits_per_symbol must be > 0");
    if (!(es > 0.0)) throw std::invalid_argument("NoiseSpec: symbol energy must be > 0");
    const double eb = es / bits_per_symbol;
    return {db, bits_per_symbol, eb * std::pow(10.0, -db / 10.0)};
  }

  static NoiseSpec from_n0(double n0) {
    if (!(n0 > 0.0) || !std::isfinite(n0))
      throw std::invalid_argument("NoiseSpec: n0 must be finite and > 0");
    return {std::numeric_limits<double>::quiet_NaN(), 0.0, n0};
  }
};

// Resolve E_b/N_0 in dB against a concrete constellation's energy.
inline NoiseSpec noise_for(const Constellation& x, double ebn0_db,
                           EbConvention conv = EbConvention::kPerSymbol) {
  return NoiseSpec::from_ebn0_db(ebn0_db, effective_bits(x.size(), x.n, conv),
                                 x.mean_energy());
}

// One draw of the diagonal fading matrix H = diag(coeffs).
struct FadingRealization {
  int n = 0;
  Vector coeffs;
};

struct McConfig {
  uint64_t seed = 0;
  int noise_samples = 1000;
  int fading_samples = 1000;

  void validate() const {
    if (noise_samples < 1 || fading_samples < 1)
      throw std::invalid_argument("McConfig: sample counts must be >= 1");
  }
};

struct Estimate {
  double value = 0.0;
  double std_err = 0.0;
};

// i.i.d. Rayleigh coefficients with E[a^2] = 1.
inline FadingRealization sample_fading(int n, CounterRng& rng) {
  if (n < 1) throw std::invalid_argument("sample_fading: n must be >= 1");
  Vector c(n);
  for (int i = 0; i < n; ++i) c(i) = rng.next_rayleigh();
  return {n, std::move(c)};
}

inline Constellation fade(const Constellation& x, const FadingRealization& h) {
  if (h.n != x.n)
    throw std::invalid_argument("fade: fading is " + std::to_string(h.n) +
                                "-dimensional, constellation is " + std::to_string(x.n));
  Constellation out = x;
  for (auto& p : out.points) p = p.cwiseProduct(h.coeffs);
  return out;
}

// Jensen-bound objective
//   R(X) = log2 M - log2[1 + (1/M) sum_{x != y} prod_i 1/(1 + |x_i-y_i|^2/(4 n0))],
// the fading-averaged lower bound on the cutoff rate. The pair sum is over
// ordered pairs; a coordinate where x_i = y_i contributes factor 1.
inline double jensen_rate(const Constellation& x, const NoiseSpec& noise) {
  const int m = x.size();
  if (m <= 1) return 0.0;
  const double inv4n0 = 1.0 / (4.0 * noise.n0);
  double pair_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      double prod = 1.0;
      for (int d = 0; d < x.n; ++d) {
        const double diff = x.points[i](d) - x.points[j](d);
        prod /= 1.0 + diff * diff * inv4n0;
      }
      pair_sum += prod;
    }
  }
  return std::log2(static_cast<double>(m)) - std::log2(1.0 + pair_sum / m);
}

// Conditional cutoff rate R_0(X; H) evaluated on the faded set HX.
inline double conditional_cutoff_rate(const Constellation& x, const FadingRealization& h,
                                      const NoiseSpec& noise) {
  if (h.n != x.n)
    throw std::invalid_argument("conditional_cutoff_rate: dimension mismatch");
  const int m = x.size();
  if (m <= 1) return 0.0;
  const double inv4n0 = 1.0 / (4.0 * noise.n0);
  double pair_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      double d2 = 0.0;
      for (int d = 0; d < x.n; ++d) {
        const double diff = h.coeffs(d) * (x.points[i](d) - x.points[j](d));
        d2 += diff * diff;
      }
      pair_sum += std::exp(-d2 * inv4n0);
    }
  }
  return std::log2(static_cast<double>(m)) - std::log2(1.0 + pair_sum / m);
}

// Monte-Carlo estimate of the AWGN mutual information I^A(Y, X). For each
// symbol x_i the received point is x_i + z with z_i ~ N(0, n0/2); the
// integrand is the log2-sum-exp term of the printed integral, evaluated in
// the stable shifted form. Symbol i draws from stream_base + i, so the
// estimate does not depend on how symbols are partitioned across workers.
inline Estimate awgn_mutual_information(const Constellation& x, const NoiseSpec& noise,
                                        const McConfig& mc, uint64_t stream_base = 0) {
  mc.validate();
  const int m = x.size();
  const int n = x.n;
  const double sigma = std::sqrt(noise.n0 / 2.0);
  const double inv_n0 = 1.0 / noise.n0;
  const double inv_ln2 = 1.0 / std::numbers::ln2;

  double mean_sum = 0.0;
  double var_sum = 0.0;
  std::vector<double> exponents(m);
  Vector z(n);
  for (int i = 0; i < m; ++i) {
    CounterRng rng(mc.seed, stream_base + static_cast<uint64_t>(i));
    double acc = 0.0, acc2 = 0.0;
    for (int s = 0; s < mc.noise_samples; ++s) {
      for (int d = 0; d < n; ++d) z(d) = sigma * rng.next_gaussian();
      const double z2 = z.squaredNorm();
      double mx = 0.0;  // the k = i term has exponent exactly 0
      for (int k = 0; k < m; ++k) {
        double d2 = 0.0;
        for (int d = 0; d < n; ++d) {
          const double diff = z(d) + x.points[i](d) - x.points[k](d);
          d2 += diff * diff;
        }
        exponents[k] = (z2 - d2) * inv_n0;
        if (exponents[k] > mx) mx = exponents[k];
      }
      double se = 0.0;
      for (int k = 0; k < m; ++k) se += std::exp(exponents[k] - mx);
      const double term = (mx + std::log(se)) * inv_ln2;
      acc += term;
      acc2 += term * term;
    }
    const double mean_i = acc / mc.noise_samples;
    mean_sum += mean_i;
    if (mc.noise_samples > 1) {
      const double var_i =
          (acc2 - acc * acc / mc.noise_samples) / (mc.noise_samples - 1.0);
      var_sum += std::max(var_i, 0.0) / mc.noise_samples;
    }
  }
  const double value = std::log2(static_cast<double>(m)) - mean_sum / m;
  const double std_err = std::sqrt(var_sum) / m;
  return {value, std_err};
}

namespace detail {
// Fading draws come from a stream no inner symbol stream can collide with.
inline constexpr uint64_t kFadingStream = 0xFFFFFFFFFFFFFFFFull;
}  // namespace detail

// CM capacity C(X) = E_H I^A(Y, HX), outer Monte Carlo over Rayleigh fading
// draws with an inner awgn_mutual_information per draw. The reported standard
// error is the sample error of the per-draw estimates, which already includes
// the inner Monte-Carlo noise.
inline Estimate cm_capacity(const Constellation& x, const NoiseSpec& noise,
                            const McConfig& mc) {
  mc.validate();
  CounterRng fading_rng(mc.seed, detail::kFadingStream);
  double acc = 0.0, acc2 = 0.0;
  double inner_se = 0.0;
  for (int f = 0; f < mc.fading_samples; ++f) {
    const FadingRealization h = sample_fading(x.n, fading_rng);
    const uint64_t base = (static_cast<uint64_t>(f) + 1) << 32;
    const Estimate inner = awgn_mutual_information(fade(x, h), noise, mc, base);
    acc += inner.value;
    acc2 += inner.value * inner.value;
    inner_se = inner.std_err;
  }
  const double mean = acc / mc.fading_samples;
  double std_err = inner_se;
  if (mc.fading_samples > 1) {
    const double var =
        (acc2 - acc * acc / mc.fading_samples) / (mc.fading_samples - 1.0);
    std_err = std::sqrt(std::max(var, 0.0) / mc.fading_samples);
  }
  return {mean, std_err};
}

}  // namespace rotopt
