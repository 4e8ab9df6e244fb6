#include "polarforge/dispersion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polarforge {

namespace {

constexpr double kLn2 = std::numbers::ln2;

DispersionStats biawgn_dispersion(double sigma2) {
  static const GaussHermite gh(kDefaultQuadratureNodes);
  const double sigma = std::sqrt(sigma2);
  // i(0; y) = 1 - log2(1 + e^-L), L = 2y/sigma^2; symmetric in the input.
  const double mean = gh.expect(
      [&](double y) {
        return 1.0 - detail::log1pexp_neg(2.0 * y / sigma2) / kLn2;
      },
      1.0, sigma);
  const double second = gh.expect(
      [&](double y) {
        const double i = 1.0 - detail::log1pexp_neg(2.0 * y / sigma2) / kLn2;
        return i * i;
      },
      1.0, sigma);
  return {mean, second - mean * mean};
}

}  // namespace

DispersionStats channel_dispersion(const ChannelModel& ch) {
  switch (ch.kind) {
    case ChannelKind::Bec: {
      // Information density is 1 w.p. 1-eps and 0 on erasures.
      const double eps = ch.param;
      return {1.0 - eps, eps * (1.0 - eps)};
    }
    case ChannelKind::Bsc: {
      const double p = ch.param;
      if (p <= 0.0 || p >= 1.0) return {1.0, 0.0};
      const double spread = std::log2((1.0 - p) / p);
      const double cap = capacity(ch);
      return {cap, p * (1.0 - p) * spread * spread};
    }
    case ChannelKind::Biawgn:
      return biawgn_dispersion(ch.param);
  }
  throw std::invalid_argument("unsupported channel");
}

double q_function(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double dispersion_fer(std::uint32_t block_length, std::uint32_t dimension,
                      const ChannelModel& ch, bool half_log_correction) {
  if (block_length == 0 || dimension == 0 || dimension > block_length)
    throw std::invalid_argument("invalid code size");
  const DispersionStats d = channel_dispersion(ch);
  const double n = block_length;
  if (d.dispersion <= 0.0) {
    const double lead = n * d.capacity - dimension;
    if (lead > 0.0) return 0.0;
    if (lead < 0.0) return 1.0;
    return 0.5;
  }
  double numer = n * d.capacity - dimension;
  if (half_log_correction) numer += 0.5 * std::log2(n);
  return q_function(numer / std::sqrt(n * d.dispersion));
}

}  // namespace polarforge
