#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarforge/rng.hpp"

namespace polarforge {

/// Hard cap on log-likelihood ratios (natural log). Keeps decoder
/// recursions finite on deterministic channels; far beyond any
/// decision-relevant magnitude.
inline constexpr double kLlrMax = 40.0;

enum class ChannelKind { Bec, Bsc, Biawgn };

/// Binary-input memoryless channel. Channel outputs are encoded as
/// doubles: bit 0 maps to +1, bit 1 to -1, and the BEC erasure symbol
/// is 0. BIAWGN outputs are arbitrary reals.
struct ChannelModel {
  ChannelKind kind = ChannelKind::Bec;
  double param = 0.0;  // erasure prob / crossover prob / noise variance

  static ChannelModel bec(double eps);
  static ChannelModel bsc(double p);
  static ChannelModel biawgn_sigma2(double sigma2);
  static ChannelModel biawgn_snr_db(double snr_db);

  /// Parses "bec:0.5", "bsc:0.1", "biawgn:snr_db=3.0",
  /// "biawgn:sigma2=0.501187". Throws std::invalid_argument naming the
  /// offending token.
  static ChannelModel parse(const std::string& text);

  std::string to_string() const;

  double snr_db() const;  // BIAWGN only
  bool is_biawgn() const { return kind == ChannelKind::Biawgn; }
};

struct InfoTriple {
  double capacity_bits = 0.0;
  double cutoff_rate_bits = 0.0;
  double bhattacharyya = 0.0;
};

class GaussHermite;

double capacity(const ChannelModel& ch);
double cutoff_rate(const ChannelModel& ch);
double bhattacharyya(const ChannelModel& ch);
InfoTriple analyze(const ChannelModel& ch);

// Same measures with an explicit quadrature rule (BIAWGN only cares).
double capacity(const ChannelModel& ch, const GaussHermite& quad);
double cutoff_rate(const ChannelModel& ch, const GaussHermite& quad);
double bhattacharyya(const ChannelModel& ch, const GaussHermite& quad);
InfoTriple analyze(const ChannelModel& ch, const GaussHermite& quad);

/// Natural-log LLR ln(W(y|0)/W(y|1)), clipped to +-kLlrMax. Throws if y
/// is outside the channel output alphabet.
double llr(const ChannelModel& ch, double y);

/// Draws one channel output for input bit x in {0,1}.
double sample(const ChannelModel& ch, unsigned x, Rng& rng);

/// Massey's M-ary erasure channel, M = 2^m. Analysis only: it is never
/// sampled or decoded.
struct MecParams {
  unsigned m = 2;
  double eps = 0.0;
};

struct MecSplit {
  double capacity_m;     // m(1-eps)
  double cutoff_m;       // m - log2(1 + (2^m - 1) eps)
  double capacity_1;     // 1-eps
  double cutoff_1;       // 1 - log2(1+eps)
  double boost_margin;   // m*cutoff_1 - cutoff_m, >= 0
};

MecSplit mec_split(const MecParams& params);

/// Gauss-Hermite rule for E[h(Y)], Y ~ N(mean, sigma^2). Nodes and
/// weights are for weight function exp(-t^2); expectation applies the
/// substitution y = mean + sqrt(2) sigma t.
class GaussHermite {
 public:
  explicit GaussHermite(unsigned n = 129);

  template <typename F>
  double expect(F&& h, double mean, double sigma) const {
    const double s = 1.4142135623730951 * sigma;
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      acc += weights_[i] * h(mean + s * nodes_[i]);
    return acc * inv_sqrt_pi_;
  }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double inv_sqrt_pi_;
};

/// Default quadrature node count for BIAWGN information measures.
inline constexpr unsigned kDefaultQuadratureNodes = 129;

namespace detail {
/// ln(1 + e^-s), stable for any s; used by capacity integrands and
/// decoder metrics.
double log1pexp_neg(double s);
}  // namespace detail

}  // namespace polarforge
