#include "polarforge/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace polarforge {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_prob(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(name) + " must be in [0,1]");
}

double parse_number(const std::string& tok) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad channel parameter '" + tok + "'");
  }
  if (pos != tok.size())
    throw std::invalid_argument("bad channel parameter '" + tok + "'");
  return v;
}

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double detail::log1pexp_neg(double s) {
  if (s >= 0.0) return std::log1p(std::exp(-s));
  return -s + std::log1p(std::exp(s));
}

ChannelModel ChannelModel::bec(double eps) {
  check_prob(eps, "erasure probability");
  return {ChannelKind::Bec, eps};
}

ChannelModel ChannelModel::bsc(double p) {
  check_prob(p, "crossover probability");
  return {ChannelKind::Bsc, p};
}

ChannelModel ChannelModel::biawgn_sigma2(double sigma2) {
  if (!(sigma2 > 0.0))
    throw std::invalid_argument("noise variance must be positive");
  return {ChannelKind::Biawgn, sigma2};
}

ChannelModel ChannelModel::biawgn_snr_db(double snr_db) {
  return biawgn_sigma2(std::pow(10.0, -snr_db / 10.0));
}

double ChannelModel::snr_db() const {
  if (kind != ChannelKind::Biawgn)
    throw std::logic_error("snr_db is defined for BIAWGN only");
  return -10.0 * std::log10(param);
}

ChannelModel ChannelModel::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (kind == "bec") return bec(parse_number(rest));
  if (kind == "bsc") return bsc(parse_number(rest));
  if (kind == "biawgn") {
    const auto eq = rest.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("bad biawgn parameter '" + rest +
                                  "' (want snr_db=... or sigma2=...)");
    const std::string key = rest.substr(0, eq);
    const double val = parse_number(rest.substr(eq + 1));
    if (key == "snr_db") return biawgn_snr_db(val);
    if (key == "sigma2") return biawgn_sigma2(val);
    throw std::invalid_argument("unknown biawgn parameter '" + key + "'");
  }
  throw std::invalid_argument("unknown channel kind '" + kind + "'");
}

std::string ChannelModel::to_string() const {
  switch (kind) {
    case ChannelKind::Bec:
      return "bec:" + fmt_full(param);
    case ChannelKind::Bsc:
      return "bsc:" + fmt_full(param);
    case ChannelKind::Biawgn:
      return "biawgn:sigma2=" + fmt_full(param);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Gauss-Hermite quadrature (weight exp(-t^2)), orthonormal recurrence +
// Newton root polishing. Robust up to a few hundred nodes.

namespace {

// Returns (p_n(x), p_{n-1}(x)) for the orthonormal Hermite family.
std::pair<double, double> hermite_eval(unsigned n, double x) {
  double p0 = 0.7511255444649425;  // pi^(-1/4)
  if (n == 0) return {p0, 0.0};
  double p1 = std::sqrt(2.0) * x * p0;
  for (unsigned k = 1; k < n; ++k) {
    double p2 = x * std::sqrt(2.0 / (k + 1)) * p1 -
                std::sqrt(static_cast<double>(k) / (k + 1)) * p0;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

}  // namespace

GaussHermite::GaussHermite(unsigned n) {
  if (n == 0) throw std::invalid_argument("quadrature needs >= 1 node");
  nodes_.assign(n, 0.0);
  weights_.assign(n, 0.0);
  inv_sqrt_pi_ = 1.0 / std::sqrt(std::numbers::pi);

  const unsigned half = (n + 1) / 2;
  double z = 0.0, z_prev = 0.0, z_prev2 = 0.0;
  for (unsigned i = 0; i < half; ++i) {
    // Initial guesses from largest root downward (classic empirical forms).
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) -
          1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * z_prev2;
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * z_prev2;
    } else {
      z = 2.0 * z - z_prev2;
    }
    for (int it = 0; it < 100; ++it) {
      auto [pn, pnm1] = hermite_eval(n, z);
      const double dpn = std::sqrt(2.0 * n) * pnm1;
      const double dz = pn / dpn;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    z_prev2 = z_prev;
    z_prev = z;
    // Christoffel number: w = 1 / sum_{k<n} p_k(z)^2.
    double sum = 0.0, p0 = 0.7511255444649425, p1 = std::sqrt(2.0) * z * p0;
    sum += p0 * p0;
    for (unsigned k = 1; k < n; ++k) {
      sum += p1 * p1;
      double p2 = z * std::sqrt(2.0 / (k + 1)) * p1 -
                  std::sqrt(static_cast<double>(k) / (k + 1)) * p0;
      p0 = p1;
      p1 = p2;
    }
    const double w = 1.0 / sum;
    nodes_[i] = z;
    weights_[i] = w;
    nodes_[n - 1 - i] = -z;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[half - 1] = 0.0;
}

// ---------------------------------------------------------------------------
// Information measures (all in bits).

namespace {

const GaussHermite& default_quadrature() {
  static const GaussHermite gh(kDefaultQuadratureNodes);
  return gh;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

// E over y ~ W(.|0) of h(L(y)) with L the channel LLR; BIAWGN only.
template <typename F>
double biawgn_llr_expect(const GaussHermite& quad, double sigma2, F&& h) {
  const double sigma = std::sqrt(sigma2);
  return quad.expect([&](double y) { return h(2.0 * y / sigma2); }, 1.0,
                     sigma);
}

}  // namespace

double capacity(const ChannelModel& ch, const GaussHermite& quad) {
  switch (ch.kind) {
    case ChannelKind::Bec:
      return 1.0 - ch.param;
    case ChannelKind::Bsc:
      return 1.0 - binary_entropy(ch.param);
    case ChannelKind::Biawgn:
      return biawgn_llr_expect(quad, ch.param, [](double L) {
        return 1.0 - detail::log1pexp_neg(L) / kLn2;
      });
  }
  return 0.0;
}

double bhattacharyya(const ChannelModel& ch, const GaussHermite& quad) {
  switch (ch.kind) {
    case ChannelKind::Bec:
      return ch.param;
    case ChannelKind::Bsc:
      return 2.0 * std::sqrt(ch.param * (1.0 - ch.param));
    case ChannelKind::Biawgn:
      return biawgn_llr_expect(quad, ch.param,
                               [](double L) { return std::exp(-L / 2.0); });
  }
  return 0.0;
}

double cutoff_rate(const ChannelModel& ch, const GaussHermite& quad) {
  return 1.0 - std::log2(1.0 + bhattacharyya(ch, quad));
}

InfoTriple analyze(const ChannelModel& ch, const GaussHermite& quad) {
  InfoTriple t;
  t.capacity_bits = capacity(ch, quad);
  t.bhattacharyya = bhattacharyya(ch, quad);
  t.cutoff_rate_bits = 1.0 - std::log2(1.0 + t.bhattacharyya);
  return t;
}

double capacity(const ChannelModel& ch) {
  return capacity(ch, default_quadrature());
}

double bhattacharyya(const ChannelModel& ch) {
  return bhattacharyya(ch, default_quadrature());
}

double cutoff_rate(const ChannelModel& ch) {
  return cutoff_rate(ch, default_quadrature());
}

InfoTriple analyze(const ChannelModel& ch) {
  return analyze(ch, default_quadrature());
}

double llr(const ChannelModel& ch, double y) {
  switch (ch.kind) {
    case ChannelKind::Bec:
      if (y == 0.0) return 0.0;
      if (y == 1.0) return kLlrMax;
      if (y == -1.0) return -kLlrMax;
      throw std::invalid_argument("BEC output symbol must be -1, 0 or +1");
    case ChannelKind::Bsc: {
      if (y != 1.0 && y != -1.0)
        throw std::invalid_argument("BSC output symbol must be -1 or +1");
      const double p = ch.param;
      double mag;
      if (p <= 0.0)
        mag = kLlrMax;
      else if (p >= 1.0)
        mag = -kLlrMax;
      else
        mag = std::clamp(std::log((1.0 - p) / p), -kLlrMax, kLlrMax);
      return y > 0 ? mag : -mag;
    }
    case ChannelKind::Biawgn:
      return std::clamp(2.0 * y / ch.param, -kLlrMax, kLlrMax);
  }
  return 0.0;
}

double sample(const ChannelModel& ch, unsigned x, Rng& rng) {
  if (x > 1) throw std::invalid_argument("channel input must be 0 or 1");
  const double s = x == 0 ? 1.0 : -1.0;
  switch (ch.kind) {
    case ChannelKind::Bec:
      return rng.next_double() < ch.param ? 0.0 : s;
    case ChannelKind::Bsc:
      return rng.next_double() < ch.param ? -s : s;
    case ChannelKind::Biawgn:
      return s + std::sqrt(ch.param) * rng.next_gaussian();
  }
  return 0.0;
}

MecSplit mec_split(const MecParams& params) {
  if (params.m < 2) throw std::invalid_argument("MEC needs m >= 2");
  check_prob(params.eps, "erasure probability");
  const double m = params.m;
  const double eps = params.eps;
  MecSplit out;
  out.capacity_m = m * (1.0 - eps);
  out.cutoff_m = m - std::log2(1.0 + (std::exp2(m) - 1.0) * eps);
  out.capacity_1 = 1.0 - eps;
  out.cutoff_1 = 1.0 - std::log2(1.0 + eps);
  out.boost_margin = m * out.cutoff_1 - out.cutoff_m;
  return out;
}

}  // namespace polarforge
