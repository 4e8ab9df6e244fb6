#include "polarforge/pac.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace polarforge {

namespace {
constexpr double kLn2 = std::numbers::ln2;
}

ConvSpec ConvSpec::from_string(const std::string& text) {
  ConvSpec conv;
  conv.taps.clear();
  for (char c : text) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("bad convolution taps '" + text + "'");
    conv.taps.push_back(c == '1');
  }
  conv.validate();
  return conv;
}

std::string ConvSpec::to_string() const {
  std::string out;
  for (Bit b : taps) out += b ? '1' : '0';
  return out;
}

void ConvSpec::validate() const {
  if (taps.empty() || taps.front() != 1 || taps.back() != 1)
    throw std::invalid_argument("impulse response needs c_0 = c_m = 1");
}

BitWord conv_encode(const BitWord& v, const ConvSpec& conv) {
  conv.validate();
  const std::size_t n = v.size();
  const unsigned m = conv.memory();
  BitWord u(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Bit acc = 0;
    const unsigned jmax = static_cast<unsigned>(std::min<std::size_t>(m, i));
    for (unsigned j = 0; j <= jmax; ++j)
      acc ^= static_cast<Bit>(conv.taps[j] & v[i - j]);
    u[i] = acc;
  }
  return u;
}

BitWord conv_invert(const BitWord& u, const ConvSpec& conv) {
  conv.validate();
  const std::size_t n = u.size();
  const unsigned m = conv.memory();
  BitWord v(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Bit acc = u[i];
    const unsigned jmax = static_cast<unsigned>(std::min<std::size_t>(m, i));
    for (unsigned j = 1; j <= jmax; ++j)
      acc ^= static_cast<Bit>(conv.taps[j] & v[i - j]);
    v[i] = acc;  // c_0 = 1
  }
  return v;
}

unsigned rm_score(std::uint32_t index) {
  if (index < 1) throw std::invalid_argument("indices are 1-based");
  return static_cast<unsigned>(std::popcount(index - 1));
}

std::vector<std::uint32_t> build_data_index_set(ScoreRuleKind rule,
                                                std::uint32_t block_length,
                                                std::uint32_t dimension,
                                                const BitChannelStats* stats) {
  if (!is_power_of_two(block_length))
    throw std::invalid_argument("block length must be a power of two");
  if (dimension > block_length)
    throw std::invalid_argument("dimension exceeds block length");
  if (rule != ScoreRuleKind::ReedMuller) {
    if (stats == nullptr)
      throw std::invalid_argument("score rule needs bit-channel statistics");
    if (stats->block_length != block_length)
      throw std::invalid_argument("statistics block length mismatch");
  }
  auto score = [&](std::uint32_t i) -> double {
    switch (rule) {
      case ScoreRuleKind::ReedMuller:
        return rm_score(i);
      case ScoreRuleKind::Capacity:
        return stats->capacity[i - 1];
      case ScoreRuleKind::Cutoff:
        return stats->cutoff[i - 1];
    }
    return 0.0;
  };
  std::vector<std::uint32_t> order(block_length);
  std::iota(order.begin(), order.end(), 1u);
  // Descending score; ties toward the larger (more polarized) index.
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              const double sa = score(a), sb = score(b);
              if (sa != sb) return sa > sb;
              return a > b;
            });
  std::vector<std::uint32_t> picked(order.begin(), order.begin() + dimension);
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<std::uint32_t> rate_profile(
    const std::vector<std::uint32_t>& data_indices,
    std::uint32_t block_length) {
  std::vector<std::uint32_t> profile(block_length + 1, 0);
  for (auto i : data_indices) {
    if (i < 1 || i > block_length)
      throw std::invalid_argument("data index out of range");
    profile[i] += 1;
  }
  for (std::uint32_t i = 1; i <= block_length; ++i)
    profile[i] += profile[i - 1];
  return profile;
}

BitWord pac_encode(const BitWord& data, const PacSpec& spec) {
  spec.code.validate();
  spec.conv.validate();
  if (data.size() != spec.code.dimension)
    throw std::invalid_argument("source word length != dimension");
  BitWord v(spec.code.block_length, 0);
  for (std::size_t k = 0; k < data.size(); ++k)
    v[spec.code.data_indices[k] - 1] = data[k] & 1;
  BitWord u = conv_encode(v, spec.conv);
  polar_transform_inplace(u);
  return u;
}

double fano_branch_metric(double llr_value, Bit bit, bool is_data_position) {
  const double s = bit ? -llr_value : llr_value;
  const double log2p = -detail::log1pexp_neg(s) / kLn2;
  return log2p + (is_data_position ? 0.0 : 1.0);
}

std::vector<double> capacity_metric_bias(const BitChannelStats& stats) {
  std::vector<double> bias(stats.block_length);
  for (std::uint32_t i = 0; i < stats.block_length; ++i)
    bias[i] = 1.0 - stats.capacity[i];
  return bias;
}

FanoDecoder::FanoDecoder(const PacSpec& spec, CheckNodeRule rule)
    : spec_(spec), engine_(spec.code.block_length, rule) {
  spec_.code.validate();
  spec_.conv.validate();
  if (!(spec_.fano.delta > 0.0))
    throw std::invalid_argument("Fano step must be positive");
  if (spec_.fano.max_visits < spec_.code.block_length)
    throw std::invalid_argument("visit budget must be at least N");
  mask_ = spec_.code.data_mask();
  bias_ = spec_.fano.bias;
  if (bias_.empty()) {
    bias_.resize(spec_.code.block_length);
    for (std::uint32_t i = 0; i < spec_.code.block_length; ++i)
      bias_[i] = mask_[i] ? 0.0 : 1.0;
  } else if (bias_.size() != spec_.code.block_length) {
    throw std::invalid_argument("bias vector length != block length");
  }
  nodes_.resize(spec_.code.block_length);
  v_.assign(spec_.code.block_length, 0);
}

Bit FanoDecoder::forced_feedback(std::uint32_t pos) const {
  const unsigned m = spec_.conv.memory();
  Bit acc = 0;
  for (unsigned j = 1; j <= m && j <= pos; ++j)
    acc ^= static_cast<Bit>(spec_.conv.taps[j] & v_[pos - j]);
  return acc;
}

void FanoDecoder::enter(std::uint32_t pos, double gamma_in) {
  Node& nd = nodes_[pos];
  nd.gamma_in = gamma_in;
  nd.choice = 0;
  const double L = engine_.llr_at(pos);
  const Bit feedback = forced_feedback(pos);
  const double shift = bias_[pos] - (mask_[pos] ? 0.0 : 1.0);
  if (mask_[pos]) {
    const Bit u0 = feedback;            // v = 0
    const Bit u1 = feedback ^ 1;        // v = 1
    const double m0 = fano_branch_metric(L, u0, true) + shift;
    const double m1 = fano_branch_metric(L, u1, true) + shift;
    nd.branches = 2;
    if (m1 > m0) {  // higher metric first; ties toward v = 0
      nd.metric[0] = m1;
      nd.vbit[0] = 1;
      nd.ubit[0] = u1;
      nd.metric[1] = m0;
      nd.vbit[1] = 0;
      nd.ubit[1] = u0;
    } else {
      nd.metric[0] = m0;
      nd.vbit[0] = 0;
      nd.ubit[0] = u0;
      nd.metric[1] = m1;
      nd.vbit[1] = 1;
      nd.ubit[1] = u1;
    }
  } else {
    nd.branches = 1;
    nd.metric[0] = fano_branch_metric(L, feedback, false) + shift;
    nd.vbit[0] = 0;
    nd.ubit[0] = feedback;
  }
  ++visits_;
}

FanoResult FanoDecoder::decode(const LlrWord& llrs) {
  const std::uint32_t n = spec_.code.block_length;
  if (llrs.size() != n)
    throw std::invalid_argument("LLR word length != block length");
  engine_.load(llrs);
  std::fill(v_.begin(), v_.end(), 0);
  visits_ = 0;

  auto result = [&](bool exhausted) {
    FanoResult res;
    res.visits = visits_;
    res.exhausted = exhausted;
    res.data.resize(spec_.code.dimension);
    for (std::size_t k = 0; k < res.data.size(); ++k)
      res.data[k] = v_[spec_.code.data_indices[k] - 1];
    return res;
  };

  double threshold = 0.0;
  std::uint32_t pos = 0;
  enter(0, 0.0);
  for (;;) {
    Node& nd = nodes_[pos];
    const double ahead = nd.gamma_in + nd.metric[nd.choice];
    if (ahead >= threshold) {
      // First visit iff the current node was not reachable at the
      // tightened threshold; then raise the threshold as far as the
      // look-ahead metric allows.
      if (nd.gamma_in < threshold + spec_.fano.delta)
        while (ahead >= threshold + spec_.fano.delta)
          threshold += spec_.fano.delta;
      v_[pos] = nd.vbit[nd.choice];
      engine_.set_bit(pos, nd.ubit[nd.choice]);
      ++pos;
      if (pos == n) return result(false);
      if (visits_ >= spec_.fano.max_visits) return result(true);
      enter(pos, ahead);
      continue;
    }
    // Threshold violated: retreat while possible, else relax.
    for (;;) {
      if (pos == 0 || nodes_[pos - 1].gamma_in < threshold) {
        threshold -= spec_.fano.delta;
        nodes_[pos].choice = 0;
        break;
      }
      --pos;
      if (nodes_[pos].choice + 1 < nodes_[pos].branches) {
        ++nodes_[pos].choice;
        break;
      }
    }
  }
}

FanoResult fano_decode(const LlrWord& llrs, const PacSpec& spec) {
  FanoDecoder dec(spec);
  return dec.decode(llrs);
}

}  // namespace polarforge
