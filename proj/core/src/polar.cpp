#include "polarforge/polar.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace polarforge {

void polar_transform_inplace(BitWord& word) {
  const std::size_t n = word.size();
  if (!is_power_of_two(n))
    throw std::invalid_argument("polar transform needs a power-of-two length");
  for (std::size_t h = 1; h < n; h <<= 1)
    for (std::size_t base = 0; base < n; base += 2 * h)
      for (std::size_t j = base; j < base + h; ++j) word[j] ^= word[j + h];
}

BitWord polar_transform(BitWord word) {
  polar_transform_inplace(word);
  return word;
}

void CodeSpec::validate() const {
  if (!is_power_of_two(block_length) || block_length < 2)
    throw std::invalid_argument("block length must be a power of two >= 2");
  if (dimension < 1 || dimension > block_length)
    throw std::invalid_argument("dimension out of range");
  if (data_indices.size() != dimension)
    throw std::invalid_argument("data index set size != dimension");
  if (!std::is_sorted(data_indices.begin(), data_indices.end()))
    throw std::invalid_argument("data index set must be sorted");
  for (std::size_t i = 0; i < data_indices.size(); ++i) {
    if (data_indices[i] < 1 || data_indices[i] > block_length)
      throw std::invalid_argument("data index out of range");
    if (i > 0 && data_indices[i] == data_indices[i - 1])
      throw std::invalid_argument("duplicate data index");
  }
}

std::vector<Bit> CodeSpec::data_mask() const {
  std::vector<Bit> mask(block_length, 0);
  for (auto i : data_indices) mask[i - 1] = 1;
  return mask;
}

std::vector<std::uint32_t> select_data_indices(const BitChannelStats& stats,
                                               std::uint32_t dimension) {
  const std::uint32_t n = stats.block_length;
  if (dimension > n)
    throw std::invalid_argument("dimension exceeds block length");
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return stats.bhattacharyya[a] < stats.bhattacharyya[b];
                   });
  std::vector<std::uint32_t> picked(order.begin(), order.begin() + dimension);
  for (auto& i : picked) i += 1;
  std::sort(picked.begin(), picked.end());
  return picked;
}

double union_bound(const BitChannelStats& stats,
                   const std::vector<std::uint32_t>& data_indices) {
  double sum = 0.0, c = 0.0;  // Kahan
  for (auto i : data_indices) {
    if (i < 1 || i > stats.block_length)
      throw std::invalid_argument("data index out of range");
    const double y = stats.bhattacharyya[i - 1] - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

BitWord polar_encode(const BitWord& data, const CodeSpec& spec) {
  spec.validate();
  if (data.size() != spec.dimension)
    throw std::invalid_argument("source word length != dimension");
  BitWord carrier(spec.block_length, 0);
  for (std::size_t k = 0; k < data.size(); ++k)
    carrier[spec.data_indices[k] - 1] = data[k] & 1;
  polar_transform_inplace(carrier);
  return carrier;
}

ScDecoder::ScDecoder(std::uint32_t block_length, CheckNodeRule rule)
    : block_length_(block_length), rule_(rule) {
  if (!is_power_of_two(block_length) || block_length < 2)
    throw std::invalid_argument("block length must be a power of two >= 2");
  levels_ = std::countr_zero(block_length);
  alpha_.resize(levels_ + 1);
  for (unsigned d = 0; d <= levels_; ++d)
    alpha_[d].assign(block_length >> d, 0.0);
  hard_.assign(block_length, 0);
}

void ScDecoder::decode_span(unsigned depth, std::uint32_t leaf_base,
                            Bit* beta_out) {
  const std::uint32_t m = block_length_ >> depth;
  const std::vector<double>& a = alpha_[depth];
  if (m == 1) {
    Bit u = 0;
    if ((*mask_)[leaf_base]) u = a[0] < 0.0 ? 1 : 0;
    hard_[leaf_base] = u;
    beta_out[0] = u;
    return;
  }
  const std::uint32_t half = m / 2;
  std::vector<double>& child = alpha_[depth + 1];
  if (rule_ == CheckNodeRule::Exact) {
    for (std::uint32_t i = 0; i < half; ++i)
      child[i] = f_llr(a[i], a[i + half]);
  } else {
    for (std::uint32_t i = 0; i < half; ++i)
      child[i] = f_minsum(a[i], a[i + half]);
  }
  decode_span(depth + 1, leaf_base, beta_out);
  for (std::uint32_t i = 0; i < half; ++i)
    child[i] = g_llr(a[i], a[i + half], beta_out[i]);
  decode_span(depth + 1, leaf_base + half, beta_out + half);
  for (std::uint32_t i = 0; i < half; ++i) beta_out[i] ^= beta_out[i + half];
}

BitWord ScDecoder::decode(const LlrWord& llrs, const CodeSpec& spec) {
  spec.validate();
  if (spec.block_length != block_length_)
    throw std::invalid_argument("decoder built for a different block length");
  if (llrs.size() != block_length_)
    throw std::invalid_argument("LLR word length != block length");
  alpha_[0].assign(llrs.begin(), llrs.end());
  const std::vector<Bit> mask = spec.data_mask();
  mask_ = &mask;
  std::vector<Bit> beta(block_length_, 0);
  decode_span(0, 0, beta.data());
  mask_ = nullptr;
  BitWord out(spec.dimension);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = hard_[spec.data_indices[k] - 1];
  return out;
}

BitWord sc_decode(const LlrWord& llrs, const CodeSpec& spec,
                  CheckNodeRule rule) {
  ScDecoder dec(spec.block_length, rule);
  return dec.decode(llrs, spec);
}

}  // namespace polarforge
