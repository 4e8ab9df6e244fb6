#include "polarforge/sc_engine.hpp"

#include <bit>
#include <stdexcept>

namespace polarforge {

ScEngine::ScEngine(std::uint32_t block_length, CheckNodeRule rule)
    : block_length_(block_length), rule_(rule) {
  if (!is_power_of_two(block_length) || block_length < 2)
    throw std::invalid_argument("block length must be a power of two >= 2");
  levels_ = std::countr_zero(block_length);
  channel_.assign(block_length, 0.0);
  alpha_.resize(levels_ + 1);
  beta_.resize(levels_ + 1);
  for (unsigned d = 1; d <= levels_; ++d)
    alpha_[d].assign(block_length >> d, 0.0);
  for (unsigned d = 0; d <= levels_; ++d) beta_[d].assign(block_length, 0);
}

void ScEngine::load(const LlrWord& channel_llrs) {
  if (channel_llrs.size() != block_length_)
    throw std::invalid_argument("LLR word length != block length");
  channel_.assign(channel_llrs.begin(), channel_llrs.end());
}

double ScEngine::llr_at(std::uint32_t i) {
  if (i >= block_length_) throw std::invalid_argument("index out of range");
  const double* parent = channel_.data();
  for (unsigned d = 1; d <= levels_; ++d) {
    const std::uint32_t half = block_length_ >> d;
    // Leaf-space base of the depth-(d-1) node on the path to leaf i.
    const std::uint32_t parent_base = (i >> (levels_ - d + 1))
                                      << (levels_ - d + 1);
    const bool right = (i >> (levels_ - d)) & 1;
    double* child = alpha_[d].data();
    if (!right) {
      if (rule_ == CheckNodeRule::Exact) {
        for (std::uint32_t k = 0; k < half; ++k)
          child[k] = f_llr(parent[k], parent[k + half]);
      } else {
        for (std::uint32_t k = 0; k < half; ++k)
          child[k] = f_minsum(parent[k], parent[k + half]);
      }
    } else {
      const Bit* left_beta = beta_[d].data() + parent_base;
      for (std::uint32_t k = 0; k < half; ++k)
        child[k] = g_llr(parent[k], parent[k + half], left_beta[k]);
    }
    parent = child;
  }
  return parent[0];
}

void ScEngine::set_bit(std::uint32_t i, Bit value) {
  if (i >= block_length_) throw std::invalid_argument("index out of range");
  beta_[levels_][i] = value & 1;
  // Merge partial sums upward while the completed node is a right child.
  for (unsigned d = levels_; d >= 1; --d) {
    const std::uint32_t node = i >> (levels_ - d);
    if ((node & 1) == 0) break;
    const std::uint32_t half = block_length_ >> d;
    const std::uint32_t parent_base = (i >> (levels_ - d + 1))
                                      << (levels_ - d + 1);
    Bit* parent = beta_[d - 1].data() + parent_base;
    const Bit* left = beta_[d].data() + parent_base;
    const Bit* right = left + half;
    for (std::uint32_t k = 0; k < half; ++k) {
      parent[k] = left[k] ^ right[k];
      parent[k + half] = right[k];
    }
  }
}

}  // namespace polarforge
