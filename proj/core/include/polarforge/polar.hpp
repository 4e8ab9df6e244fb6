#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "polarforge/construction.hpp"

namespace polarforge {

using Bit = std::uint8_t;
using BitWord = std::vector<Bit>;
using LlrWord = std::vector<double>;

constexpr bool is_power_of_two(std::uint64_t n) {
  return n != 0 && (n & (n - 1)) == 0;
}

/// x = u P_n over GF(2), in place. P_n is the n-th Kronecker power of
/// [[1,0],[1,1]], natural order (no bit-reversal), and self-inverse.
void polar_transform_inplace(BitWord& word);

BitWord polar_transform(BitWord word);

/// Check-node / variable-node LLR combines of the SC recursion.
/// f is the exact tanh rule in its numerically stable form.
inline double f_llr(double a, double b) {
  const double sa = (a > 0.0) - (a < 0.0);
  const double sb = (b > 0.0) - (b < 0.0);
  const double m = std::min(std::abs(a), std::abs(b));
  return sa * sb * m + std::log1p(std::exp(-std::abs(a + b))) -
         std::log1p(std::exp(-std::abs(a - b)));
}

inline double f_minsum(double a, double b) {
  const double sa = (a > 0.0) - (a < 0.0);
  const double sb = (b > 0.0) - (b < 0.0);
  return sa * sb * std::min(std::abs(a), std::abs(b));
}

inline double g_llr(double a, double b, Bit u) { return u ? b - a : b + a; }

enum class CheckNodeRule { Exact, MinSum };

/// (N, K, A): block length, dimension, data index set (sorted, 1-based).
struct CodeSpec {
  std::uint32_t block_length = 0;
  std::uint32_t dimension = 0;
  std::vector<std::uint32_t> data_indices;

  double rate() const {
    return static_cast<double>(dimension) / block_length;
  }
  void validate() const;
  /// 0-based mask, 1 where the position carries data.
  std::vector<Bit> data_mask() const;
};

/// K indices with the smallest Bhattacharyya parameters; ties go to the
/// smaller index. Returned sorted ascending, 1-based.
std::vector<std::uint32_t> select_data_indices(const BitChannelStats& stats,
                                               std::uint32_t dimension);

/// Sum of Z(W_i) over A: the SC frame-error bound.
double union_bound(const BitChannelStats& stats,
                   const std::vector<std::uint32_t>& data_indices);

/// u_A = d, u elsewhere 0, then x = u P_n.
BitWord polar_encode(const BitWord& data, const CodeSpec& spec);

/// Successive-cancellation decoder, O(N log N). Reusable across frames;
/// a given instance must not be shared mid-decode.
class ScDecoder {
 public:
  explicit ScDecoder(std::uint32_t block_length,
                     CheckNodeRule rule = CheckNodeRule::Exact);

  /// Returns the K data bits u_A. LLR ties decide 0.
  BitWord decode(const LlrWord& llrs, const CodeSpec& spec);

 private:
  void decode_span(unsigned depth, std::uint32_t leaf_base, Bit* beta_out);

  std::uint32_t block_length_;
  unsigned levels_;
  CheckNodeRule rule_;
  std::vector<std::vector<double>> alpha_;  // per-depth scratch
  std::vector<Bit> hard_;                   // u-domain decisions
  const std::vector<Bit>* mask_ = nullptr;
};

/// One-shot convenience wrapper around ScDecoder.
BitWord sc_decode(const LlrWord& llrs, const CodeSpec& spec,
                  CheckNodeRule rule = CheckNodeRule::Exact);

}  // namespace polarforge
