#pragma once

#include <cstdint>
#include <vector>

#include "polarforge/polar.hpp"

namespace polarforge {

/// Stepwise SC LLR calculator with rollback, shared by the list and
/// Fano decoders.
///
/// llr_at(i) is valid whenever bits 0..i-1 reflect the current
/// hypothesis path via set_bit. Rolling back is implicit: re-committing
/// from any earlier position simply overwrites later state, so a
/// backtracking search never has to undo partial-sum updates. Each call
/// recomputes the root-to-leaf path (O(N) combines), which keeps the
/// state small enough to copy cheaply when a list decoder forks paths.
class ScEngine {
 public:
  explicit ScEngine(std::uint32_t block_length,
                    CheckNodeRule rule = CheckNodeRule::Exact);

  void load(const LlrWord& channel_llrs);

  /// LLR of u_i given the channel word and committed bits u_0..u_{i-1}.
  double llr_at(std::uint32_t i);

  /// Commits u_i and propagates partial sums upward.
  void set_bit(std::uint32_t i, Bit value);

  std::uint32_t block_length() const { return block_length_; }

 private:
  std::uint32_t block_length_ = 0;
  unsigned levels_ = 0;
  CheckNodeRule rule_ = CheckNodeRule::Exact;
  std::vector<double> channel_;             // depth-0 LLRs
  std::vector<std::vector<double>> alpha_;  // path scratch, depth 1..n
  std::vector<std::vector<Bit>> beta_;      // partial sums per depth
};

}  // namespace polarforge
