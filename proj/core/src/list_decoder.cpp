#include "polarforge/list_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace polarforge {

SclDecoder::SclDecoder(std::uint32_t block_length, std::uint32_t list_size,
                       std::optional<CrcSpec> crc, CheckNodeRule rule)
    : block_length_(block_length),
      list_size_(list_size),
      crc_(crc),
      rule_(rule) {
  if (list_size_ < 1) throw std::invalid_argument("list size must be >= 1");
  if (crc_ && crc_->width < 1)
    throw std::invalid_argument("CRC width must be >= 1");
}

BitWord SclDecoder::decode(const LlrWord& llrs, const CodeSpec& spec) {
  spec.validate();
  if (spec.block_length != block_length_)
    throw std::invalid_argument("decoder built for a different block length");
  if (llrs.size() != block_length_)
    throw std::invalid_argument("LLR word length != block length");
  if (crc_ && spec.dimension <= crc_->width)
    throw std::invalid_argument("dimension must exceed CRC width");

  const std::vector<Bit> mask = spec.data_mask();

  std::vector<Path> paths;
  paths.reserve(list_size_);
  paths.push_back(Path{ScEngine(block_length_, rule_),
                       BitWord(block_length_, 0), 0.0});
  paths.front().engine.load(llrs);

  // (penalty, parent, bit) candidates; stable order fixes ties so that
  // results are reproducible and an LLR of exactly zero decides 0.
  struct Cand {
    double penalty;
    std::uint32_t parent;
    Bit bit;
  };
  std::vector<Cand> cands;

  for (std::uint32_t i = 0; i < block_length_; ++i) {
    if (!mask[i]) {
      for (Path& p : paths) {
        const double L = p.engine.llr_at(i);
        if (L < 0.0) p.penalty += -L;
        p.engine.set_bit(i, 0);
        p.decisions[i] = 0;
      }
      continue;
    }
    cands.clear();
    for (std::uint32_t pi = 0; pi < paths.size(); ++pi) {
      const double L = paths[pi].engine.llr_at(i);
      cands.push_back({paths[pi].penalty + (L < 0.0 ? -L : 0.0), pi, 0});
      cands.push_back({paths[pi].penalty + (L > 0.0 ? L : 0.0), pi, 1});
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) {
                       return a.penalty < b.penalty;
                     });
    const std::size_t keep =
        std::min<std::size_t>(list_size_, cands.size());
    std::vector<Path> next;
    next.reserve(keep);
    for (std::size_t k = 0; k < keep; ++k) {
      const Cand& c = cands[k];
      next.push_back(paths[c.parent]);  // copy parent state
      Path& p = next.back();
      p.penalty = c.penalty;
      p.engine.set_bit(i, c.bit);
      p.decisions[i] = c.bit;
    }
    paths.swap(next);
  }

  // Frozen positions after the last data index can reorder penalties.
  std::stable_sort(paths.begin(), paths.end(),
                   [](const Path& a, const Path& b) {
                     return a.penalty < b.penalty;
                   });

  auto extract = [&](const Path& p) {
    BitWord out(spec.dimension);
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = p.decisions[spec.data_indices[k] - 1];
    return out;
  };

  if (crc_) {
    for (const Path& p : paths) {
      BitWord d = extract(p);
      if (crc_check(d, *crc_)) return d;
    }
  }
  return extract(paths.front());
}

}  // namespace polarforge
