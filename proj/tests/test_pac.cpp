#include <stdexcept>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "polarforge/channel.hpp"
#include "polarforge/pac.hpp"
#include "polarforge/rng.hpp"

using namespace polarforge;

namespace {

BitWord random_word(std::uint32_t n, Rng& rng) {
  BitWord w(n);
  for (auto& b : w) b = rng.next_bit();
  return w;
}

PacSpec rm_pac_spec(std::uint32_t n, std::uint32_t k,
                    const std::string& conv = "1011011") {
  PacSpec spec;
  spec.code.block_length = n;
  spec.code.dimension = k;
  spec.code.data_indices =
      build_data_index_set(ScoreRuleKind::ReedMuller, n, k);
  spec.conv = ConvSpec::from_string(conv);
  return spec;
}

}  // namespace

TEST_SUITE_BEGIN("pac");

TEST_CASE("convolution worked examples") {
  const ConvSpec c111 = ConvSpec::from_string("111");
  CHECK(conv_encode({0, 0, 0, 1, 0, 0, 1, 1}, c111) ==
        BitWord{0, 0, 0, 1, 1, 1, 1, 0});
  const ConvSpec identity = ConvSpec::from_string("1");
  const BitWord v{1, 0, 1, 1, 0};
  CHECK(conv_encode(v, identity) == v);
  // Impulse response shows up verbatim.
  const ConvSpec c = ConvSpec::from_string("1011011");
  BitWord impulse(16, 0);
  impulse[0] = 1;
  const BitWord u = conv_encode(impulse, c);
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(u[i] == (i < c.taps.size() ? c.taps[i] : 0));
}

TEST_CASE("convolution inversion") {
  const ConvSpec c111 = ConvSpec::from_string("111");
  CHECK(conv_invert({0, 0, 0, 1, 1, 1, 1, 0}, c111) ==
        BitWord{0, 0, 0, 1, 0, 0, 1, 1});
  CHECK(conv_invert(BitWord(12, 0), c111) == BitWord(12, 0));
  Rng rng(3);
  for (const char* taps : {"1", "11", "111", "1011011", "1100101"}) {
    const ConvSpec c = ConvSpec::from_string(taps);
    for (int t = 0; t < 50; ++t) {
      const BitWord v = random_word(32, rng);
      CHECK(conv_invert(conv_encode(v, c), c) == v);
    }
  }
}

TEST_CASE("conv_encode equals the Toeplitz matrix product, N = 8") {
  const ConvSpec c = ConvSpec::from_string("111");
  // T rows: impulse response shifted along the diagonal.
  std::vector<BitWord> T(8, BitWord(8, 0));
  for (std::uint32_t r = 0; r < 8; ++r)
    for (std::uint32_t j = 0; j < 3 && r + j < 8; ++j)
      T[r][r + j] = c.taps[j];
  for (std::uint32_t mask = 0; mask < 256; ++mask) {
    BitWord v(8);
    for (std::uint32_t i = 0; i < 8; ++i) v[i] = (mask >> i) & 1;
    BitWord product(8, 0);
    for (std::uint32_t col = 0; col < 8; ++col) {
      Bit acc = 0;
      for (std::uint32_t row = 0; row < 8; ++row)
        acc ^= v[row] & T[row][col];
      product[col] = acc;
    }
    CHECK(conv_encode(v, c) == product);
  }
}

TEST_CASE("taps validation") {
  CHECK_THROWS_AS(ConvSpec::from_string("0110"), std::invalid_argument);
  CHECK_THROWS_AS(ConvSpec::from_string("10"), std::invalid_argument);
  CHECK_THROWS_AS(ConvSpec::from_string("1021"), std::invalid_argument);
  CHECK(ConvSpec::from_string("1011011").memory() == 6);
}

TEST_CASE("score rules") {
  CHECK(rm_score(13) == 2);  // 12 = 1100
  CHECK(build_data_index_set(ScoreRuleKind::ReedMuller, 8, 4) ==
        std::vector<std::uint32_t>{4, 6, 7, 8});
  // Cutoff rule reproduces the Z-ranked polar selection.
  const auto stats = bec_bit_channels(0.5, 8);
  for (std::uint32_t k = 1; k <= 8; ++k)
    CHECK(build_data_index_set(ScoreRuleKind::Cutoff, 8, k, &stats) ==
          select_data_indices(stats, k));
  CHECK_THROWS_AS(build_data_index_set(ScoreRuleKind::Cutoff, 8, 4),
                  std::invalid_argument);
  // Ties go to the larger index: RM at N=4, K=2 has scores (0,1,1,2).
  CHECK(build_data_index_set(ScoreRuleKind::ReedMuller, 4, 2) ==
        std::vector<std::uint32_t>{3, 4});
}

TEST_CASE("rate profile") {
  CHECK(rate_profile({4, 6, 7, 8}, 8) ==
        std::vector<std::uint32_t>{0, 0, 0, 0, 1, 1, 2, 3, 4});
  CHECK(rate_profile({}, 4) == std::vector<std::uint32_t>{0, 0, 0, 0, 0});
  std::vector<std::uint32_t> all{1, 2, 3, 4};
  const auto full = rate_profile(all, 4);
  for (std::uint32_t i = 0; i <= 4; ++i) CHECK(full[i] == i);
}

TEST_CASE("pac encoding") {
  PacSpec spec = rm_pac_spec(8, 4, "111");
  CHECK(pac_encode({0, 0, 0, 0}, spec) == BitWord(8, 0));
  // Worked example: d=(1,0,1,1) -> v=(0,0,0,1,0,0,1,1) -> u=(0,0,0,1,1,1,1,0).
  const BitWord expected_x = polar_transform({0, 0, 0, 1, 1, 1, 1, 0});
  CHECK(pac_encode({1, 0, 1, 1}, spec) == expected_x);

  // Identity taps with the polar (cutoff) rule reproduce polar encoding.
  const auto stats = bec_bit_channels(0.5, 8);
  PacSpec ident;
  ident.code.block_length = 8;
  ident.code.dimension = 4;
  ident.code.data_indices =
      build_data_index_set(ScoreRuleKind::Cutoff, 8, 4, &stats);
  ident.conv = ConvSpec::from_string("1");
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const BitWord d = random_word(4, rng);
    CHECK(pac_encode(d, ident) == polar_encode(d, ident.code));
  }
}

TEST_CASE("encoding is a bijection") {
  PacSpec spec = rm_pac_spec(8, 4);
  for (std::uint32_t mask = 0; mask < 16; ++mask) {
    BitWord d(4);
    for (std::uint32_t i = 0; i < 4; ++i) d[i] = (mask >> i) & 1;
    const BitWord x = pac_encode(d, spec);
    // Invert: transform is an involution, then undo the convolution.
    const BitWord v = conv_invert(polar_transform(x), spec.conv);
    for (std::size_t k = 0; k < 4; ++k)
      CHECK(v[spec.code.data_indices[k] - 1] == d[k]);
    for (std::uint32_t i = 1; i <= 8; ++i) {
      bool in_a = std::find(spec.code.data_indices.begin(),
                            spec.code.data_indices.end(),
                            i) != spec.code.data_indices.end();
      if (!in_a) CHECK(v[i - 1] == 0);
    }
  }
}

TEST_CASE("irregular tree branch labels equal the convolution output") {
  // All 16 leaves of the N=8, A={4,6,7,8} tree (taps 111).
  PacSpec spec = rm_pac_spec(8, 4, "111");
  const auto mask = spec.code.data_mask();
  for (std::uint32_t leaf = 0; leaf < 16; ++leaf) {
    BitWord d(4);
    for (std::uint32_t i = 0; i < 4; ++i) d[i] = (leaf >> i) & 1;
    BitWord v(8, 0);
    for (std::size_t k = 0; k < 4; ++k)
      v[spec.code.data_indices[k] - 1] = d[k];
    // Walk the tree the way the decoder does: single forced branch at
    // frozen positions, chosen branch at data positions.
    BitWord labels(8, 0);
    for (std::uint32_t pos = 0; pos < 8; ++pos) {
      Bit feedback = 0;
      for (std::uint32_t j = 1; j < spec.conv.taps.size() && j <= pos; ++j)
        feedback ^= static_cast<Bit>(spec.conv.taps[j] & v[pos - j]);
      labels[pos] = mask[pos] ? static_cast<Bit>(feedback ^ v[pos])
                              : feedback;
    }
    CHECK(labels == conv_encode(v, spec.conv));
  }
}

TEST_CASE("capacity metric bias") {
  const auto stats = bec_bit_channels(0.5, 8);
  const auto bias = capacity_metric_bias(stats);
  REQUIRE(bias.size() == 8);
  for (std::uint32_t i = 0; i < 8; ++i)
    CHECK(bias[i] == doctest::Approx(stats.bhattacharyya[i]));  // BEC: 1-C = Z

  // A biased decoder still round-trips noiseless frames.
  PacSpec spec = rm_pac_spec(8, 4, "111");
  spec.fano.bias = bias;
  FanoDecoder dec(spec);
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const BitWord d = random_word(4, rng);
    const BitWord x = pac_encode(d, spec);
    LlrWord llrs(8);
    for (std::uint32_t i = 0; i < 8; ++i)
      llrs[i] = x[i] ? -kLlrMax : kLlrMax;
    CHECK(dec.decode(llrs).data == d);
  }
  spec.fano.bias = {1.0, 2.0};  // wrong length
  CHECK_THROWS_AS(FanoDecoder{spec}, std::invalid_argument);
}

TEST_CASE("branch metric limiting values") {
  constexpr double inv_ln2 = 1.0 / std::numbers::ln2;
  // Certain bit at a frozen position: log2(1) + 1.
  CHECK(fano_branch_metric(kLlrMax, 0, false) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Certain correct data bit: ~0. Wrong hypothesis: about -LLR_MAX/ln2.
  CHECK(fano_branch_metric(kLlrMax, 0, true) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fano_branch_metric(kLlrMax, 1, true) ==
        doctest::Approx(-kLlrMax * inv_ln2).epsilon(1e-6));
  // Erased data position: log2(1/2) for either hypothesis.
  CHECK(fano_branch_metric(0.0, 0, true) == doctest::Approx(-1.0));
  CHECK(fano_branch_metric(0.0, 1, true) == doctest::Approx(-1.0));
}

TEST_CASE("fano decodes noiseless input in one pass") {
  for (std::uint32_t n : {8u, 128u}) {
    PacSpec spec = rm_pac_spec(n, n / 2);
    spec.fano.max_visits = n;  // exactly one forward pass allowed
    FanoDecoder dec(spec);
    Rng rng(64);
    for (int t = 0; t < 10; ++t) {
      const BitWord d = random_word(n / 2, rng);
      const BitWord x = pac_encode(d, spec);
      LlrWord llrs(n);
      for (std::uint32_t i = 0; i < n; ++i)
        llrs[i] = x[i] ? -kLlrMax : kLlrMax;
      const FanoResult res = dec.decode(llrs);
      CHECK(res.data == d);
      CHECK(res.visits == n);
      CHECK_FALSE(res.exhausted);
    }
  }
}

TEST_CASE("visit budget of N exhausts as soon as any backtrack happens") {
  const std::uint32_t n = 32, k = 16;
  PacSpec probe = rm_pac_spec(n, k);
  probe.fano.max_visits = 1000000;
  FanoDecoder full(probe);
  PacSpec capped = probe;
  capped.fano.max_visits = n;
  FanoDecoder tight(capped);
  const auto ch = ChannelModel::biawgn_snr_db(0.0);
  int seen_backtrack = 0;
  for (int f = 0; f < 200; ++f) {
    Rng rng = Rng::substream(99, 0, f);
    const BitWord d = random_word(k, rng);
    const BitWord x = pac_encode(d, probe);
    LlrWord llrs(n);
    for (std::uint32_t i = 0; i < n; ++i)
      llrs[i] = llr(ch, sample(ch, x[i], rng));
    const FanoResult free_run = full.decode(llrs);
    const FanoResult capped_run = tight.decode(llrs);
    if (free_run.visits > n) {
      ++seen_backtrack;
      CHECK(capped_run.exhausted);
      CHECK(capped_run.visits == n);
    } else {
      CHECK_FALSE(capped_run.exhausted);
    }
  }
  CHECK(seen_backtrack > 0);  // 0 dB is noisy enough to force backtracks
}

TEST_CASE("noiseless-limit agreement with algebraic inversion") {
  // Hard +-LLR_MAX words that are valid codewords decode to the same
  // result as transform involution plus convolution inversion.
  PacSpec spec = rm_pac_spec(16, 8);
  FanoDecoder dec(spec);
  Rng rng(123);
  for (int t = 0; t < 50; ++t) {
    const BitWord d = random_word(8, rng);
    const BitWord x = pac_encode(d, spec);
    LlrWord llrs(16);
    for (std::uint32_t i = 0; i < 16; ++i)
      llrs[i] = x[i] ? -kLlrMax : kLlrMax;
    BitWord hard(16);
    for (std::uint32_t i = 0; i < 16; ++i) hard[i] = llrs[i] < 0;
    const BitWord v = conv_invert(polar_transform(hard), spec.conv);
    const FanoResult res = dec.decode(llrs);
    for (std::size_t k = 0; k < 8; ++k)
      CHECK(res.data[k] == v[spec.code.data_indices[k] - 1]);
    CHECK(res.data == d);
  }
}

TEST_CASE("metric drift: up along the correct path, down on siblings") {
  const std::uint32_t n = 128, k = 64;
  PacSpec spec = rm_pac_spec(n, k);
  const auto ch = ChannelModel::biawgn_snr_db(3.0);
  const auto mask = spec.code.data_mask();
  ScEngine engine(n);
  double mean_final = 0.0, mean_wrong_branch = 0.0;
  int wrong_count = 0;
  const int frames = 1000;
  for (int f = 0; f < frames; ++f) {
    Rng rng = Rng::substream(2718, 0, f);
    const BitWord d = random_word(k, rng);
    BitWord v(n, 0);
    for (std::size_t i = 0; i < k; ++i)
      v[spec.code.data_indices[i] - 1] = d[i];
    const BitWord u = conv_encode(v, spec.conv);
    const BitWord x = polar_transform(u);
    LlrWord llrs(n);
    for (std::uint32_t i = 0; i < n; ++i)
      llrs[i] = llr(ch, sample(ch, x[i], rng));
    engine.load(llrs);
    double cum = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const double L = engine.llr_at(i);
      cum += fano_branch_metric(L, u[i], mask[i] != 0);
      if (mask[i]) {
        mean_wrong_branch += fano_branch_metric(L, u[i] ^ 1, true);
        ++wrong_count;
      }
      engine.set_bit(i, u[i]);
    }
    mean_final += cum;
  }
  mean_final /= frames;
  mean_wrong_branch /= wrong_count;
  CHECK(mean_final > 0.0);
  CHECK(mean_wrong_branch < 0.0);
  // The drift target is about N*C - K.
  const double predicted = n * capacity(ch) - k;
  CHECK(mean_final == doctest::Approx(predicted).epsilon(0.15));
}

TEST_CASE("polar design rule searches faster than RM at equal SNR") {
  const std::uint32_t n = 128, k = 64;
  const auto ch = ChannelModel::biawgn_snr_db(3.0);
  const auto stats = mc_bit_channels(ch, n, 50000, 17);
  PacSpec rm = rm_pac_spec(n, k);
  PacSpec polar_rule = rm;
  polar_rule.code.data_indices =
      build_data_index_set(ScoreRuleKind::Cutoff, n, k, &stats);
  FanoDecoder rm_dec(rm);
  FanoDecoder polar_dec(polar_rule);
  std::uint64_t rm_visits = 0, polar_visits = 0;
  const int frames = 1000;
  for (int f = 0; f < frames; ++f) {
    Rng rng = Rng::substream(31415, 0, f);
    const BitWord d = random_word(k, rng);
    Rng noise_rm = Rng::substream(31415, 1, f);
    Rng noise_polar = Rng::substream(31415, 1, f);  // paired noise
    const BitWord x_rm = pac_encode(d, rm);
    const BitWord x_polar = pac_encode(d, polar_rule);
    LlrWord llr_rm(n), llr_polar(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      llr_rm[i] = llr(ch, sample(ch, x_rm[i], noise_rm));
      llr_polar[i] = llr(ch, sample(ch, x_polar[i], noise_polar));
    }
    rm_visits += rm_dec.decode(llr_rm).visits;
    polar_visits += polar_dec.decode(llr_polar).visits;
  }
  CHECK(polar_visits <= rm_visits);
}

TEST_SUITE_END();
