#include <benchmark/benchmark.h>

#include "polarforge/channel.hpp"
#include "polarforge/construction.hpp"
#include "polarforge/list_decoder.hpp"
#include "polarforge/pac.hpp"
#include "polarforge/polar.hpp"
#include "polarforge/rng.hpp"

using namespace polarforge;

namespace {

BitWord random_word(std::uint32_t n, Rng& rng) {
  BitWord w(n);
  for (auto& b : w) b = rng.next_bit();
  return w;
}

CodeSpec half_rate_code(std::uint32_t n) {
  const auto stats = bec_bit_channels(0.5, n);
  return CodeSpec{n, n / 2, select_data_indices(stats, n / 2)};
}

LlrWord noisy_frame(const CodeSpec& spec, const ChannelModel& ch,
                    std::uint64_t frame) {
  Rng rng = Rng::substream(1, 0, frame);
  const BitWord d = random_word(spec.dimension, rng);
  const BitWord x = polar_encode(d, spec);
  LlrWord llrs(spec.block_length);
  for (std::uint32_t i = 0; i < spec.block_length; ++i)
    llrs[i] = llr(ch, sample(ch, x[i], rng));
  return llrs;
}

void BM_polar_transform(benchmark::State& state) {
  const std::uint32_t n = static_cast<std::uint32_t>(state.range(0));
  Rng rng(3);
  BitWord word = random_word(n, rng);
  for (auto _ : state) {
    polar_transform_inplace(word);
    benchmark::DoNotOptimize(word.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_polar_transform)->RangeMultiplier(4)->Range(64, 1 << 16);

void BM_sc_decode(benchmark::State& state) {
  const std::uint32_t n = static_cast<std::uint32_t>(state.range(0));
  const CodeSpec spec = half_rate_code(n);
  const auto ch = ChannelModel::biawgn_snr_db(2.0);
  ScDecoder dec(n);
  const LlrWord llrs = noisy_frame(spec, ch, 42);
  for (auto _ : state) benchmark::DoNotOptimize(dec.decode(llrs, spec));
}
BENCHMARK(BM_sc_decode)->RangeMultiplier(4)->Range(64, 4096);

void BM_scl_decode(benchmark::State& state) {
  const std::uint32_t list = static_cast<std::uint32_t>(state.range(0));
  const CodeSpec spec = half_rate_code(128);
  const auto ch = ChannelModel::biawgn_snr_db(2.0);
  SclDecoder dec(128, list);
  const LlrWord llrs = noisy_frame(spec, ch, 42);
  for (auto _ : state) benchmark::DoNotOptimize(dec.decode(llrs, spec));
}
BENCHMARK(BM_scl_decode)->RangeMultiplier(2)->Range(1, 32);

void BM_fano_decode(benchmark::State& state) {
  const double snr_db = static_cast<double>(state.range(0)) / 10.0;
  const std::uint32_t n = 128, k = 64;
  PacSpec spec;
  spec.code.block_length = n;
  spec.code.dimension = k;
  spec.code.data_indices =
      build_data_index_set(ScoreRuleKind::ReedMuller, n, k);
  spec.conv = ConvSpec::from_string("1011011");
  const auto ch = ChannelModel::biawgn_snr_db(snr_db);
  spec.fano.bias =
      capacity_metric_bias(mc_bit_channels(ch, n, 20000, 5));
  FanoDecoder dec(spec);
  std::uint64_t frame = 0, visits = 0;
  for (auto _ : state) {
    Rng rng = Rng::substream(2, 0, frame++);
    BitWord d = random_word(k, rng);
    const BitWord x = pac_encode(d, spec);
    LlrWord llrs(n);
    for (std::uint32_t i = 0; i < n; ++i)
      llrs[i] = llr(ch, sample(ch, x[i], rng));
    const FanoResult res = dec.decode(llrs);
    visits += res.visits;
    benchmark::DoNotOptimize(res.data.data());
  }
  state.counters["visits/frame"] =
      benchmark::Counter(static_cast<double>(visits),
                         benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_fano_decode)->Arg(20)->Arg(25)->Arg(30)->Arg(35);

void BM_mc_construction(benchmark::State& state) {
  const auto ch = ChannelModel::biawgn_snr_db(3.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        mc_bit_channels(ch, 128, static_cast<std::uint64_t>(state.range(0)),
                        7, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_mc_construction)->Arg(1000)->Arg(10000);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
