#include "polarforge/construction.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "polarforge/polar.hpp"

namespace polarforge {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_power_of_two(std::uint32_t n) {
  if (!is_power_of_two(n) || n < 2)
    throw std::invalid_argument("block length must be a power of two >= 2");
}

// Genie-aided leaf LLRs for the all-zero transform input: partial sums
// are all zero, so the right-branch combine is a plain addition.
void genie_leaf_llrs(std::vector<std::vector<double>>& alpha, unsigned depth,
                     std::uint32_t n, double* out) {
  const std::uint32_t m = n >> depth;
  const std::vector<double>& a = alpha[depth];
  if (m == 1) {
    out[0] = a[0];
    return;
  }
  const std::uint32_t half = m / 2;
  std::vector<double>& child = alpha[depth + 1];
  for (std::uint32_t i = 0; i < half; ++i)
    child[i] = f_llr(a[i], a[i + half]);
  genie_leaf_llrs(alpha, depth + 1, n, out);
  for (std::uint32_t i = 0; i < half; ++i) child[i] = a[i] + a[i + half];
  genie_leaf_llrs(alpha, depth + 1, n, out + half);
}

// Exponent guard: a genie LLR can reach -N*kLlrMax in principle; keep
// exp() finite without disturbing any realistically reachable value.
double exp_capped(double x) { return std::exp(std::min(x, 690.0)); }

struct ChunkSums {
  std::vector<double> z;
  std::vector<double> cap;
};

constexpr std::uint64_t kMcChunk = 8192;

}  // namespace

BitChannelStats bec_bit_channels(double eps, std::uint32_t block_length) {
  require_power_of_two(block_length);
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("erasure probability must be in [0,1]");
  std::vector<double> e{eps};
  while (e.size() < block_length) {
    std::vector<double> next(e.size() * 2);
    for (std::size_t k = 0; k < e.size(); ++k) {
      next[2 * k] = 2.0 * e[k] - e[k] * e[k];
      next[2 * k + 1] = e[k] * e[k];
    }
    e.swap(next);
  }
  BitChannelStats stats;
  stats.block_length = block_length;
  stats.method = ConstructionMethod::ExactBec;
  stats.bhattacharyya = std::move(e);
  stats.capacity.resize(block_length);
  stats.cutoff.resize(block_length);
  for (std::uint32_t i = 0; i < block_length; ++i) {
    stats.capacity[i] = 1.0 - stats.bhattacharyya[i];
    stats.cutoff[i] = 1.0 - std::log2(1.0 + stats.bhattacharyya[i]);
  }
  return stats;
}

BitChannelStats mc_bit_channels(const ChannelModel& ch,
                                std::uint32_t block_length,
                                std::uint64_t samples, std::uint64_t seed,
                                unsigned workers) {
  require_power_of_two(block_length);
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");

  const std::uint64_t chunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<ChunkSums> partial(chunks);
  std::atomic<std::uint64_t> next_chunk{0};

  auto worker = [&]() {
    const unsigned levels = std::countr_zero(block_length);
    std::vector<std::vector<double>> alpha(levels + 1);
    for (unsigned d = 0; d <= levels; ++d)
      alpha[d].assign(block_length >> d, 0.0);
    std::vector<double> leaf(block_length);
    for (;;) {
      const std::uint64_t c = next_chunk.fetch_add(1);
      if (c >= chunks) return;
      ChunkSums& sums = partial[c];
      sums.z.assign(block_length, 0.0);
      sums.cap.assign(block_length, 0.0);
      const std::uint64_t begin = c * kMcChunk;
      const std::uint64_t end = std::min(begin + kMcChunk, samples);
      Rng rng = Rng::substream(seed, 0xC0517u, c);
      for (std::uint64_t s = begin; s < end; ++s) {
        for (std::uint32_t i = 0; i < block_length; ++i)
          alpha[0][i] = llr(ch, sample(ch, 0, rng));
        genie_leaf_llrs(alpha, 0, block_length, leaf.data());
        for (std::uint32_t i = 0; i < block_length; ++i) {
          sums.z[i] += exp_capped(-leaf[i] / 2.0);
          sums.cap[i] += 1.0 - detail::log1pexp_neg(leaf[i]) / kLn2;
        }
      }
    }
  };

  unsigned nthreads = workers ? workers : std::thread::hardware_concurrency();
  if (nthreads == 0) nthreads = 1;
  nthreads = static_cast<unsigned>(
      std::min<std::uint64_t>(nthreads, chunks));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BitChannelStats stats;
  stats.block_length = block_length;
  stats.method = ConstructionMethod::MonteCarlo;
  stats.samples = samples;
  stats.seed = seed;
  stats.bhattacharyya.assign(block_length, 0.0);
  stats.capacity.assign(block_length, 0.0);
  stats.cutoff.assign(block_length, 0.0);
  // Reduce in chunk order so results do not depend on thread count.
  for (const ChunkSums& sums : partial) {
    for (std::uint32_t i = 0; i < block_length; ++i) {
      stats.bhattacharyya[i] += sums.z[i];
      stats.capacity[i] += sums.cap[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(samples);
  for (std::uint32_t i = 0; i < block_length; ++i) {
    stats.bhattacharyya[i] *= inv;
    stats.capacity[i] *= inv;
    stats.cutoff[i] = 1.0 - std::log2(1.0 + stats.bhattacharyya[i]);
  }
  return stats;
}

ProfileTable profiles(const BitChannelStats& stats, const ChannelModel& ch) {
  const std::uint32_t n = stats.block_length;
  const double raw_cap = capacity(ch);
  const double raw_r0 = cutoff_rate(ch);
  ProfileTable table;
  table.pol_cap.assign(n + 1, 0.0);
  table.pol_r0.assign(n + 1, 0.0);
  table.unpol_cap.assign(n + 1, 0.0);
  table.unpol_r0.assign(n + 1, 0.0);
  double sc = 0.0, cc = 0.0, sr = 0.0, cr = 0.0;  // Kahan pairs
  for (std::uint32_t i = 1; i <= n; ++i) {
    double y = stats.capacity[i - 1] - cc;
    double t = sc + y;
    cc = (t - sc) - y;
    sc = t;
    y = stats.cutoff[i - 1] - cr;
    t = sr + y;
    cr = (t - sr) - y;
    sr = t;
    table.pol_cap[i] = sc;
    table.pol_r0[i] = sr;
    table.unpol_cap[i] = i * raw_cap;
    table.unpol_r0[i] = i * raw_r0;
  }
  return table;
}

std::string profile_csv(const ProfileTable& table) {
  std::string out = "i,pol_cap,pol_r0,unpol_cap,unpol_r0\n";
  char line[160];
  for (std::size_t i = 0; i < table.pol_cap.size(); ++i) {
    std::snprintf(line, sizeof(line), "%zu,%.10g,%.10g,%.10g,%.10g\n", i,
                  table.pol_cap[i], table.pol_r0[i], table.unpol_cap[i],
                  table.unpol_r0[i]);
    out += line;
  }
  return out;
}

PolarizationFractions polarization_fractions(const BitChannelStats& stats,
                                             double delta) {
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("delta must be in (0, 1/2)");
  const std::uint32_t n = stats.block_length;
  std::uint32_t high = 0, low = 0;
  for (double c : stats.capacity) {
    if (c > 1.0 - delta)
      ++high;
    else if (c < delta)
      ++low;
  }
  PolarizationFractions out;
  out.high = static_cast<double>(high) / n;
  out.low = static_cast<double>(low) / n;
  out.mid = static_cast<double>(n - high - low) / n;
  return out;
}

std::string stats_json(const BitChannelStats& stats,
                       const std::string& channel_text) {
  std::string out = "{\n";
  out += "  \"channel\": \"" + channel_text + "\",\n";
  out += "  \"N\": " + std::to_string(stats.block_length) + ",\n";
  out += std::string("  \"method\": \"") +
         (stats.method == ConstructionMethod::ExactBec ? "exact-bec"
                                                       : "monte-carlo") +
         "\",\n";
  out += "  \"samples\": " + std::to_string(stats.samples) + ",\n";
  out += "  \"seed\": " + std::to_string(stats.seed) + ",\n";
  out += "  \"rows\": [\n";
  char line[200];
  for (std::uint32_t i = 0; i < stats.block_length; ++i) {
    std::snprintf(line, sizeof(line),
                  "    {\"i\": %u, \"capacity\": %.12g, \"bhattacharyya\": "
                  "%.12g, \"cutoff\": %.12g}%s\n",
                  i + 1, stats.capacity[i], stats.bhattacharyya[i],
                  stats.cutoff[i], i + 1 < stats.block_length ? "," : "");
    out += line;
  }
  out += "  ]\n}\n";
  return out;
}

}  // namespace polarforge
