#include "polarforge/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "polarforge/list_decoder.hpp"
#include "polarforge/version.hpp"

namespace polarforge {

namespace {

using nlohmann::ordered_json;

struct FrameOutcome {
  bool error = false;
  bool exhausted = false;
  std::uint32_t visits = 0;
};

// Per-worker decode state, built once per sweep point.
struct WorkerCtx {
  std::optional<ScDecoder> sc;
  std::optional<SclDecoder> scl;
  std::optional<FanoDecoder> fano;
};

WorkerCtx make_ctx(const SimSystem& sys) {
  WorkerCtx ctx;
  switch (sys.kind) {
    case SystemKind::PolarSc:
      ctx.sc.emplace(sys.code.block_length, sys.rule);
      break;
    case SystemKind::PolarCascl:
      ctx.scl.emplace(sys.code.block_length, sys.list_size, sys.crc,
                      sys.rule);
      break;
    case SystemKind::PacFano:
      ctx.fano.emplace(PacSpec{sys.code, sys.conv, sys.fano}, sys.rule);
      break;
  }
  return ctx;
}

FrameOutcome run_frame(const SimConfig& cfg, const ChannelModel& ch,
                       std::uint64_t point_index, std::uint64_t frame_index,
                       WorkerCtx& ctx) {
  const SimSystem& sys = cfg.system;
  Rng rng = Rng::substream(cfg.seed, point_index, frame_index);

  BitWord data(sys.payload_k, 0);
  if (!cfg.all_zero_source)
    for (auto& b : data) b = rng.next_bit();

  BitWord coded;
  switch (sys.kind) {
    case SystemKind::PolarSc:
      coded = polar_encode(data, sys.code);
      break;
    case SystemKind::PolarCascl:
      coded = polar_encode(crc_attach(data, *sys.crc), sys.code);
      break;
    case SystemKind::PacFano:
      coded = pac_encode(data, PacSpec{sys.code, sys.conv, sys.fano});
      break;
  }

  LlrWord llrs(coded.size());
  for (std::size_t i = 0; i < coded.size(); ++i)
    llrs[i] = llr(ch, sample(ch, coded[i], rng));

  FrameOutcome out;
  switch (sys.kind) {
    case SystemKind::PolarSc: {
      const BitWord decoded = ctx.sc->decode(llrs, sys.code);
      out.error = decoded != data;
      break;
    }
    case SystemKind::PolarCascl: {
      const BitWord decoded = ctx.scl->decode(llrs, sys.code);
      out.error = !std::equal(data.begin(), data.end(), decoded.begin());
      break;
    }
    case SystemKind::PacFano: {
      const FanoResult res =
          ctx.fano->decode(llrs);
      out.exhausted = res.exhausted;
      out.error = res.exhausted || res.data != data;
      out.visits = static_cast<std::uint32_t>(
          std::min<std::uint64_t>(res.visits, 0xffffffffull));
      break;
    }
  }
  return out;
}

std::uint64_t percentile_nearest_rank(const std::vector<std::uint32_t>& sorted,
                                      double q) {
  if (sorted.empty()) return 0;
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::max<std::size_t>(rank, 1) - 1];
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

}  // namespace

const char* system_kind_name(SystemKind kind) {
  switch (kind) {
    case SystemKind::PolarSc:
      return "polar-sc";
    case SystemKind::PolarCascl:
      return "polar-cascl";
    case SystemKind::PacFano:
      return "pac-fano";
  }
  return "?";
}

SystemKind system_kind_from_name(const std::string& name) {
  if (name == "polar-sc") return SystemKind::PolarSc;
  if (name == "polar-cascl") return SystemKind::PolarCascl;
  if (name == "pac-fano") return SystemKind::PacFano;
  throw std::invalid_argument("unknown system '" + name + "'");
}

void SimSystem::validate() const {
  code.validate();
  switch (kind) {
    case SystemKind::PolarSc:
      if (payload_k != code.dimension)
        throw std::invalid_argument("polar-sc payload must equal K");
      break;
    case SystemKind::PolarCascl:
      if (!crc) throw std::invalid_argument("polar-cascl needs a CRC");
      if (payload_k + crc->width != code.dimension)
        throw std::invalid_argument(
            "polar-cascl carrier K must be payload + CRC width");
      if (list_size < 1)
        throw std::invalid_argument("list size must be >= 1");
      break;
    case SystemKind::PacFano:
      if (payload_k != code.dimension)
        throw std::invalid_argument("pac-fano payload must equal K");
      conv.validate();
      break;
  }
}

double wilson_halfwidth(std::uint64_t errors, std::uint64_t frames) {
  if (frames == 0) return 0.0;
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(frames);
  const double p = static_cast<double>(errors) / n;
  const double z2n = z * z / n;
  return (z / (1.0 + z2n)) *
         std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
}

std::vector<SimRecord> run_fer(
    const SimConfig& cfg,
    const std::function<void(const SimRecord&)>& on_point) {
  cfg.system.validate();
  if (cfg.min_errors < 1 || cfg.max_frames < 1)
    throw std::invalid_argument("stopping rule must allow at least a frame");
  if (cfg.all_zero_source && cfg.system.kind == SystemKind::PacFano)
    throw std::invalid_argument(
        "all-zero source shortcut is limited to SC/SCL decoding");

  unsigned workers =
      cfg.workers ? cfg.workers : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;

  std::vector<SimRecord> records;
  records.reserve(cfg.points.size());

  for (std::size_t pi = 0; pi < cfg.points.size(); ++pi) {
    const ChannelModel& ch = cfg.points[pi];
    const auto t0 = std::chrono::steady_clock::now();

    std::uint64_t frames = 0, errors = 0, exhausted = 0;
    std::vector<std::uint32_t> visits;
    bool stop = false;

    // Fixed block schedule so that results do not depend on the worker
    // count: compute a block in parallel, then consume it in frame
    // order until the stopping rule fires.
    std::uint64_t base = 0;
    std::uint64_t block = 256;
    std::vector<FrameOutcome> outcomes;
    while (!stop && base < cfg.max_frames) {
      const std::uint64_t count = std::min(block, cfg.max_frames - base);
      outcomes.assign(count, FrameOutcome{});
      std::atomic<std::uint64_t> cursor{0};
      auto body = [&]() {
        WorkerCtx ctx = make_ctx(cfg.system);
        for (;;) {
          const std::uint64_t k = cursor.fetch_add(1);
          if (k >= count) return;
          outcomes[k] = run_frame(cfg, ch, pi, base + k, ctx);
        }
      };
      if (workers <= 1 || count < 2) {
        body();
      } else {
        std::vector<std::thread> pool;
        const unsigned spawn = static_cast<unsigned>(
            std::min<std::uint64_t>(workers, count));
        pool.reserve(spawn);
        for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(body);
        for (auto& t : pool) t.join();
      }
      for (std::uint64_t k = 0; k < count; ++k) {
        const FrameOutcome& o = outcomes[k];
        ++frames;
        if (o.error) ++errors;
        if (o.exhausted) ++exhausted;
        if (cfg.system.kind == SystemKind::PacFano)
          visits.push_back(o.visits);
        if (errors >= cfg.min_errors || frames >= cfg.max_frames) {
          stop = true;
          break;
        }
      }
      base += count;
      block = std::min<std::uint64_t>(block * 2, 16384);
    }

    SimRecord rec;
    rec.point = ch;
    rec.frames = frames;
    rec.errors = errors;
    rec.fer = frames ? static_cast<double>(errors) / frames : 0.0;
    rec.fer_ci95 = wilson_halfwidth(errors, frames);
    rec.exhausted = exhausted;
    rec.seed = cfg.seed;
    if (!visits.empty()) {
      double mean = 0.0;
      std::uint64_t vmax = 0;
      for (auto v : visits) {
        mean += v;
        vmax = std::max<std::uint64_t>(vmax, v);
      }
      rec.visits_mean = mean / static_cast<double>(visits.size());
      rec.visits_max = vmax;
      std::sort(visits.begin(), visits.end());
      rec.visits_p50 = percentile_nearest_rank(visits, 0.50);
      rec.visits_p99 = percentile_nearest_rank(visits, 0.99);
    }
    if (cfg.record_timing) {
      rec.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    }
    if (on_point) on_point(rec);
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

double point_column(const ChannelModel& ch) {
  return ch.is_biawgn() ? ch.snr_db() : ch.param;
}

}  // namespace

std::string records_csv(const std::vector<SimRecord>& records) {
  std::string out =
      "snr_db,frames,errors,fer,fer_ci95,exhausted,visits_mean,visits_p50,"
      "visits_p99,visits_max,seconds,seed\n";
  char line[320];
  for (const SimRecord& r : records) {
    std::snprintf(line, sizeof(line),
                  "%.6g,%llu,%llu,%.8g,%.4g,%llu,%.6g,%llu,%llu,%llu,%.3f,"
                  "%llu\n",
                  point_column(r.point),
                  static_cast<unsigned long long>(r.frames),
                  static_cast<unsigned long long>(r.errors), r.fer, r.fer_ci95,
                  static_cast<unsigned long long>(r.exhausted), r.visits_mean,
                  static_cast<unsigned long long>(r.visits_p50),
                  static_cast<unsigned long long>(r.visits_p99),
                  static_cast<unsigned long long>(r.visits_max), r.seconds,
                  static_cast<unsigned long long>(r.seed));
    out += line;
  }
  return out;
}

std::string records_json(const std::vector<SimRecord>& records) {
  ordered_json arr = ordered_json::array();
  for (const SimRecord& r : records) {
    ordered_json row;
    row["channel"] = r.point.to_string();
    row["snr_db"] = point_column(r.point);
    row["frames"] = r.frames;
    row["errors"] = r.errors;
    row["fer"] = r.fer;
    row["fer_ci95"] = r.fer_ci95;
    row["exhausted"] = r.exhausted;
    row["visits_mean"] = r.visits_mean;
    row["visits_p50"] = r.visits_p50;
    row["visits_p99"] = r.visits_p99;
    row["visits_max"] = r.visits_max;
    row["seconds"] = r.seconds;
    row["seed"] = r.seed;
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

std::string manifest_json(const SimConfig& cfg) {
  ordered_json m;
  m["tool"] = "polarforge";
  m["version"] = kVersion;
  m["format"] = kFormatVersion;
  m["command"] = "simulate";
  ordered_json points = ordered_json::array();
  for (const ChannelModel& ch : cfg.points) points.push_back(ch.to_string());
  m["points"] = std::move(points);

  const SimSystem& sys = cfg.system;
  ordered_json code;
  code["type"] = system_kind_name(sys.kind);
  code["N"] = sys.code.block_length;
  code["K"] = sys.code.dimension;
  code["A"] = sys.code.data_indices;
  code["payload_k"] = sys.payload_k;
  if (sys.crc) {
    code["crc"] = sys.crc->width;
    code["crc_poly"] = sys.crc->poly;
  }
  if (sys.kind == SystemKind::PolarCascl) code["list"] = sys.list_size;
  if (sys.kind == SystemKind::PacFano) {
    code["conv"] = sys.conv.to_string();
    code["delta"] = sys.fano.delta;
    code["max_visits"] = sys.fano.max_visits;
    if (!sys.fano.bias.empty()) code["bias"] = sys.fano.bias;
  }
  code["check_node"] =
      sys.rule == CheckNodeRule::Exact ? "tanh" : "min-sum";
  m["code"] = std::move(code);

  m["stopping"] = {{"min_errors", cfg.min_errors},
                   {"max_frames", cfg.max_frames}};
  m["seed"] = cfg.seed;
  m["all_zero_source"] = cfg.all_zero_source;
  m["timing"] = cfg.record_timing ? "wall" : "none";
  return m.dump(2) + "\n";
}

SimConfig config_from_manifest(const std::string& json_text) {
  const auto m = nlohmann::json::parse(json_text);
  if (m.value("command", "") != "simulate")
    throw std::invalid_argument("manifest is not a simulate manifest");

  SimConfig cfg;
  for (const auto& p : m.at("points"))
    cfg.points.push_back(ChannelModel::parse(p.get<std::string>()));

  const auto& code = m.at("code");
  SimSystem& sys = cfg.system;
  sys.kind = system_kind_from_name(code.at("type").get<std::string>());
  sys.code.block_length = code.at("N").get<std::uint32_t>();
  sys.code.dimension = code.at("K").get<std::uint32_t>();
  sys.code.data_indices =
      code.at("A").get<std::vector<std::uint32_t>>();
  sys.payload_k = code.at("payload_k").get<std::uint32_t>();
  if (code.contains("crc"))
    sys.crc = CrcSpec{code.at("crc").get<unsigned>(),
                      code.value("crc_poly", std::uint64_t{0x07})};
  if (code.contains("list"))
    sys.list_size = code.at("list").get<std::uint32_t>();
  if (code.contains("conv"))
    sys.conv = ConvSpec::from_string(code.at("conv").get<std::string>());
  if (code.contains("delta")) sys.fano.delta = code.at("delta").get<double>();
  if (code.contains("max_visits"))
    sys.fano.max_visits = code.at("max_visits").get<std::uint64_t>();
  if (code.contains("bias"))
    sys.fano.bias = code.at("bias").get<std::vector<double>>();
  sys.rule = code.value("check_node", "tanh") == std::string("min-sum")
                 ? CheckNodeRule::MinSum
                 : CheckNodeRule::Exact;

  const auto& stop = m.at("stopping");
  cfg.min_errors = stop.at("min_errors").get<std::uint64_t>();
  cfg.max_frames = stop.at("max_frames").get<std::uint64_t>();
  cfg.seed = m.at("seed").get<std::uint64_t>();
  cfg.all_zero_source = m.value("all_zero_source", false);
  cfg.record_timing = m.value("timing", "none") == std::string("wall");
  cfg.system.validate();
  return cfg;
}

}  // namespace polarforge
