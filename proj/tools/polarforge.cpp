// polarforge: polar and PAC channel-coding toolbox.
//
// Subcommands: analyze, construct, profile, reference, simulate.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polarforge/channel.hpp"
#include "polarforge/construction.hpp"
#include "polarforge/dispersion.hpp"
#include "polarforge/pac.hpp"
#include "polarforge/polar.hpp"
#include "polarforge/sim.hpp"
#include "polarforge/version.hpp"

namespace pf = polarforge;
using nlohmann::ordered_json;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("POLARFORGE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(
          std::string("bad POLARFORGE_SEED value '") + env + "'");
    }
  }
  return 1;
}

/// Inclusive "start:step:stop" grid (or a single value).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t colon = text.find(':', begin);
    const std::string tok = text.substr(begin, colon - begin);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = tok.size() + 1;
    }
    if (used != tok.size())
      throw std::invalid_argument("bad grid token '" + tok + "'");
    parts.push_back(v);
    if (colon == std::string::npos) break;
    begin = colon + 1;
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3)
    throw std::invalid_argument("grid must be value or start:step:stop");
  const double start = parts[0], step = parts[1], stop = parts[2];
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be > 0");
  std::vector<double> grid;
  for (double v = start; v <= stop + step * 1e-9; v += step)
    grid.push_back(v);
  if (grid.empty()) throw std::invalid_argument("empty grid");
  return grid;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out.good()) throw std::runtime_error("failed writing '" + path + "'");
}

pf::ScoreRuleKind parse_rule(const std::string& rule) {
  if (rule == "rm") return pf::ScoreRuleKind::ReedMuller;
  if (rule == "polar-c") return pf::ScoreRuleKind::Capacity;
  if (rule == "polar-z") return pf::ScoreRuleKind::Cutoff;
  throw std::invalid_argument("unknown rule '" + rule + "'");
}

struct ConstructOptions {
  std::string channel_text;
  std::uint32_t block_length = 0;
  std::string method = "auto";  // auto | exact-bec | mc
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

pf::BitChannelStats build_stats(const ConstructOptions& opt) {
  const pf::ChannelModel ch = pf::ChannelModel::parse(opt.channel_text);
  std::string method = opt.method;
  if (method == "auto")
    method = ch.kind == pf::ChannelKind::Bec ? "exact-bec" : "mc";
  if (method == "exact-bec") {
    if (ch.kind != pf::ChannelKind::Bec)
      throw std::invalid_argument("exact-bec method needs a BEC channel");
    return pf::bec_bit_channels(ch.param, opt.block_length);
  }
  if (method == "mc")
    return pf::mc_bit_channels(ch, opt.block_length, opt.samples, opt.seed,
                               opt.workers);
  throw std::invalid_argument("unknown method '" + opt.method + "'");
}

std::vector<std::uint32_t> build_index_set(const std::string& rule,
                                           std::uint32_t block_length,
                                           std::uint32_t dimension,
                                           const pf::BitChannelStats* stats) {
  return pf::build_data_index_set(parse_rule(rule), block_length, dimension,
                                  stats);
}

std::string code_json_text(const std::string& type, std::uint32_t n,
                           std::uint32_t k,
                           const std::vector<std::uint32_t>& indices,
                           const std::string& rule) {
  ordered_json j;
  j["type"] = type;
  j["N"] = n;
  j["K"] = k;
  j["rule"] = rule;
  j["A"] = indices;
  return j.dump(2) + "\n";
}

int run_analyze(const std::string& channel_text, int mec_m, bool as_json,
                unsigned quad_nodes) {
  const pf::ChannelModel ch = pf::ChannelModel::parse(channel_text);
  const pf::GaussHermite quad(quad_nodes);
  const pf::InfoTriple info = pf::analyze(ch, quad);
  std::optional<pf::MecSplit> mec;
  if (mec_m > 0) {
    if (ch.kind != pf::ChannelKind::Bec)
      throw std::invalid_argument("--mec applies to BEC channels only");
    mec = pf::mec_split({static_cast<unsigned>(mec_m), ch.param});
  }
  if (as_json) {
    ordered_json j;
    j["channel"] = channel_text;
    j["capacity"] = info.capacity_bits;
    j["cutoff_rate"] = info.cutoff_rate_bits;
    j["bhattacharyya"] = info.bhattacharyya;
    if (mec) {
      j["mec"] = {{"m", mec_m},
                  {"capacity_m", mec->capacity_m},
                  {"cutoff_m", mec->cutoff_m},
                  {"capacity_1", mec->capacity_1},
                  {"cutoff_1", mec->cutoff_1},
                  {"boost_margin", mec->boost_margin}};
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("channel:        %s\n", channel_text.c_str());
    std::printf("capacity:       %.10g bits/use\n", info.capacity_bits);
    std::printf("cutoff rate:    %.10g bits/use\n", info.cutoff_rate_bits);
    std::printf("bhattacharyya:  %.10g\n", info.bhattacharyya);
    if (mec) {
      std::printf("mec m=%d:\n", mec_m);
      std::printf("  C(m)=%.10g  R0(m)=%.10g\n", mec->capacity_m,
                  mec->cutoff_m);
      std::printf("  C(1)=%.10g  R0(1)=%.10g\n", mec->capacity_1,
                  mec->cutoff_1);
      std::printf("  boost margin m*R0(1)-R0(m) = %.10g\n",
                  mec->boost_margin);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polar and PAC channel-coding toolbox"};
  app.set_version_flag("--version", pf::kVersion);
  app.require_subcommand(1);

  // ---- analyze ------------------------------------------------------
  std::string an_channel;
  int an_mec = 0;
  bool an_json = false;
  unsigned an_nodes = pf::kDefaultQuadratureNodes;
  auto* analyze = app.add_subcommand(
      "analyze", "channel capacity, cutoff rate and Bhattacharyya");
  analyze->add_option("channel", an_channel, "e.g. bec:0.5, bsc:0.1, biawgn:snr_db=3")
      ->required();
  analyze->add_option("--mec", an_mec, "also split an M=2^m erasure channel");
  analyze->add_flag("--json", an_json, "JSON output");
  analyze->add_option("--quad-nodes", an_nodes, "Gauss-Hermite node count");

  // ---- construct ----------------------------------------------------
  ConstructOptions co;
  std::uint32_t c_dim = 0;
  std::string c_rule = "polar-z";
  std::string c_out;
  auto* construct = app.add_subcommand(
      "construct", "select a data index set and emit code + stats JSON");
  construct->add_option("channel", co.channel_text,
                        "channel (not needed for --rule rm)");
  construct->add_option("-N,--N,--block-length", co.block_length)->required();
  construct->add_option("-K,--K,--dimension", c_dim)->required();
  construct->add_option("--rule", c_rule, "rm | polar-z | polar-c");
  construct->add_option("--method", co.method, "auto | exact-bec | mc");
  construct->add_option("--samples", co.samples);
  construct->add_option("--seed", co.seed);
  construct->add_option("--workers", co.workers);
  construct->add_option("-o,--out", c_out, "write <out>.code.json and <out>.stats.json");

  // ---- profile ------------------------------------------------------
  ConstructOptions po;
  std::string p_out;
  auto* profile = app.add_subcommand(
      "profile", "cumulative capacity / cutoff-rate profiles as CSV");
  profile->add_option("channel", po.channel_text)->required();
  profile->add_option("-N,--N,--block-length", po.block_length)->required();
  profile->add_option("--method", po.method, "auto | exact-bec | mc");
  profile->add_option("--samples", po.samples);
  profile->add_option("--seed", po.seed);
  profile->add_option("--workers", po.workers);
  profile->add_option("-o,--out", p_out, "CSV file (default stdout)");

  // ---- reference ----------------------------------------------------
  std::uint32_t r_n = 128, r_k = 64;
  std::string r_snr, r_channel, r_out;
  bool r_no_correction = false;
  auto* reference = app.add_subcommand(
      "reference", "dispersion-approximation FER reference curve");
  reference->add_option("-N,--N,--block-length", r_n);
  reference->add_option("-K,--K,--dimension", r_k);
  reference->add_option("--snr", r_snr, "BIAWGN grid start:step:stop in dB");
  reference->add_option("channel", r_channel, "single channel point");
  reference->add_flag("--no-half-log", r_no_correction,
                      "drop the 0.5*log2(N) correction");
  reference->add_option("-o,--out", r_out, "CSV file (default stdout)");

  // ---- simulate -----------------------------------------------------
  std::string s_code = "polar-sc", s_channel, s_snr, s_param;
  std::string s_rule = "auto", s_method = "auto", s_conv = "1011011";
  std::string s_design, s_out = "run", s_timing = "none", s_f = "tanh";
  std::string s_bias = "capacity", s_manifest_in;
  std::uint32_t s_n = 128, s_k = 64, s_list = 32;
  unsigned s_crc = 8;
  std::uint64_t s_samples = 100000, s_min_errors = 100,
                s_max_frames = 10000000;
  double s_delta = 2.0;
  std::uint64_t s_max_visits = 1000000;
  std::uint64_t s_seed = 0;
  bool s_seed_given = false;
  unsigned s_workers = 0;
  bool s_all_zero = false;
  auto* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo frame-error-rate sweep");
  simulate->set_config("--config", "", "flat key=value config file");
  simulate->add_option("--code", s_code, "polar-sc | polar-cascl | pac-fano");
  simulate->add_option("channel", s_channel,
                       "channel, or bare kind with --snr/--param");
  simulate->add_option("--snr", s_snr, "BIAWGN sweep grid, dB");
  simulate->add_option("--param", s_param, "BEC/BSC parameter sweep grid");
  simulate->add_option("-N,--N,--block-length", s_n);
  simulate->add_option("-K,--K,--dimension", s_k, "payload bits");
  simulate->add_option("--crc", s_crc, "CRC width (polar-cascl)");
  simulate->add_option("--list", s_list, "list size (polar-cascl)");
  simulate->add_option("--rule", s_rule, "auto | rm | polar-z | polar-c");
  simulate->add_option("--method", s_method, "auto | exact-bec | mc");
  simulate->add_option("--samples", s_samples, "construction samples");
  simulate->add_option("--design", s_design,
                       "construction channel (default: middle sweep point)");
  simulate->add_option("--conv", s_conv, "impulse response, c0 first");
  simulate->add_option("--delta", s_delta, "Fano threshold step");
  simulate->add_option("--max-visits", s_max_visits, "Fano visit budget");
  simulate->add_option("--bias", s_bias,
                       "Fano metric bias: capacity | rate-profile");
  simulate->add_option("--min-errors", s_min_errors);
  simulate->add_option("--max-frames", s_max_frames);
  auto* seed_opt = simulate->add_option("--seed", s_seed);
  simulate->add_option("--workers", s_workers);
  simulate->add_option("--f", s_f, "tanh | min-sum check-node rule");
  simulate->add_flag("--all-zero-source", s_all_zero,
                     "all-zero source shortcut (SC/SCL only)");
  simulate->add_option("--timing", s_timing,
                       "none | wall (wall breaks byte reproducibility)");
  simulate->add_option("-o,--out", s_out, "output prefix");
  simulate->add_option("--from-manifest", s_manifest_in,
                       "re-run a recorded manifest");

  CLI11_PARSE(app, argc, argv);
  s_seed_given = seed_opt->count() > 0;

  try {
    if (*analyze) return run_analyze(an_channel, an_mec, an_json, an_nodes);

    if (*construct) {
      const bool rm = c_rule == "rm";
      if (!rm && co.channel_text.empty())
        throw std::invalid_argument("rule '" + c_rule + "' needs a channel");
      std::optional<pf::BitChannelStats> stats;
      if (!co.channel_text.empty()) stats = build_stats(co);
      const auto indices = build_index_set(
          c_rule, co.block_length, c_dim, stats ? &*stats : nullptr);
      const std::string code_text =
          code_json_text("polar", co.block_length, c_dim, indices, c_rule);
      const std::string stats_text =
          stats ? pf::stats_json(*stats, co.channel_text) : std::string();
      if (c_out.empty()) {
        std::cout << code_text;
        if (!stats_text.empty()) std::cout << stats_text;
      } else {
        write_file(c_out + ".code.json", code_text);
        std::cout << c_out + ".code.json" << "\n";
        if (!stats_text.empty()) {
          write_file(c_out + ".stats.json", stats_text);
          std::cout << c_out + ".stats.json" << "\n";
        }
      }
      return 0;
    }

    if (*profile) {
      const pf::ChannelModel ch = pf::ChannelModel::parse(po.channel_text);
      const pf::BitChannelStats stats = build_stats(po);
      const std::string csv = pf::profile_csv(pf::profiles(stats, ch));
      if (p_out.empty())
        std::cout << csv;
      else {
        write_file(p_out, csv);
        std::cout << p_out << "\n";
      }
      return 0;
    }

    if (*reference) {
      std::vector<pf::ChannelModel> points;
      if (!r_snr.empty())
        for (double snr : parse_grid(r_snr))
          points.push_back(pf::ChannelModel::biawgn_snr_db(snr));
      else if (!r_channel.empty())
        points.push_back(pf::ChannelModel::parse(r_channel));
      else
        throw std::invalid_argument("reference needs --snr or a channel");
      std::string csv = "snr_db,fer_approx\n";
      char line[80];
      for (const auto& ch : points) {
        const double x = ch.is_biawgn() ? ch.snr_db() : ch.param;
        std::snprintf(line, sizeof(line), "%.6g,%.8g\n", x,
                      pf::dispersion_fer(r_n, r_k, ch, !r_no_correction));
        csv += line;
      }
      if (r_out.empty())
        std::cout << csv;
      else {
        write_file(r_out, csv);
        std::cout << r_out << "\n";
      }
      return 0;
    }

    if (*simulate) {
      pf::SimConfig cfg;
      if (!s_manifest_in.empty()) {
        std::ifstream in(s_manifest_in);
        if (!in)
          throw std::runtime_error("cannot read manifest '" + s_manifest_in +
                                   "'");
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        cfg = pf::config_from_manifest(text);
        if (s_workers) cfg.workers = s_workers;
      } else {
        // Sweep points.
        if (s_channel.empty())
          throw std::invalid_argument("simulate needs a channel");
        if (!s_snr.empty()) {
          if (s_channel != "biawgn")
            throw std::invalid_argument("--snr needs channel kind 'biawgn'");
          for (double snr : parse_grid(s_snr))
            cfg.points.push_back(pf::ChannelModel::biawgn_snr_db(snr));
        } else if (!s_param.empty()) {
          for (double v : parse_grid(s_param)) {
            if (s_channel == "bec")
              cfg.points.push_back(pf::ChannelModel::bec(v));
            else if (s_channel == "bsc")
              cfg.points.push_back(pf::ChannelModel::bsc(v));
            else
              throw std::invalid_argument(
                  "--param needs channel kind 'bec' or 'bsc'");
          }
        } else {
          cfg.points.push_back(pf::ChannelModel::parse(s_channel));
        }

        // Resolved system.
        pf::SimSystem& sys = cfg.system;
        sys.kind = pf::system_kind_from_name(s_code);
        sys.payload_k = s_k;
        const std::uint32_t carrier_k =
            sys.kind == pf::SystemKind::PolarCascl ? s_k + s_crc : s_k;
        if (s_rule == "auto")
          s_rule = sys.kind == pf::SystemKind::PacFano ? "rm" : "polar-z";
        if (s_bias != "capacity" && s_bias != "rate-profile")
          throw std::invalid_argument("unknown bias rule '" + s_bias + "'");
        const bool want_capacity_bias =
            sys.kind == pf::SystemKind::PacFano && s_bias == "capacity";

        std::optional<pf::BitChannelStats> stats;
        if (s_rule != "rm" || want_capacity_bias) {
          ConstructOptions design;
          design.channel_text =
              !s_design.empty()
                  ? s_design
                  : cfg.points[(cfg.points.size() - 1) / 2].to_string();
          design.block_length = s_n;
          design.method = s_method;
          design.samples = s_samples;
          design.seed = s_seed_given ? s_seed : default_seed();
          design.workers = s_workers;
          stats = build_stats(design);
        }
        sys.code.block_length = s_n;
        sys.code.dimension = carrier_k;
        sys.code.data_indices = build_index_set(
            s_rule, s_n, carrier_k, stats ? &*stats : nullptr);
        if (sys.kind == pf::SystemKind::PolarCascl) {
          sys.crc = pf::CrcSpec{s_crc, 0x07};
          sys.list_size = s_list;
        }
        if (sys.kind == pf::SystemKind::PacFano) {
          sys.conv = pf::ConvSpec::from_string(s_conv);
          sys.fano.delta = s_delta;
          sys.fano.max_visits = s_max_visits;
          if (want_capacity_bias)
            sys.fano.bias = pf::capacity_metric_bias(*stats);
        }
        if (s_f == "min-sum")
          sys.rule = pf::CheckNodeRule::MinSum;
        else if (s_f != "tanh")
          throw std::invalid_argument("unknown check-node rule '" + s_f +
                                      "'");
        cfg.min_errors = s_min_errors;
        cfg.max_frames = s_max_frames;
        cfg.seed = s_seed_given ? s_seed : default_seed();
        cfg.workers = s_workers;
        cfg.all_zero_source = s_all_zero;
        if (s_timing == "wall")
          cfg.record_timing = true;
        else if (s_timing != "none")
          throw std::invalid_argument("unknown timing mode '" + s_timing +
                                      "'");
      }

      const auto records = pf::run_fer(cfg, [](const pf::SimRecord& r) {
        std::fprintf(stderr,
                     "point %s: frames=%llu errors=%llu fer=%.3g%s\n",
                     r.point.to_string().c_str(),
                     static_cast<unsigned long long>(r.frames),
                     static_cast<unsigned long long>(r.errors), r.fer,
                     r.exhausted ? " (with exhaustions)" : "");
      });

      write_file(s_out + ".csv", pf::records_csv(records));
      write_file(s_out + ".json", pf::records_json(records));
      write_file(s_out + ".manifest.json", pf::manifest_json(cfg));
      std::cout << s_out + ".csv\n"
                << s_out + ".json\n"
                << s_out + ".manifest.json\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
