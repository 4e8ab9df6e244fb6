#include <stdexcept>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "polarforge/channel.hpp"

using namespace polarforge;

TEST_SUITE_BEGIN("channel");

TEST_CASE("gauss-hermite rule integrates exactly") {
  const GaussHermite gh(129);
  double w = 0.0, x2 = 0.0;
  for (std::size_t i = 0; i < gh.nodes().size(); ++i) {
    w += gh.weights()[i];
    x2 += gh.weights()[i] * gh.nodes()[i] * gh.nodes()[i];
  }
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  CHECK(w == doctest::Approx(sqrt_pi).epsilon(1e-13));
  CHECK(x2 == doctest::Approx(sqrt_pi / 2).epsilon(1e-13));
  // E[Y^2] for Y ~ N(mu, sigma^2).
  const double m2 =
      gh.expect([](double y) { return y * y; }, 1.5, 2.0);
  CHECK(m2 == doctest::Approx(1.5 * 1.5 + 4.0).epsilon(1e-12));
}

TEST_CASE("capacity") {
  CHECK(capacity(ChannelModel::bsc(0.5)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(capacity(ChannelModel::bec(0.5)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(capacity(ChannelModel::biawgn_snr_db(3.0)) ==
        doctest::Approx(0.72).epsilon(0.005 / 0.72));
  CHECK(capacity(ChannelModel::bsc(0.0)) == doctest::Approx(1.0));
}

TEST_CASE("cutoff rate") {
  CHECK(cutoff_rate(ChannelModel::bsc(0.0)) == doctest::Approx(1.0));
  CHECK(cutoff_rate(ChannelModel::bec(0.5)) ==
        doctest::Approx(1.0 - std::log2(1.5)).epsilon(1e-12));
  // 69.8/128 with the band the construction examples use.
  CHECK(std::abs(cutoff_rate(ChannelModel::biawgn_snr_db(3.0)) - 0.5453) <
        0.003);
  // Closed form Z = exp(-1/(2 sigma^2)) as an independent route.
  const double sigma2 = std::pow(10.0, -0.3);
  CHECK(bhattacharyya(ChannelModel::biawgn_sigma2(sigma2)) ==
        doctest::Approx(std::exp(-1.0 / (2.0 * sigma2))).epsilon(1e-12));
}

TEST_CASE("bhattacharyya") {
  CHECK(bhattacharyya(ChannelModel::bsc(0.1)) ==
        doctest::Approx(0.6).epsilon(1e-12));
  CHECK(bhattacharyya(ChannelModel::bec(0.3)) == doctest::Approx(0.3));
  CHECK(bhattacharyya(ChannelModel::bsc(0.0)) == doctest::Approx(0.0));
}

TEST_CASE("identity and ordering across a parameter grid") {
  std::vector<ChannelModel> grid;
  for (double e = 0.0; e <= 1.0; e += 0.1) grid.push_back(ChannelModel::bec(e));
  for (double p = 0.0; p <= 0.5; p += 0.05)
    grid.push_back(ChannelModel::bsc(p));
  for (double snr = -2.0; snr <= 6.0; snr += 0.5)
    grid.push_back(ChannelModel::biawgn_snr_db(snr));
  for (const auto& ch : grid) {
    const InfoTriple t = analyze(ch);
    CHECK(std::abs(t.cutoff_rate_bits -
                   (1.0 - std::log2(1.0 + t.bhattacharyya))) < 1e-12);
    CHECK(t.cutoff_rate_bits >= -1e-12);
    CHECK(t.cutoff_rate_bits <= t.capacity_bits + 1e-12);
    CHECK(t.capacity_bits <= 1.0 + 1e-12);
    CHECK(t.bhattacharyya >= -1e-12);
    CHECK(t.bhattacharyya <= 1.0 + 1e-12);
  }
}

TEST_CASE("BSC cutoff/capacity ratio climbs toward 1 as p -> 0") {
  double prev = 0.0;
  for (double p : {1e-2, 1e-3, 1e-4}) {
    const auto ch = ChannelModel::bsc(p);
    const double ratio = cutoff_rate(ch) / capacity(ch);
    CHECK(ratio > prev);
    CHECK(ratio < 1.0);
    prev = ratio;
  }
  CHECK(prev > 0.97);
}

TEST_CASE("llr") {
  CHECK(llr(ChannelModel::bec(0.5), 0.0) == 0.0);
  CHECK(llr(ChannelModel::bec(0.5), 1.0) == kLlrMax);
  CHECK(llr(ChannelModel::bec(0.5), -1.0) == -kLlrMax);
  CHECK_THROWS_AS(llr(ChannelModel::bec(0.5), 0.25), std::invalid_argument);

  CHECK(llr(ChannelModel::bsc(0.1), 1.0) ==
        doctest::Approx(std::log(9.0)).epsilon(1e-12));
  CHECK(llr(ChannelModel::bsc(0.1), -1.0) ==
        doctest::Approx(-std::log(9.0)).epsilon(1e-12));
  CHECK(llr(ChannelModel::bsc(0.5), 1.0) == 0.0);
  CHECK(llr(ChannelModel::bsc(0.0), 1.0) == kLlrMax);
  CHECK_THROWS_AS(llr(ChannelModel::bsc(0.1), 0.0), std::invalid_argument);

  const auto awgn = ChannelModel::biawgn_sigma2(0.5);
  CHECK(llr(awgn, 0.8) == doctest::Approx(2.0 * 0.8 / 0.5).epsilon(1e-15));
  CHECK(llr(awgn, -0.8) == -llr(awgn, 0.8));  // exact negation
  CHECK(llr(awgn, 1e9) == kLlrMax);           // clipped
}

TEST_CASE("llr sign symmetry under transmitted zero") {
  const auto awgn = ChannelModel::biawgn_snr_db(2.0);
  Rng rng(123);
  double mean = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) mean += llr(awgn, sample(awgn, 0, rng));
  CHECK(mean / n > 0.5);
}

TEST_CASE("sample") {
  Rng rng(9);
  CHECK(sample(ChannelModel::bec(0.0), 1, rng) == -1.0);
  CHECK(sample(ChannelModel::bsc(0.0), 0, rng) == 1.0);
  CHECK(sample(ChannelModel::bec(1.0), 0, rng) == 0.0);
  CHECK(sample(ChannelModel::bec(1.0), 1, rng) == 0.0);

  // Deterministic given the stream state.
  Rng a = Rng::substream(7, 1, 2);
  Rng b = Rng::substream(7, 1, 2);
  const auto awgn = ChannelModel::biawgn_snr_db(1.0);
  for (int i = 0; i < 100; ++i)
    CHECK(sample(awgn, i & 1, a) == sample(awgn, i & 1, b));

  // Empirical erasure rate.
  int erasures = 0;
  const auto bec = ChannelModel::bec(0.3);
  for (int i = 0; i < 50000; ++i)
    if (sample(bec, 0, rng) == 0.0) ++erasures;
  CHECK(erasures / 50000.0 == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("mec split") {
  const MecSplit clean = mec_split({2, 0.0});
  CHECK(clean.capacity_m == 2.0);
  CHECK(clean.cutoff_m == 2.0);
  CHECK(clean.capacity_1 == 1.0);
  CHECK(clean.cutoff_1 == 1.0);

  const MecSplit s = mec_split({2, 0.1});
  CHECK(s.capacity_m == doctest::Approx(1.8));
  CHECK(s.cutoff_m == doctest::Approx(2.0 - std::log2(1.3)).epsilon(1e-12));
  CHECK(s.capacity_1 == doctest::Approx(0.9));
  CHECK(s.cutoff_1 == doctest::Approx(1.0 - std::log2(1.1)).epsilon(1e-12));

  const MecSplit dead = mec_split({3, 1.0});
  CHECK(dead.capacity_m == 0.0);
  CHECK(dead.cutoff_m == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dead.capacity_1 == 0.0);
  CHECK(dead.cutoff_1 == doctest::Approx(0.0).epsilon(1e-12));

  // Capacity is conserved exactly; the cutoff rate is boosted strictly
  // inside (0,1) and exactly conserved at the endpoints.
  for (unsigned m : {2u, 3u, 4u, 6u}) {
    for (double eps = 0.0; eps <= 1.0; eps += 0.05) {
      const MecSplit x = mec_split({m, eps});
      CHECK(x.capacity_m == m * x.capacity_1);
      if (eps > 0.0 && eps < 1.0)
        CHECK(x.boost_margin > 0.0);
      else
        CHECK(std::abs(x.boost_margin) < 1e-12);
    }
  }
  CHECK_THROWS_AS(mec_split({1, 0.5}), std::invalid_argument);
}

TEST_CASE("channel parsing") {
  CHECK(ChannelModel::parse("bec:0.5").kind == ChannelKind::Bec);
  CHECK(ChannelModel::parse("bsc:0.1").param == doctest::Approx(0.1));
  CHECK(ChannelModel::parse("biawgn:snr_db=3.0").param ==
        doctest::Approx(std::pow(10.0, -0.3)));
  CHECK(ChannelModel::parse("biawgn:sigma2=0.501187").param ==
        doctest::Approx(0.501187));
  CHECK_THROWS_WITH_AS(ChannelModel::parse("foo:0.5"),
                       doctest::Contains("foo"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ChannelModel::parse("bec:zzz"),
                       doctest::Contains("zzz"), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel::parse("bec:1.5"), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel::parse("biawgn:0.5"), std::invalid_argument);

  // Round trip through the canonical form.
  for (const char* text : {"bec:0.375", "bsc:0.0625", "biawgn:snr_db=2.5"}) {
    const ChannelModel ch = ChannelModel::parse(text);
    const ChannelModel again = ChannelModel::parse(ch.to_string());
    CHECK(again.kind == ch.kind);
    CHECK(again.param == ch.param);
  }
}

TEST_SUITE_END();
