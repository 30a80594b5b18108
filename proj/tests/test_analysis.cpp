#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tsr/analysis.hpp"
#include "tsr/sensor_sim.hpp"

using namespace tsr;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("trace distance: exact zero on identical input, hand value otherwise") {
  const std::vector<double> f{0.4, -1.2, 2.0, 0.9};
  CHECK(analysis::l2_error(f, 4.0, f, 4.0) == 0.0);
  const std::vector<double> a{1.0, 2.0};
  const std::vector<double> zero{0.0, 0.0};
  CHECK(analysis::l2_error(a, 2.0, zero, 2.0) ==
        doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
}

TEST_CASE("trace distance up-samples the coarse side by zero-order hold") {
  const std::vector<double> coarse{1.0, 2.0};
  const std::vector<double> fine{1.0, 1.0, 2.0, 2.0};
  CHECK(analysis::l2_error(coarse, 1.0, fine, 2.0) == 0.0);
  const std::vector<double> fine_off{1.0, 1.5, 2.0, 2.0};
  CHECK(analysis::l2_error(coarse, 1.0, fine_off, 2.0) ==
        doctest::Approx(std::sqrt(0.25 / 2.0)).epsilon(1e-12));
  CHECK_THROWS_WITH(analysis::l2_error(coarse, 2.0, fine, 3.0),
                    "sample rates are not integer multiples");
  CHECK_THROWS_WITH(analysis::l2_error({}, 1.0, fine, 2.0), "empty trace");
  CHECK_THROWS_WITH(analysis::l2_error(coarse, 0.0, fine, 2.0),
                    "non-positive sample rate");
  CHECK_THROWS_WITH(analysis::l2_error(coarse, 2.0, fine, 2.0),
                    "length mismatch after resampling");
}

TEST_CASE("angular distance ignores positive scale and sees orthogonality") {
  std::vector<double> s(64), c(64), s3(64);
  for (int k = 0; k < 64; ++k) {
    const double t = static_cast<double>(k) / 64.0;
    s[static_cast<std::size_t>(k)] = std::sin(2.0 * kPi * t);
    c[static_cast<std::size_t>(k)] = std::cos(2.0 * kPi * t);
    s3[static_cast<std::size_t>(k)] = 3.0 * s[static_cast<std::size_t>(k)];
  }
  CHECK(analysis::cosine_error(s, 64.0, s3, 64.0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(analysis::cosine_error(s, 64.0, c, 64.0) ==
        doctest::Approx(kPi / 2.0).epsilon(1e-9));
  auto neg = s;
  for (double& v : neg) v = -v;
  CHECK(analysis::cosine_error(s, 64.0, neg, 64.0) == doctest::Approx(kPi).epsilon(1e-9));
  const std::vector<double> zeros(64, 0.0);
  CHECK_THROWS_WITH(analysis::cosine_error(s, 64.0, zeros, 64.0), "zero-norm input");
}

TEST_CASE("pattern enumeration agrees with a brute-force count") {
  analysis::PatternConstraints none;
  none.full_rank = false;
  none.no_zero_row = false;
  const auto all = analysis::enumerate_patterns(3, 3, none);
  CHECK(all.size() == 512);  // every 9-bit mask
  // Ascending mask order: first the all-zero code, then sub-step 0 of the
  // first channel.
  CHECK(all[0].code.isZero());
  CHECK(all[1].code(0, 0) == 1.0);
  CHECK(all[1].code.sum() == 1.0);

  analysis::PatternConstraints fr;
  fr.full_rank = true;
  std::size_t want_full_rank = 0;
  for (const auto& p : all) {
    if (oracle::full_column_rank_3(p.code)) ++want_full_rank;
  }
  const auto ranked = analysis::enumerate_patterns(3, 3, fr);
  CHECK(ranked.size() == want_full_rank);
  for (const auto& p : ranked) CHECK(oracle::full_column_rank_3(p.code));

  analysis::PatternConstraints strict = fr;
  strict.no_zero_row = true;
  const auto lit = analysis::enumerate_patterns(3, 3, strict);
  for (const auto& p : lit) CHECK_FALSE(p.has_zero_row());
  std::size_t want_lit = 0;
  for (const auto& p : ranked) {
    if (!p.has_zero_row()) ++want_lit;
  }
  CHECK(lit.size() == want_lit);

  CHECK_THROWS_WITH(analysis::enumerate_patterns(2, 3, none),
                    "enumeration requires n >= m");
  CHECK_THROWS_WITH(
      analysis::enumerate_patterns(13, 3, none),
      "pattern space too large for exhaustive enumeration; use sampled mode");
}

TEST_CASE("ensemble evaluation: shape, labels and determinism") {
  analysis::EnsembleSpec spec;
  spec.n_trials = 24;
  spec.freq_lo_hz = 5.0;
  spec.freq_hi_hz = 15.0;
  spec.duration_s = 1.0;
  spec.seed = 5;
  sensor::CameraConfig cam;
  const auto pattern = sensor::chosen_pattern(4);
  const auto profile = analysis::evaluate_pattern(pattern, spec, cam,
                                                  analysis::PatternMode::Fixed, 5.0);
  CHECK(profile.pattern_id == "1001/1010/0101");
  CHECK(profile.n_factor == 4);
  REQUIRE(profile.freq_bins.size() == 2);
  CHECK(profile.freq_bins[0].first == doctest::Approx(5.0));
  CHECK(profile.freq_bins[0].second == doctest::Approx(10.0));
  CHECK(profile.freq_bins[1].second == doctest::Approx(15.0));
  int total = 0;
  for (int c : profile.trial_counts) total += c;
  CHECK(total == 24);
  for (std::size_t b = 0; b < 2; ++b) {
    CHECK(std::isfinite(profile.mean_l2[b]));
    CHECK(profile.mean_l2[b] >= 0.0);
    CHECK(profile.baseline_l2[b] > 0.0);
  }
  const auto again = analysis::evaluate_pattern(pattern, spec, cam,
                                                analysis::PatternMode::Fixed, 5.0);
  CHECK(again.mean_l2 == profile.mean_l2);
  CHECK(again.mean_cosine == profile.mean_cosine);

  CHECK_THROWS_WITH(
      analysis::evaluate_pattern(pattern, analysis::EnsembleSpec{0}, cam),
      "ensemble needs n_trials >= 1");
  analysis::EnsembleSpec inverted = spec;
  inverted.freq_lo_hz = 20.0;
  CHECK_THROWS_WITH(analysis::evaluate_pattern(pattern, inverted, cam),
                    "ensemble frequency range inverted");
  CHECK_THROWS_WITH(analysis::evaluate_pattern(pattern, spec, cam,
                                               analysis::PatternMode::Fixed, 0.0),
                    "bin width must be positive");
}

TEST_CASE("one-per-sub-step code recovers sub-step means to machine precision") {
  // Each channel measures one sub-step directly, so the constrained solve is
  // exact at any tone frequency; this is what makes the three-sub-step
  // identity code the reference inside its own band.
  analysis::EnsembleSpec spec;
  spec.n_trials = 10;
  spec.freq_lo_hz = 5.0;
  spec.freq_hi_hz = 15.0;
  spec.duration_s = 1.0;
  spec.seed = 77;
  sensor::CameraConfig cam;
  const auto profile = analysis::evaluate_pattern(sensor::identity_pattern(3), spec,
                                                  cam, analysis::PatternMode::Fixed,
                                                  10.0);
  REQUIRE(profile.freq_bins.size() == 1);
  CHECK(profile.mean_l2[0] < 1e-9);
  // acos amplifies a machine-epsilon dot-product defect to ~sqrt(eps).
  CHECK(profile.mean_cosine[0] < 1e-6);
  // Against the fine grid the sub-step sampling itself leaves residual.
  CHECK(profile.mean_l2_fine[0] > 1e-3);
}

TEST_CASE("random per-frame codes run and are labeled as random") {
  analysis::EnsembleSpec spec;
  spec.n_trials = 4;
  spec.freq_lo_hz = 5.0;
  spec.freq_hi_hz = 10.0;
  spec.duration_s = 1.0;
  spec.seed = 9;
  sensor::CameraConfig cam;
  // Three-channel carrier: random mode draws n x 3 codes, and with only
  // three channels per frame the per-frame solves are underdetermined, so
  // the error must be far from zero (unlike a fixed one-per-sub-step code).
  const auto carrier = sensor::FlickerPattern::from_channels(
      {{1, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}});
  const auto profile = analysis::evaluate_pattern(
      carrier, spec, cam, analysis::PatternMode::RandomPerFrame, 5.0);
  CHECK(profile.pattern_id == "random");
  CHECK(profile.n_factor == 4);
  CHECK(profile.mean_l2[0] > 0.05);
}

TEST_CASE("band mean weights bins by their trial counts") {
  analysis::ErrorProfile p;
  p.freq_bins = {{5.0, 6.0}, {6.0, 7.0}, {7.0, 8.0}};
  p.mean_l2 = {1.0, 3.0, 99.0};
  p.mean_l2_fine = {2.0, 6.0, 99.0};
  p.trial_counts = {1, 3, 0};
  p.n_factor = 3;
  const double got = analysis::band_mean_error(p, 5.0, 7.0, analysis::ErrorRef::SubstepMean);
  CHECK(got == doctest::Approx((1.0 + 3.0 * 3.0) / 4.0).epsilon(1e-12));
  const double fine = analysis::band_mean_error(p, 5.0, 7.0, analysis::ErrorRef::FineGrid);
  CHECK(fine == doctest::Approx((2.0 + 6.0 * 3.0) / 4.0).epsilon(1e-12));
  // Bins with no trials are skipped; an empty band reports NaN.
  CHECK(std::isnan(analysis::band_mean_error(p, 7.0, 8.0, analysis::ErrorRef::SubstepMean)));
}

TEST_CASE("band winners prefer the smallest error, then lower n, then id") {
  auto make = [](int n, const std::string& id, double err) {
    analysis::ErrorProfile p;
    p.freq_bins = {{0.5, 5.0}};
    p.mean_l2 = {err};
    p.mean_l2_fine = {err};
    p.trial_counts = {10};
    p.n_factor = n;
    p.pattern_id = id;
    return p;
  };
  const auto t1 = analysis::band_winner_table(
      {make(4, "b", 2.0), make(3, "a", 1.0)}, 10.0);
  REQUIRE(t1.size() >= 1);
  CHECK(t1[0].n_factor == 3);
  CHECK(t1[0].mean_error == doctest::Approx(1.0));
  const auto t2 = analysis::band_winner_table(
      {make(4, "b", 1.0), make(3, "a", 1.0)}, 10.0);
  CHECK(t2[0].n_factor == 3);  // tie: lower n
  const auto t3 = analysis::band_winner_table(
      {make(4, "b", 1.0), make(4, "a", 1.0)}, 10.0);
  CHECK(t3[0].pattern_id == "a");  // tie: lower id
  CHECK_THROWS_WITH(analysis::band_winner_table({}, 10.0), "no profiles");
}

TEST_CASE("ambient-ratio sweep measures the three-halves gain against a plain camera") {
  analysis::EnsembleSpec spec;
  spec.n_trials = 2;
  spec.freq_lo_hz = 5.0;
  spec.freq_hi_hz = 10.0;
  spec.duration_s = 1.0;
  spec.seed = 3;
  analysis::AlphaSweepOptions options;
  options.env_intensity = 1000.0;
  options.snr_trials = 4000;
  const auto points = analysis::alpha_sweep({1.0, 3.0}, sensor::identity_pattern(3),
                                            spec, options);
  REQUIRE(points.size() == 2);
  for (const auto& pt : points) {
    CHECK(std::isfinite(pt.mean_cosine_error));
    CHECK(pt.mean_cosine_error >= 0.0);
    CHECK(pt.snr_ratio_sigma > 0.0);
  }
  // A one-per-sub-step code on a unit scene collects (1 + alpha) times the
  // plain camera's ambient-only counts, so the measured SNR ratio sits at the
  // (1 + alpha)^(3/2) bound up to Monte-Carlo noise.
  CHECK(points[0].snr_ratio_bound == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  CHECK(points[1].snr_ratio_bound == doctest::Approx(std::pow(4.0, 1.5)).epsilon(1e-12));
  CHECK(std::abs(points[0].snr_ratio_measured - points[0].snr_ratio_bound) <
        5.0 * points[0].snr_ratio_sigma);
  CHECK(std::abs(points[1].snr_ratio_measured - points[1].snr_ratio_bound) <
        5.0 * points[1].snr_ratio_sigma);
  CHECK_THROWS_WITH(
      analysis::alpha_sweep({0.0}, sensor::identity_pattern(3), spec, options),
      "alphas must be positive");
}
