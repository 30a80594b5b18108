#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tsr/rng.hpp"
#include "tsr/sensor_sim.hpp"
#include "tsr/signals.hpp"

using namespace tsr;

namespace {

signals::FineSignal ramp_signal(std::size_t count, double grid_rate) {
  signals::FineSignal sig;
  sig.grid_rate = grid_rate;
  sig.samples.resize(count);
  for (std::size_t k = 0; k < count; ++k) sig.samples[k] = static_cast<double>(k);
  return sig;
}

}  // namespace

TEST_CASE("pattern construction validates and names channels") {
  const auto p = sensor::FlickerPattern::from_channels({{1, 0}, {0, 1}, {1, 1}});
  CHECK(p.n() == 2);
  CHECK(p.m() == 3);
  CHECK(p.channel_names == std::vector<std::string>{"b", "g", "r"});
  CHECK(p.row_string(0) == "10");
  CHECK(p.row_string(2) == "11");
  const auto q = sensor::FlickerPattern::from_channels({{1}, {0}});
  CHECK(q.channel_names == std::vector<std::string>{"ch1", "ch2"});
  CHECK_THROWS_WITH(sensor::FlickerPattern::from_channels({}),
                    "pattern needs at least one channel and one sub-step");
  CHECK_THROWS_WITH(sensor::FlickerPattern::from_channels({{1, 0}, {1}}),
                    "pattern channels must have equal length");
  CHECK_THROWS_WITH(sensor::FlickerPattern::from_channels({{2, 0}}),
                    "pattern entries must be 0 or 1");
  CHECK_THROWS_WITH(
      sensor::FlickerPattern::from_channels({{1, 0}}, {"a", "b"}),
      "one name per channel expected");
}

TEST_CASE("identity pattern lights one channel per sub-step") {
  const auto p = sensor::identity_pattern(3);
  CHECK(p.n() == 3);
  CHECK(p.m() == 3);
  CHECK(p.code.isApprox(Eigen::MatrixXd::Identity(3, 3)));
  CHECK(p.full_column_rank());
  CHECK_FALSE(p.has_zero_row());
  CHECK_THROWS_WITH(sensor::identity_pattern(0), "identity pattern needs n >= 1");
}

TEST_CASE("rank detection agrees with the exact minor oracle on all candidates") {
  int deficient = 0;
  for (int n : {4, 5, 6}) {
    for (int id = 0; id <= 4; ++id) {
      const auto p = sensor::candidate_pattern(n, id);
      CHECK(p.n() == n);
      CHECK(p.m() == 3);
      const bool expect = oracle::full_column_rank_3(p.code);
      CHECK(p.full_column_rank() == expect);
      if (!expect) ++deficient;
    }
  }
  // Exactly one table entry is rank deficient: the n = 6 pattern whose third
  // channel is the sum of the other two.
  CHECK(deficient == 1);
  CHECK_FALSE(sensor::candidate_pattern(6, 3).full_column_rank());
  CHECK_THROWS_WITH(sensor::candidate_pattern(7, 0),
                    "candidate tables exist for n in {4, 5, 6}");
  CHECK_THROWS_WITH(sensor::candidate_pattern(4, 5), "candidate id must be 0..4");
}

TEST_CASE("rank detection agrees with the oracle on random binary patterns") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 6);
    std::vector<std::vector<int>> ch(3, std::vector<int>(static_cast<std::size_t>(n)));
    for (auto& col : ch) {
      for (auto& v : col) v = static_cast<int>(rng.next_u64() & 1u);
    }
    bool all_zero = true;
    for (const auto& col : ch) {
      for (int v : col) {
        if (v != 0) all_zero = false;
      }
    }
    if (all_zero) ch[0][0] = 1;
    const auto p = sensor::FlickerPattern::from_channels(ch);
    CHECK(p.full_column_rank() == oracle::full_column_rank_3(p.code));
  }
}

TEST_CASE("per-n pattern selections expose the documented codes") {
  CHECK(sensor::chosen_pattern(3).code.isApprox(sensor::identity_pattern(3).code));
  const auto c4 = sensor::chosen_pattern(4);
  CHECK(c4.row_string(0) == "1001");
  CHECK(c4.row_string(1) == "1010");
  CHECK(c4.row_string(2) == "0101");
  const auto c5 = sensor::chosen_pattern(5);
  CHECK(c5.row_string(0) == "01000");
  CHECK(c5.row_string(1) == "10101");
  CHECK(c5.row_string(2) == "00010");
  const auto c6 = sensor::chosen_pattern(6);
  CHECK(c6.row_string(0) == "010000");
  CHECK(c6.row_string(1) == "101101");
  CHECK(c6.row_string(2) == "000010");
  const auto d4 = sensor::demo_pattern(4);
  CHECK(d4.row_string(0) == "0100");
  CHECK(d4.row_string(1) == "1001");
  CHECK(d4.row_string(2) == "0010");
  const auto d6 = sensor::demo_pattern(6);
  CHECK(d6.row_string(0) == "100001");
  CHECK(d6.row_string(1) == "011000");
  CHECK(d6.row_string(2) == "000110");
  for (int n : {3, 4, 5, 6}) {
    CHECK(sensor::chosen_pattern(n).full_column_rank());
    CHECK(sensor::demo_pattern(n).full_column_rank());
  }
  CHECK_THROWS_WITH(sensor::chosen_pattern(7),
                    "chosen patterns exist for n in {3, 4, 5, 6}");
  CHECK_THROWS_WITH(sensor::demo_pattern(2),
                    "demo patterns exist for n in {3, 4, 5, 6}");
}

TEST_CASE("sub-step averages reduce the fine grid exactly") {
  // 60 samples/s, fps 10, n 3: sub-step rate 30, two samples per sub-step.
  const auto sig = ramp_signal(60, 60.0);
  sensor::CameraConfig cam;
  cam.fps = 10.0;
  cam.n_factor = 3;
  const auto f0 = sensor::substep_averages(sig, cam, 0);
  REQUIRE(f0.size() == 3);
  CHECK(f0[0] == doctest::Approx(0.5));
  CHECK(f0[1] == doctest::Approx(2.5));
  CHECK(f0[2] == doctest::Approx(4.5));
  const auto f1 = sensor::substep_averages(sig, cam, 1);
  CHECK(f1[0] == doctest::Approx(6.5));
  CHECK(f1[1] == doctest::Approx(8.5));
  CHECK(f1[2] == doctest::Approx(10.5));
  CHECK_THROWS_WITH(sensor::substep_averages(sig, cam, -1),
                    "frame index must be non-negative");
  CHECK_THROWS_WITH(sensor::substep_averages(sig, cam, 10),
                    "signal does not cover the requested frame");
  auto coarse = sig;
  coarse.grid_rate = 45.0;  // not a multiple of the 30 Hz sub-step rate
  CHECK_THROWS_WITH(sensor::substep_averages(coarse, cam, 0),
                    "grid rate must be an exact multiple of the sub-step rate");
}

TEST_CASE("captured counts follow the coded-exposure formula") {
  sensor::CameraConfig cam;
  cam.fps = 10.0;
  cam.n_factor = 4;
  const auto pattern = sensor::chosen_pattern(4);
  sensor::IlluminationModel illum;
  illum.flicker_intensity = 2.0;
  illum.env_intensity = 0.5;
  illum.gammas = {0.9, 0.8, 0.7};
  const std::vector<double> substeps{1.0, 2.0, 3.0, 4.0};
  const auto frame =
      sensor::capture_frame(substeps, pattern, cam, illum, {}, 0, 5);
  CHECK(frame.frame_index == 5);
  REQUIRE(frame.c_values.size() == 3);
  const double dt = cam.substep_s();
  for (int c = 0; c < 3; ++c) {
    double coded = 0.0;
    for (int n = 0; n < 4; ++n) {
      coded += pattern.code(n, c) * substeps[static_cast<std::size_t>(n)];
    }
    const double want = illum.gammas[static_cast<std::size_t>(c)] * 2.5 * dt * coded;
    CHECK(frame.c_values[static_cast<std::size_t>(c)] ==
          doctest::Approx(want).epsilon(1e-12));
  }
  CHECK_THROWS_WITH(
      sensor::capture_frame({1.0, 2.0}, pattern, cam, illum, {}, 0),
      "sub-step count does not match the pattern");
}

TEST_CASE("shot noise draws are reproducible per seed and differ across seeds") {
  sensor::CameraConfig cam;
  cam.n_factor = 4;
  const auto pattern = sensor::chosen_pattern(4);
  sensor::IlluminationModel illum;
  illum.flicker_intensity = 100.0;
  sensor::NoiseModel noise;
  noise.shot_noise_on = true;
  const std::vector<double> substeps{1.0, 2.0, 3.0, 4.0};
  const auto a = sensor::capture_frame(substeps, pattern, cam, illum, noise, 42);
  const auto b = sensor::capture_frame(substeps, pattern, cam, illum, noise, 42);
  const auto c = sensor::capture_frame(substeps, pattern, cam, illum, noise, 43);
  CHECK(a.c_values == b.c_values);
  CHECK(a.c_values != c.c_values);
  const auto clean = sensor::capture_frame(substeps, pattern, cam, illum, {}, 42);
  CHECK(a.c_values != clean.c_values);
}

TEST_CASE("sequence simulation emits every whole exposure") {
  const auto sig = signals::gen_sinusoid_mix({{1.0, 2.0, 0.0}}, 5.0, 120.0);
  sensor::CameraConfig cam;
  cam.fps = 10.0;
  cam.n_factor = 4;
  const auto pattern = sensor::chosen_pattern(4);
  const auto frames = sensor::simulate_sequence(sig, cam, pattern, {}, {}, 1);
  CHECK(frames.size() == 50);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    CHECK(frames[f].frame_index == static_cast<int>(f));
  }
  const auto short_sig = signals::gen_sinusoid_mix({{1.0, 2.0, 0.0}}, 0.95, 120.0);
  CHECK(sensor::simulate_sequence(short_sig, cam, pattern, {}, {}, 1).size() == 9);
  sensor::CameraConfig bad = cam;
  bad.n_factor = 5;
  CHECK_THROWS_WITH(sensor::simulate_sequence(sig, bad, pattern, {}, {}, 1),
                    "camera n_factor does not match the pattern");
}

TEST_CASE("any frame of a noisy sequence can be reproduced in isolation") {
  const auto sig = signals::gen_sinusoid_mix({{1.0, 3.0, 0.0}}, 2.0, 120.0);
  sensor::CameraConfig cam;
  cam.fps = 10.0;
  cam.n_factor = 4;
  const auto pattern = sensor::chosen_pattern(4);
  sensor::IlluminationModel illum;
  illum.flicker_intensity = 50.0;
  sensor::NoiseModel noise;
  noise.shot_noise_on = true;
  const std::uint64_t seed = 2026;
  const auto frames = sensor::simulate_sequence(sig, cam, pattern, illum, noise, seed);
  REQUIRE(frames.size() == 20);
  for (int f : {0, 7, 19}) {
    const auto substeps = sensor::substep_averages(sig, cam, f);
    const auto redo = sensor::capture_frame(
        substeps, pattern, cam, illum, noise,
        mix_seed(seed, static_cast<std::uint64_t>(f)), f);
    CHECK(redo.c_values == frames[static_cast<std::size_t>(f)].c_values);
  }
}

TEST_CASE("channel response calibration is the ratio of colored to white counts") {
  sensor::ChannelFrame colored{0, {0.5, 0.8, 0.2}};
  sensor::ChannelFrame white{0, {1.0, 1.0, 0.5}};
  const auto g = sensor::estimate_gammas(colored, white);
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(g[1] == doctest::Approx(0.8));
  CHECK(g[2] == doctest::Approx(0.4));
  std::vector<int> clamped;
  sensor::ChannelFrame over{0, {1.2, -0.1, 0.3}};
  const auto h = sensor::estimate_gammas(over, white, &clamped);
  CHECK(h[0] == 1.0);
  CHECK(h[1] == doctest::Approx(1e-6));
  CHECK(clamped == std::vector<int>{0, 1});
  sensor::ChannelFrame zero_white{0, {1.0, 0.0, 0.5}};
  CHECK_THROWS_WITH(sensor::estimate_gammas(colored, zero_white),
                    "zero white reference channel 2");
  sensor::ChannelFrame mismatched{0, {1.0}};
  CHECK_THROWS_WITH(sensor::estimate_gammas(colored, mismatched),
                    "gamma estimation needs matching non-empty frames");
}

TEST_CASE("SNR gain bound follows the three-halves law") {
  sensor::IlluminationModel illum;
  illum.flicker_intensity = 1.0;
  illum.env_intensity = 1.0;  // alpha = 1
  CHECK(sensor::snr_ratio_bound(illum) ==
        doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  illum.flicker_intensity = 3.0;
  illum.env_intensity = 1.0;  // alpha = 3
  illum.gammas = {1.0, 0.5, 0.9};
  CHECK(sensor::snr_ratio_bound(illum) ==
        doctest::Approx(std::pow(4.0 * 0.5, 1.5)).epsilon(1e-12));
  illum.env_intensity = 0.0;  // alpha = infinity
  CHECK_THROWS_WITH(sensor::snr_ratio_bound(illum),
                    "alpha must be finite and positive");
}

TEST_CASE("sub-step gain converts solver output back to scene units") {
  sensor::CameraConfig cam;
  cam.fps = 10.0;
  cam.n_factor = 3;
  sensor::IlluminationModel illum;
  illum.flicker_intensity = 2.0;
  CHECK(sensor::substep_gain(cam, illum) == doctest::Approx(2.0 / 30.0));
}
