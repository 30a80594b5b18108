#include <doctest.h>

#include <string>

#include "tsr/config.hpp"
#include "tsr/presets.hpp"

using namespace tsr;

TEST_CASE("defaults survive an empty config") {
  const auto cfg = config::parse_config("", "t");
  CHECK(cfg.seed == 1);
  CHECK(cfg.cam.fps == 10.0);
  CHECK(cfg.cam.n_factor == 3);
  CHECK(cfg.cam.exposure_fill == 1.0);
  CHECK(cfg.pattern.kind == config::PatternConfig::Kind::Chosen);
  CHECK(cfg.scan.n_sequence == std::vector<int>{3, 4, 5, 6});
  CHECK(cfg.scan.aa_mode == scanning::AaMode::Composition);
  CHECK(cfg.scan.averaging == scanning::Averaging::Complex);
  CHECK(cfg.analysis.ensemble.n_trials == 1000);
  CHECK(cfg.analysis.ensemble.seed == 1);
  CHECK(cfg.snr.alphas.size() == 6);
  CHECK(cfg.solver.w_t == 3.0);
  CHECK(cfg.solver.w_s == 1.0);
  CHECK(cfg.output.dir == "out");
  CHECK_FALSE(cfg.output.svg);
}

TEST_CASE("dump then reparse is a fixed point") {
  const std::string text = R"(seed = 42
[camera]
fps = 10
n = 4
[signal]
type = sinusoid_mix
tone = 1,6,0.5
tone = 0.3,11
duration_s = 2
[pattern]
b = 0100
g = 1001
r = 0010
[illumination]
flicker = 2
env = 0.5
gamma = 0.9,0.8,0.7
[noise]
dark_current = 0.1
read_noise = 0.2
shot = true
[scanning]
n_sequence = 3,4
aa_mode = literal
averaging = magnitude
noise_floor = 0.05
[analysis]
trials = 10
freq_lo = 5
freq_hi = 15
entries = identity:3,candidate:5:2
winners = true
range = 5:23-25
[snr]
alphas = 1,2
trials = 100
[solver]
w_t = 4
w_s = 0
[output]
dir = scratch
format = csv+svg
)";
  const auto cfg = config::parse_config(text, "t");
  CHECK(cfg.seed == 42);
  CHECK(cfg.analysis.ensemble.seed == 42);
  CHECK(cfg.pattern.kind == config::PatternConfig::Kind::Explicit);
  CHECK(cfg.cam.n_factor == 4);  // inferred from the row length
  CHECK(cfg.illum.gammas.size() == 3);
  REQUIRE(cfg.analysis.entries.size() == 2);
  CHECK(cfg.analysis.entries[0].kind == config::AnalysisEntry::Kind::Identity);
  CHECK(cfg.analysis.entries[0].n == 3);
  CHECK(cfg.analysis.entries[1].kind == config::AnalysisEntry::Kind::Candidate);
  CHECK(cfg.analysis.entries[1].n == 5);
  CHECK(cfg.analysis.entries[1].candidate_id == 2);
  REQUIRE(cfg.analysis.ranges.size() == 1);
  CHECK(cfg.analysis.ranges[0].n == 5);
  CHECK(cfg.analysis.ranges[0].lo == 23.0);
  CHECK(cfg.analysis.ranges[0].hi == 25.0);

  const std::string dumped = config::dump_config(cfg);
  const auto cfg2 = config::parse_config(dumped, "t2");
  CHECK(config::dump_config(cfg2) == dumped);
}

TEST_CASE("parse errors carry source and line") {
  using config::parse_config;
  CHECK_THROWS_WITH(parse_config("[nope]\n", "f.cfg"), "f.cfg:1: unknown section [nope]");
  CHECK_THROWS_WITH(parse_config("\n[camera]\nzoom = 2\n", "f.cfg"),
                    "f.cfg:3: unknown key 'zoom' in [camera]");
  CHECK_THROWS_WITH(parse_config("[camera]\nfps = 10\nfps = 20\n", "f.cfg"),
                    "f.cfg:3: duplicate key 'fps'");
  CHECK_THROWS_WITH(parse_config("[camera\n", "f.cfg"), "f.cfg:1: malformed section header");
  CHECK_THROWS_WITH(parse_config("camera\n", "f.cfg"), "f.cfg:1: expected 'key = value'");
  CHECK_THROWS_WITH(parse_config("= 3\n", "f.cfg"), "f.cfg:1: empty key");
  CHECK_THROWS_WITH(parse_config("[camera]\nfps = fast\n", "f.cfg"),
                    "f.cfg:2: 'fps' expects a number, got 'fast'");
  CHECK_THROWS_WITH(parse_config("[camera]\nn = 4.5\n", "f.cfg"),
                    "f.cfg:2: 'n' expects an integer, got '4.5'");
  CHECK_THROWS_WITH(parse_config("[noise]\nshot = maybe\n", "f.cfg"),
                    "f.cfg:2: 'shot' expects true or false, got 'maybe'");
  CHECK_THROWS_WITH(parse_config("[camera]\nfps = -1\n", "f.cfg"),
                    "f.cfg:2: 'fps': must be positive");
  CHECK_THROWS_WITH(parse_config("seed = -2\n", "f.cfg"),
                    "f.cfg:1: 'seed': must be non-negative");
}

TEST_CASE("comments and blank lines are ignored") {
  const auto cfg = config::parse_config("# note\n; also\n\nseed = 7\n", "t");
  CHECK(cfg.seed == 7);
}

TEST_CASE("illumination accepts alpha or env but not both") {
  auto cfg = config::parse_config("[illumination]\nflicker = 2\nalpha = 4\n", "t");
  CHECK(cfg.illum.env_intensity == doctest::Approx(0.5));
  cfg = config::parse_config("[illumination]\nalpha = inf\n", "t");
  CHECK(cfg.illum.env_intensity == 0.0);
  CHECK_THROWS_WITH(config::parse_config("[illumination]\nalpha = 2\nenv = 1\n", "t"),
                    "t:3: give either 'alpha' or 'env', not both");
  CHECK_THROWS_WITH(config::parse_config("[illumination]\nalpha = 0\n", "t"),
                    "t:2: 'alpha': must be positive");
}

TEST_CASE("pattern section: presets, rows, and their conflicts") {
  using config::parse_config;
  auto cfg = parse_config("[pattern]\npreset = identity\n", "t");
  CHECK(cfg.pattern.kind == config::PatternConfig::Kind::Identity);
  cfg = parse_config("[pattern]\npreset = candidate\ncandidate_id = 3\n", "t");
  CHECK(cfg.pattern.candidate_id == 3);

  CHECK_THROWS_WITH(parse_config("[pattern]\npreset = magic\n", "t"),
                    "t:2: 'preset' must be identity, chosen, demo or candidate");
  CHECK_THROWS_WITH(parse_config("[pattern]\npreset = candidate\n", "t"),
                    "t:2: preset 'candidate' requires candidate_id");
  CHECK_THROWS_WITH(parse_config("[pattern]\ncandidate_id = 1\n", "t"),
                    "t:2: candidate_id is only valid with preset = candidate");
  CHECK_THROWS_WITH(parse_config("[pattern]\npreset = candidate\ncandidate_id = 9\n", "t"),
                    "t:3: 'candidate_id': must be in [0, 4]");
  CHECK_THROWS_WITH(parse_config("[pattern]\npreset = demo\nb = 010\n", "t"),
                    "t:2: give either 'preset' or explicit channel rows, not both");
  CHECK_THROWS_WITH(parse_config("[pattern]\nb = 012\n", "t"),
                    "t:2: 'b': row must be a string of 0s and 1s");
  CHECK_THROWS_WITH(parse_config("[pattern]\nb = 010\ng = 0100\n", "t"),
                    "t:3: 'g': all channel rows must have equal length");
  CHECK_THROWS_WITH(
      parse_config("[camera]\nn = 4\n[pattern]\nb = 010\n", "t"),
      "t:4: pattern rows have length 3 but camera n = 4");
}

TEST_CASE("signal section keeps tone and square entries apart") {
  const auto cfg = config::parse_config(
      "[signal]\ntype = square_mix\nsquare = 12\nsquare = 19\n", "t");
  CHECK(cfg.signal.square_freqs == std::vector<double>{12.0, 19.0});
  CHECK_THROWS_WITH(
      config::parse_config("[signal]\ntype = square_mix\ntone = 1,5\n", "t"),
      "t:1: square_mix signal cannot carry tone entries");
  CHECK_THROWS_WITH(config::parse_config("[signal]\nsquare = 12\n", "t"),
                    "t:1: sinusoid_mix signal cannot carry square entries");
  CHECK_THROWS_WITH(config::parse_config("[signal]\ntone = 1\n", "t"),
                    "t:2: 'tone': expects amplitude,freq_hz[,phase_rad]");
  CHECK_THROWS_WITH(config::parse_config("[signal]\ntone = 1,-5\n", "t"),
                    "t:2: 'tone': frequency must be positive");
}

TEST_CASE("study entry tokens parse and reject malformed forms") {
  using config::parse_config;
  const auto cfg = parse_config(
      "[analysis]\nentries = identity:3,chosen:4,demo:5,random:6,exhaustive:3,candidate:4:1\n",
      "t");
  REQUIRE(cfg.analysis.entries.size() == 6);
  CHECK(cfg.analysis.entries[3].kind == config::AnalysisEntry::Kind::Random);
  CHECK(cfg.analysis.entries[4].kind == config::AnalysisEntry::Kind::Exhaustive);
  CHECK(cfg.analysis.entries[5].token == "candidate:4:1");

  CHECK_THROWS_WITH(
      parse_config("[analysis]\nentries = wild:3\n", "t"),
      "t:2: entry 'wild:3': kind must be identity, chosen, demo, candidate, random or exhaustive");
  CHECK_THROWS_WITH(parse_config("[analysis]\nentries = identity:3:1\n", "t"),
                    "t:2: 'entries': entry 'identity:3:1' must look like kind:n");
  CHECK_THROWS_WITH(parse_config("[analysis]\nentries = candidate:4\n", "t"),
                    "t:2: 'entries': entry 'candidate:4' must look like kind:n:id");
  CHECK_THROWS_WITH(parse_config("[analysis]\nentries = identity:0\n", "t"),
                    "t:2: 'entries': entry 'identity:0': n must be in [1, 64]");
  CHECK_THROWS_WITH(parse_config("[analysis]\nrange = 5:25-23\n", "t"),
                    "t:2: 'range': range must have lo < hi");
  CHECK_THROWS_WITH(parse_config("[analysis]\nrange = 5\n", "t"),
                    "t:2: 'range': expects n:lo-hi");
  CHECK_THROWS_WITH(parse_config("[analysis]\nfreq_lo = 20\nfreq_hi = 10\n", "t"),
                    "t:1: analysis needs freq_lo < freq_hi");
}

TEST_CASE("fine grid rate derives from fps, the n factors, and the content") {
  auto cfg = config::parse_config(
      "[signal]\ntype = square_mix\nsquare = 12\nsquare = 27\n", "t");
  // lcm(3,4,5,6) = 60 sub-steps per second at 10 fps -> base 600; the first
  // multiple at least 100x the 27 Hz top component is 3000.
  CHECK(config::resolve_grid_rate(cfg, {3, 4, 5, 6}) == doctest::Approx(3000.0));
  CHECK(config::resolve_grid_rate(cfg, {3}) == doctest::Approx(2700.0));
  // With no content the base itself is used.
  auto plain = config::parse_config("", "t");
  CHECK(config::resolve_grid_rate(plain, {4}) == doctest::Approx(40.0));

  cfg.signal.grid_rate = 1200.0;
  CHECK(config::resolve_grid_rate(cfg, {3, 4, 5, 6}) == doctest::Approx(1200.0));
  cfg.signal.grid_rate = 900.0;
  CHECK_THROWS_WITH(config::resolve_grid_rate(cfg, {3, 4, 5, 6}),
                    "grid_rate must be a whole multiple of fps * lcm(n factors) = 600");
}

TEST_CASE("pattern factory covers every kind") {
  config::PatternConfig pc;
  pc.kind = config::PatternConfig::Kind::Identity;
  CHECK(config::make_pattern(pc, 3).row_string(0) == "100");
  pc.kind = config::PatternConfig::Kind::Chosen;
  CHECK(config::make_pattern(pc, 4).row_string(0) == "1001");
  pc.kind = config::PatternConfig::Kind::Demo;
  CHECK(config::make_pattern(pc, 4).row_string(0) == "0100");
  pc.kind = config::PatternConfig::Kind::Candidate;
  pc.candidate_id = 0;
  CHECK(config::make_pattern(pc, 4).n() == 4);
  pc.kind = config::PatternConfig::Kind::Explicit;
  pc.channel_names = {"b", "g"};
  pc.rows = {"0101", "1010"};
  const auto p = config::make_pattern(pc, 4);
  CHECK(p.m() == 2);
  CHECK(p.row_string(1) == "1010");
  CHECK_THROWS_WITH(config::make_pattern(pc, 5),
                    "pattern rows have length 4 but n = 5");
}

TEST_CASE("signal factory builds mixes and rejects empty content") {
  config::SignalConfig sc;
  sc.type = config::SignalConfig::Type::SinusoidMix;
  CHECK_THROWS_WITH(config::build_signal(sc, 600.0), "signal has no tone components");
  sc.tones = {{1.0, 5.0, 0.0}};
  sc.duration_s = 1.0;
  CHECK(config::build_signal(sc, 600.0).samples.size() == 600);

  config::SignalConfig sq;
  sq.type = config::SignalConfig::Type::SquareMix;
  CHECK_THROWS_WITH(config::build_signal(sq, 600.0), "signal has no square components");
  sq.square_freqs = {12.0, 19.0};
  sq.duration_s = 1.0;
  const auto sig = config::build_signal(sq, 600.0);
  CHECK(sig.samples.size() == 600);
  // Superposed square waves take values in {-2, 0, 2} almost everywhere.
  CHECK(std::abs(sig.samples[1]) <= 2.0);
}

TEST_CASE("every shipped preset parses and stays self-consistent") {
  const auto names = presets::names();
  CHECK(names.size() == 12);
  for (const auto& name : names) {
    const std::string* text = presets::find(name);
    REQUIRE(text != nullptr);
    const auto cfg = config::parse_config(*text, name);
    CHECK(config::dump_config(config::parse_config(config::dump_config(cfg), name)) ==
          config::dump_config(cfg));
  }
  CHECK(presets::find("fig1") == nullptr);

  const auto fig7 = config::parse_config(*presets::find("fig7-n4"), "fig7-n4");
  CHECK(fig7.cam.n_factor == 4);
  CHECK(fig7.pattern.kind == config::PatternConfig::Kind::Demo);
  REQUIRE(fig7.signal.tones.size() == 3);
  CHECK(fig7.signal.tones[1].freq_hz == 6.0);
  CHECK(fig7.output.dir == "out/fig7-n4");

  const auto fig9 = config::parse_config(*presets::find("fig9"), "fig9");
  CHECK(fig9.signal.type == config::SignalConfig::Type::SquareMix);
  CHECK(fig9.signal.square_freqs == std::vector<double>{12.0, 19.0, 23.0, 27.0});
  CHECK(fig9.scan.noise_floor == doctest::Approx(0.05));
  CHECK(config::resolve_grid_rate(fig9, fig9.scan.n_sequence) == doctest::Approx(3000.0));
}
