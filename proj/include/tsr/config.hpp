#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tsr/analysis.hpp"
#include "tsr/scanning.hpp"
#include "tsr/sensor_sim.hpp"
#include "tsr/signals.hpp"

namespace tsr::config {

struct SignalConfig {
  enum class Type { SinusoidMix, SquareMix };
  Type type = Type::SinusoidMix;
  std::vector<signals::ToneComponent> tones;  // sinusoid_mix components
  std::vector<double> square_freqs;           // square_mix fundamentals
  double duration_s = 5.0;
  double grid_rate = 0.0;  // samples/s; 0 means derive from content
};

struct PatternConfig {
  enum class Kind { Identity, Chosen, Demo, Candidate, Explicit };
  Kind kind = Kind::Chosen;
  int candidate_id = -1;                   // Kind::Candidate only
  std::vector<std::string> channel_names;  // Kind::Explicit only
  std::vector<std::string> rows;           // bit strings, one per channel
};

struct ScanConfig {
  std::vector<int> n_sequence{3, 4, 5, 6};
  scanning::Averaging averaging = scanning::Averaging::Complex;
  scanning::AaMode aa_mode = scanning::AaMode::Composition;
  double noise_floor = 0.0;
};

// One pattern-evaluation request of the batch study command.
struct AnalysisEntry {
  enum class Kind { Identity, Chosen, Demo, Candidate, Random, Exhaustive };
  Kind kind = Kind::Identity;
  int n = 0;
  int candidate_id = -1;
  std::string token;  // original text, reused as the output label
};

struct AnalysisConfig {
  analysis::EnsembleSpec ensemble;
  double bin_hz = 1.0;
  std::vector<AnalysisEntry> entries;
  bool winners = false;
  bool nyquist_cap = false;  // clip each entry's band at n * fps / 2
  struct Range {
    int n = 0;
    double lo = 0.0;
    double hi = 0.0;
  };
  std::vector<Range> ranges;  // extra per-n frequency-range report
};

struct SnrConfig {
  std::vector<double> alphas{0.5, 1.0, 2.0, 5.0, 10.0, 50.0};
  int trials = 10000;
  int cosine_trials = 200;
  double env_intensity = 1000.0;
  double amplitude = 1.0;
  double offset = 1.2;
};

struct SolverConfig {
  double w_t = 3.0;
  double w_s = 1.0;
};

struct OutputConfig {
  std::string dir = "out";
  bool svg = false;  // CSV is always written
};

struct Config {
  std::uint64_t seed = 1;
  sensor::CameraConfig cam;
  SignalConfig signal;
  PatternConfig pattern;
  sensor::IlluminationModel illum;
  sensor::NoiseModel noise;
  ScanConfig scan;
  AnalysisConfig analysis;
  SnrConfig snr;
  SolverConfig solver;
  OutputConfig output;
};

// Parses the key-value config text. Unknown sections or keys, malformed
// values, and out-of-range numbers all raise std::runtime_error with
// "<source>:<line>: <message>".
Config parse_config(const std::string& text, const std::string& source_name);
Config load_config(const std::filesystem::path& path);

// Renders the fully resolved configuration in the same format parse_config
// accepts, defaults included.
std::string dump_config(const Config& cfg);

// Pattern for a given n factor under this config.
sensor::FlickerPattern make_pattern(const PatternConfig& pc, int n);

// Fine-grid sample rate: the explicit grid_rate if set, otherwise the
// smallest multiple of fps * lcm(n_factors) that is at least 100x the highest
// component frequency.
double resolve_grid_rate(const Config& cfg, const std::vector<int>& n_factors);

signals::FineSignal build_signal(const SignalConfig& sc, double grid_rate);

}  // namespace tsr::config
