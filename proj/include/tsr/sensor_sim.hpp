#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "tsr/signals.hpp"

namespace tsr::sensor {

// Frame-rate camera whose exposure is split into n_factor equal sub-steps.
struct CameraConfig {
  double fps = 10.0;
  int n_factor = 3;
  double exposure_fill = 1.0;  // fraction of the frame period that integrates

  double frame_period() const { return 1.0 / fps; }
  double exposure_s() const { return exposure_fill / fps; }
  double substep_s() const { return exposure_s() / static_cast<double>(n_factor); }
  double substep_rate() const { return static_cast<double>(n_factor) / exposure_s(); }
};

// Binary on/off illumination code, one column per color channel and one row
// per exposure sub-step.
struct FlickerPattern {
  Eigen::MatrixXd code;  // n x m, entries 0 or 1
  std::vector<std::string> channel_names;

  int n() const { return static_cast<int>(code.rows()); }
  int m() const { return static_cast<int>(code.cols()); }
  bool has_zero_row() const;
  bool full_column_rank() const;
  std::string row_string(int channel) const;  // e.g. "0101"

  // channels[c] lists the on/off value of channel c at each sub-step.
  static FlickerPattern from_channels(const std::vector<std::vector<int>>& channels,
                                      std::vector<std::string> names = {});
};

FlickerPattern identity_pattern(int n);
// Candidate tables for n in {4, 5, 6}, id 0..4. Some entries are rank
// deficient on purpose; construction never checks rank.
FlickerPattern candidate_pattern(int n, int id);
// Per-n pattern used throughout the evaluation runs: identity for n = 3,
// candidates 1, 3, 4 for n = 4, 5, 6.
FlickerPattern chosen_pattern(int n);
// Patterns used by the per-n reconstruction demos (differs from the chosen
// set at n = 4 and n = 6).
FlickerPattern demo_pattern(int n);

struct IlluminationModel {
  double flicker_intensity = 1.0;
  double env_intensity = 0.0;
  std::vector<double> gammas;  // per-channel response, empty means all 1

  double alpha() const;  // flicker / env ratio
  double gamma(int channel) const;
};

struct NoiseModel {
  double dark_current = 0.0;  // counts per second
  double read_noise = 0.0;    // RMS counts
  bool shot_noise_on = false;
};

// One captured exposure: the per-channel integrated counts.
struct ChannelFrame {
  int frame_index = 0;
  std::vector<double> c_values;
};

// Mean of the fine-grid scene over each sub-step of the given frame. Frame 0
// starts at the signal's own start time.
std::vector<double> substep_averages(const signals::FineSignal& sig,
                                     const CameraConfig& cam, int frame_index);

ChannelFrame capture_frame(const std::vector<double>& substeps,
                           const FlickerPattern& pattern,
                           const CameraConfig& cam,
                           const IlluminationModel& illum,
                           const NoiseModel& noise, std::uint64_t rng_seed,
                           int frame_index = 0);

// Captures every whole exposure contained in the signal span. Noise draws are
// derived per frame from the base seed, so any frame can be reproduced alone.
std::vector<ChannelFrame> simulate_sequence(const signals::FineSignal& sig,
                                            const CameraConfig& cam,
                                            const FlickerPattern& pattern,
                                            const IlluminationModel& illum,
                                            const NoiseModel& noise,
                                            std::uint64_t seed);

// Per-channel response ratio of a calibration frame against an all-white
// reference frame, clamped into (0, 1]. Channels that needed clamping are
// reported through clamped_channels.
std::vector<double> estimate_gammas(const ChannelFrame& colored,
                                    const ChannelFrame& white,
                                    std::vector<int>* clamped_channels = nullptr);

// Lower bound on the SNR gain of the coded reconstruction over a plain
// camera under the same ambient light: [(1 + alpha) * min gamma]^(3/2).
double snr_ratio_bound(const IlluminationModel& illum);

// Counts produced by a unit scene intensity over one sub-step of flickered
// light; converts solver output back to scene intensity units.
double substep_gain(const CameraConfig& cam, const IlluminationModel& illum);

}  // namespace tsr::sensor
