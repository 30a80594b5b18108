#include "tsr/sensor_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tsr/rng.hpp"

namespace tsr::sensor {

namespace {

FlickerPattern make_pattern(std::initializer_list<std::vector<int>> channels) {
  return FlickerPattern::from_channels(std::vector<std::vector<int>>(channels));
}

const std::vector<std::string> kRgbNames = {"b", "g", "r"};

}  // namespace

bool FlickerPattern::has_zero_row() const {
  for (int i = 0; i < n(); ++i) {
    if (code.row(i).sum() == 0.0) return true;
  }
  return false;
}

bool FlickerPattern::full_column_rank() const {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(code);
  return qr.rank() == m();
}

std::string FlickerPattern::row_string(int channel) const {
  std::string s;
  for (int i = 0; i < n(); ++i) {
    s += code(i, channel) > 0.5 ? '1' : '0';
  }
  return s;
}

FlickerPattern FlickerPattern::from_channels(
    const std::vector<std::vector<int>>& channels, std::vector<std::string> names) {
  if (channels.empty() || channels.front().empty()) {
    throw std::invalid_argument("pattern needs at least one channel and one sub-step");
  }
  const auto n = channels.front().size();
  FlickerPattern p;
  p.code.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(channels.size()));
  for (std::size_t c = 0; c < channels.size(); ++c) {
    if (channels[c].size() != n) {
      throw std::invalid_argument("pattern channels must have equal length");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const int v = channels[c][i];
      if (v != 0 && v != 1) throw std::invalid_argument("pattern entries must be 0 or 1");
      p.code(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v;
    }
  }
  if (names.empty() && channels.size() == 3) {
    p.channel_names = kRgbNames;
  } else if (names.empty()) {
    for (std::size_t c = 0; c < channels.size(); ++c) {
      p.channel_names.push_back("ch" + std::to_string(c + 1));
    }
  } else {
    if (names.size() != channels.size()) {
      throw std::invalid_argument("one name per channel expected");
    }
    p.channel_names = std::move(names);
  }
  return p;
}

FlickerPattern identity_pattern(int n) {
  if (n < 1) throw std::invalid_argument("identity pattern needs n >= 1");
  std::vector<std::vector<int>> ch(static_cast<std::size_t>(n),
                                   std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int c = 0; c < n; ++c) ch[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)] = 1;
  auto p = FlickerPattern::from_channels(ch);
  return p;
}

FlickerPattern candidate_pattern(int n, int id) {
  if (id < 0 || id > 4) throw std::invalid_argument("candidate id must be 0..4");
  switch (n) {
    case 4:
      switch (id) {
        case 0: return make_pattern({{1, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}});
        case 1: return make_pattern({{1, 0, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}});
        case 2: return make_pattern({{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 0, 1}});
        case 3: return make_pattern({{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}});
        default: return make_pattern({{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 1, 1, 1}});
      }
    case 5:
      switch (id) {
        case 0: return make_pattern({{1, 0, 0, 0, 1}, {0, 1, 1, 0, 0}, {0, 0, 1, 1, 0}});
        case 1: return make_pattern({{1, 0, 0, 1, 0}, {1, 0, 1, 0, 1}, {0, 1, 0, 0, 1}});
        case 2: return make_pattern({{1, 0, 0, 1, 0}, {0, 0, 1, 0, 0}, {0, 1, 0, 0, 1}});
        case 3: return make_pattern({{0, 1, 0, 0, 0}, {1, 0, 1, 0, 1}, {0, 0, 0, 1, 0}});
        default: return make_pattern({{1, 1, 0, 0, 0}, {0, 1, 1, 1, 0}, {0, 0, 0, 1, 1}});
      }
    case 6:
      switch (id) {
        case 0:
          return make_pattern({{1, 0, 0, 0, 1, 0}, {0, 1, 0, 0, 0, 1}, {0, 0, 1, 1, 0, 0}});
        case 1:
          return make_pattern({{1, 1, 0, 0, 0, 0}, {0, 0, 1, 1, 0, 0}, {0, 0, 0, 0, 1, 1}});
        case 2:
          return make_pattern({{1, 0, 0, 1, 0, 0}, {0, 1, 1, 1, 1, 0}, {0, 0, 1, 0, 0, 1}});
        case 3:
          return make_pattern({{1, 0, 1, 0, 1, 0}, {0, 1, 0, 1, 0, 1}, {1, 1, 1, 1, 1, 1}});
        default:
          return make_pattern({{0, 1, 0, 0, 0, 0}, {1, 0, 1, 1, 0, 1}, {0, 0, 0, 0, 1, 0}});
      }
    default:
      throw std::invalid_argument("candidate tables exist for n in {4, 5, 6}");
  }
}

FlickerPattern chosen_pattern(int n) {
  switch (n) {
    case 3: return identity_pattern(3);
    case 4: return candidate_pattern(4, 1);
    case 5: return candidate_pattern(5, 3);
    case 6: return candidate_pattern(6, 4);
    default: throw std::invalid_argument("chosen patterns exist for n in {3, 4, 5, 6}");
  }
}

FlickerPattern demo_pattern(int n) {
  switch (n) {
    case 3: return identity_pattern(3);
    case 4: return make_pattern({{0, 1, 0, 0}, {1, 0, 0, 1}, {0, 0, 1, 0}});
    case 5: return candidate_pattern(5, 3);
    case 6:
      return make_pattern({{1, 0, 0, 0, 0, 1}, {0, 1, 1, 0, 0, 0}, {0, 0, 0, 1, 1, 0}});
    default: throw std::invalid_argument("demo patterns exist for n in {3, 4, 5, 6}");
  }
}

double IlluminationModel::alpha() const {
  if (env_intensity <= 0.0) return std::numeric_limits<double>::infinity();
  return flicker_intensity / env_intensity;
}

double IlluminationModel::gamma(int channel) const {
  if (gammas.empty()) return 1.0;
  if (channel < 0 || channel >= static_cast<int>(gammas.size())) {
    throw std::out_of_range("gamma channel index");
  }
  return gammas[static_cast<std::size_t>(channel)];
}

std::vector<double> substep_averages(const signals::FineSignal& sig,
                                     const CameraConfig& cam, int frame_index) {
  if (frame_index < 0) throw std::invalid_argument("frame index must be non-negative");
  const double per_substep = sig.grid_rate * cam.substep_s();
  const double rounded = std::round(per_substep);
  if (rounded < 1.0 || std::abs(per_substep - rounded) > 1e-6 * per_substep) {
    throw std::invalid_argument("grid rate must be an exact multiple of the sub-step rate");
  }
  const auto sps = static_cast<std::size_t>(rounded);
  const double start_s = static_cast<double>(frame_index) * cam.frame_period();
  const auto k0 = static_cast<std::size_t>(std::llround(start_s * sig.grid_rate));
  const std::size_t need = k0 + sps * static_cast<std::size_t>(cam.n_factor);
  if (need > sig.samples.size()) {
    throw std::invalid_argument("signal does not cover the requested frame");
  }
  std::vector<double> out(static_cast<std::size_t>(cam.n_factor), 0.0);
  for (int n = 0; n < cam.n_factor; ++n) {
    double acc = 0.0;
    const std::size_t base = k0 + static_cast<std::size_t>(n) * sps;
    for (std::size_t j = 0; j < sps; ++j) acc += sig.samples[base + j];
    out[static_cast<std::size_t>(n)] = acc / static_cast<double>(sps);
  }
  return out;
}

ChannelFrame capture_frame(const std::vector<double>& substeps,
                           const FlickerPattern& pattern, const CameraConfig& cam,
                           const IlluminationModel& illum, const NoiseModel& noise,
                           std::uint64_t rng_seed, int frame_index) {
  if (static_cast<int>(substeps.size()) != pattern.n()) {
    throw std::invalid_argument("sub-step count does not match the pattern");
  }
  ChannelFrame frame;
  frame.frame_index = frame_index;
  frame.c_values.assign(static_cast<std::size_t>(pattern.m()), 0.0);
  // Ambient light rides on the coded path: the effective source intensity is
  // flicker + env, so ambient scales every channel by exactly (1 + 1/alpha).
  const double source = illum.flicker_intensity + illum.env_intensity;
  const double dt = cam.substep_s();
  for (int c = 0; c < pattern.m(); ++c) {
    double coded = 0.0;
    for (int n = 0; n < pattern.n(); ++n) {
      coded += pattern.code(n, c) * substeps[static_cast<std::size_t>(n)];
    }
    frame.c_values[static_cast<std::size_t>(c)] = illum.gamma(c) * source * dt * coded;
  }
  if (noise.shot_noise_on) {
    Rng rng(rng_seed);
    for (auto& v : frame.c_values) {
      const double variance = std::max(v, 0.0) + noise.dark_current * cam.exposure_s() +
                              noise.read_noise * noise.read_noise;
      v += std::sqrt(variance) * rng.normal();
    }
  }
  return frame;
}

std::vector<ChannelFrame> simulate_sequence(const signals::FineSignal& sig,
                                            const CameraConfig& cam,
                                            const FlickerPattern& pattern,
                                            const IlluminationModel& illum,
                                            const NoiseModel& noise,
                                            std::uint64_t seed) {
  if (cam.n_factor != pattern.n()) {
    throw std::invalid_argument("camera n_factor does not match the pattern");
  }
  const double duration = sig.duration_s();
  const double tol = 0.5 / sig.grid_rate;
  std::vector<ChannelFrame> frames;
  for (int f = 0;; ++f) {
    const double end_s = static_cast<double>(f) * cam.frame_period() + cam.exposure_s();
    if (end_s > duration + tol) break;
    const auto substeps = substep_averages(sig, cam, f);
    frames.push_back(capture_frame(substeps, pattern, cam, illum, noise,
                                   mix_seed(seed, static_cast<std::uint64_t>(f)), f));
  }
  return frames;
}

std::vector<double> estimate_gammas(const ChannelFrame& colored,
                                    const ChannelFrame& white,
                                    std::vector<int>* clamped_channels) {
  if (colored.c_values.size() != white.c_values.size() || colored.c_values.empty()) {
    throw std::invalid_argument("gamma estimation needs matching non-empty frames");
  }
  constexpr double kFloor = 1e-6;
  std::vector<double> g(colored.c_values.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    const double w = white.c_values[c];
    if (!(w > 0.0)) {
      throw std::invalid_argument("zero white reference channel " + std::to_string(c + 1));
    }
    double ratio = colored.c_values[c] / w;
    // Reflectivity is passive, so ratios are clamped into (0, 1]; any clamp is
    // reported as a calibration warning.
    if (ratio > 1.0 || !(ratio > 0.0)) {
      if (clamped_channels) clamped_channels->push_back(static_cast<int>(c));
      ratio = ratio > 1.0 ? 1.0 : kFloor;
    }
    g[c] = ratio;
  }
  return g;
}

double snr_ratio_bound(const IlluminationModel& illum) {
  const double a = illum.alpha();
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("alpha must be finite and positive");
  }
  double min_g = 1.0;
  for (double g : illum.gammas) min_g = std::min(min_g, g);
  return std::pow((1.0 + a) * min_g, 1.5);
}

double substep_gain(const CameraConfig& cam, const IlluminationModel& illum) {
  return illum.flicker_intensity * cam.substep_s();
}

}  // namespace tsr::sensor
