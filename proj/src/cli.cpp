#include "tsr/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsr/analysis.hpp"
#include "tsr/config.hpp"
#include "tsr/csv.hpp"
#include "tsr/presets.hpp"
#include "tsr/scanning.hpp"
#include "tsr/sensor_sim.hpp"
#include "tsr/signals.hpp"
#include "tsr/solver.hpp"
#include "tsr/svg.hpp"

namespace fs = std::filesystem;

namespace tsr::cli {

namespace {

constexpr const char* kVersion = "tsr 1.0.0";

const std::vector<std::string> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* format_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "config file path");
  cmd->add_option("--preset", o.preset, "built-in named configuration");
  o.seed_opt = cmd->add_option("--seed", o.seed, "override the config seed");
  o.out_opt = cmd->add_option("--out", o.out_dir, "output directory");
  o.format_opt = cmd->add_option("--format", o.format, "csv or csv+svg")
                     ->check(CLI::IsMember({"csv", "csv+svg"}));
}

config::Config load(const CommonOpts& o) {
  if (!o.preset.empty() && !o.config_path.empty()) {
    throw std::runtime_error("use --preset or --config, not both");
  }
  config::Config cfg;
  if (!o.preset.empty()) {
    const std::string* text = presets::find(o.preset);
    if (!text) {
      std::string known;
      for (const auto& n : presets::names()) {
        if (!known.empty()) known += ", ";
        known += n;
      }
      throw std::runtime_error("unknown preset '" + o.preset + "' (available: " +
                               known + ")");
    }
    cfg = config::parse_config(*text, "preset:" + o.preset);
  } else if (!o.config_path.empty()) {
    cfg = config::load_config(o.config_path);
  }
  if (o.seed_opt && o.seed_opt->count() > 0) {
    cfg.seed = o.seed;
    cfg.analysis.ensemble.seed = o.seed;
  }
  if (o.out_opt && o.out_opt->count() > 0) cfg.output.dir = o.out_dir;
  if (o.format_opt && o.format_opt->count() > 0) cfg.output.svg = (o.format == "csv+svg");
  return cfg;
}

fs::path prepare_out_dir(const config::Config& cfg) {
  fs::path dir(cfg.output.dir);
  fs::create_directories(dir);
  return dir;
}

void save_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const CommonOpts& o, const config::Config& cfg) {
  std::string text;
  text += std::string("tool = ") + kVersion + "\n";
  text += "command = " + command + "\n";
  if (!o.preset.empty()) text += "preset = " + o.preset + "\n";
  text += "\n# resolved configuration\n";
  text += config::dump_config(cfg);
  save_text(dir / "manifest.txt", text);
}

std::string pattern_label(const sensor::FlickerPattern& p) {
  std::string out;
  for (int c = 0; c < p.m(); ++c) {
    if (c) out += '/';
    out += p.row_string(c);
  }
  return out;
}

std::string fd(double v) { return csv::format_double(v); }

void write_trace_csv(const fs::path& path, const std::vector<double>& values,
                     double rate, double t0) {
  csv::Writer w({"time_s", "intensity"});
  for (std::size_t i = 0; i < values.size(); ++i) {
    w.row({fd(t0 + static_cast<double>(i) / rate), fd(values[i])});
  }
  w.save(path);
}

void write_spectrum_csv(const fs::path& path, const signals::SpectrumView& sv) {
  csv::Writer w({"freq_hz", "magnitude", "phase_rad"});
  for (std::size_t k = 0; k < sv.bins.size(); ++k) {
    w.row({fd(sv.df * static_cast<double>(k)), fd(std::abs(sv.bins[k])),
           fd(std::arg(sv.bins[k]))});
  }
  w.save(path);
}

svg::Series spectrum_series(const signals::SpectrumView& sv, std::string label,
                            std::string color) {
  svg::Series s;
  s.label = std::move(label);
  s.color = std::move(color);
  for (std::size_t k = 0; k < sv.bins.size(); ++k) {
    s.points.emplace_back(sv.df * static_cast<double>(k), std::abs(sv.bins[k]));
  }
  return s;
}

// Per-exposure scene mean, the no-upsampling camera estimate.
std::vector<double> baseline_means(const signals::FineSignal& sig,
                                   const sensor::CameraConfig& cam,
                                   std::size_t n_frames) {
  sensor::CameraConfig flat = cam;
  flat.n_factor = 1;
  std::vector<double> out;
  for (std::size_t f = 0; f < n_frames; ++f) {
    out.push_back(sensor::substep_averages(sig, flat, static_cast<int>(f))[0]);
  }
  return out;
}

struct SimOutput {
  signals::FineSignal sig;
  sensor::FlickerPattern pattern{};
  std::vector<sensor::ChannelFrame> frames;
};

SimOutput simulate_from_config(config::Config& cfg) {
  const double rate = config::resolve_grid_rate(cfg, {cfg.cam.n_factor});
  cfg.signal.grid_rate = rate;  // resolved value lands in the manifest
  SimOutput out;
  out.sig = config::build_signal(cfg.signal, rate);
  out.pattern = config::make_pattern(cfg.pattern, cfg.cam.n_factor);
  out.frames = sensor::simulate_sequence(out.sig, cfg.cam, out.pattern, cfg.illum,
                                         cfg.noise, cfg.seed);
  if (out.frames.empty()) {
    throw std::runtime_error("signal shorter than one exposure; nothing to capture");
  }
  return out;
}

void write_frames_csv(const fs::path& path,
                      const std::vector<sensor::ChannelFrame>& frames,
                      const sensor::FlickerPattern& pattern) {
  std::vector<std::string> header{"frame_index"};
  for (int c = 0; c < pattern.m(); ++c) {
    header.push_back("C_" + std::to_string(c + 1));
  }
  csv::Writer w(header);
  for (const auto& f : frames) {
    std::vector<std::string> cells{std::to_string(f.frame_index)};
    for (double v : f.c_values) cells.push_back(fd(v));
    w.row(cells);
  }
  w.save(path);
}

std::vector<sensor::ChannelFrame> read_frames_csv(const fs::path& path,
                                                  int expected_m) {
  const auto table = csv::read(path);
  if (table.header.size() < 2 || table.header[0] != "frame_index") {
    throw std::runtime_error(path.string() +
                             ": expected header frame_index,C_1,...");
  }
  const int m = static_cast<int>(table.header.size()) - 1;
  if (m != expected_m) {
    throw std::runtime_error(path.string() + ": has " + std::to_string(m) +
                             " channels but the pattern expects " +
                             std::to_string(expected_m));
  }
  std::vector<sensor::ChannelFrame> frames;
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw std::runtime_error(path.string() + ": ragged row");
    }
    sensor::ChannelFrame f;
    f.frame_index = static_cast<int>(std::stoll(row[0]));
    for (int c = 0; c < m; ++c) f.c_values.push_back(std::stod(row[1 + c]));
    frames.push_back(std::move(f));
  }
  if (frames.empty()) throw std::runtime_error(path.string() + ": no frames");
  return frames;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const CommonOpts& o) {
  config::Config cfg = load(o);
  SimOutput sim = simulate_from_config(cfg);
  const fs::path dir = prepare_out_dir(cfg);

  write_frames_csv(dir / "frames.csv", sim.frames, sim.pattern);
  write_trace_csv(dir / "truth.csv", sim.sig.samples, sim.sig.grid_rate, sim.sig.t0);
  write_manifest(dir, "simulate", o, cfg);
  std::cout << "wrote " << sim.frames.size() << " frames to " << dir.string() << "\n";
  return 0;
}

// -------------------------------------------------------------- reconstruct

int cmd_reconstruct(const CommonOpts& o, const std::string& frames_path,
                    const std::string& spatial_path) {
  config::Config cfg = load(o);

  if (!spatial_path.empty()) {
    const auto pattern = config::make_pattern(cfg.pattern, cfg.cam.n_factor);
    if (!pattern.full_column_rank()) {
      throw std::runtime_error("pattern " + pattern_label(pattern) +
                               " is rank deficient");
    }
    const auto table = csv::read(spatial_path);
    const std::vector<std::string> order{"center", "up", "down", "left", "right"};
    if (table.header.empty() || table.header[0] != "pixel") {
      throw std::runtime_error(spatial_path + ": expected header pixel,C_1,...");
    }
    if (static_cast<int>(table.header.size()) - 1 != pattern.m()) {
      throw std::runtime_error(spatial_path + ": channel count mismatch");
    }
    solver::SpatialPatch patch;
    patch.w_t = cfg.solver.w_t;
    patch.w_s = cfg.solver.w_s;
    std::set<std::string> seen;
    for (const auto& row : table.rows) {
      const auto it = std::find(order.begin(), order.end(), row[0]);
      if (it == order.end()) {
        throw std::runtime_error(spatial_path + ": unknown pixel '" + row[0] +
                                 "' (want center, up, down, left, right)");
      }
      if (!seen.insert(row[0]).second) {
        throw std::runtime_error(spatial_path + ": duplicate pixel '" + row[0] + "'");
      }
      sensor::ChannelFrame f;
      for (std::size_t c = 1; c < row.size(); ++c) f.c_values.push_back(std::stod(row[c]));
      patch.frames[static_cast<std::size_t>(it - order.begin())] = std::move(f);
    }
    if (seen.size() != order.size()) {
      throw std::runtime_error(spatial_path + ": need all five pixels");
    }
    const Eigen::MatrixXd traces =
        solver::reconstruct_spatial(patch, pattern, cfg.illum.gammas);
    const double gain = sensor::substep_gain(cfg.cam, cfg.illum);
    const fs::path dir = prepare_out_dir(cfg);
    csv::Writer w({"pixel", "time_s", "intensity"});
    const double dt = cfg.cam.substep_s();
    for (int p = 0; p < traces.rows(); ++p) {
      for (int k = 0; k < traces.cols(); ++k) {
        w.row({order[static_cast<std::size_t>(p)], fd(dt * k), fd(traces(p, k) / gain)});
      }
    }
    w.save(dir / "spatial_traces.csv");
    write_manifest(dir, "reconstruct", o, cfg);
    std::cout << "wrote spatial traces to " << dir.string() << "\n";
    return 0;
  }

  sensor::FlickerPattern pattern = config::make_pattern(cfg.pattern, cfg.cam.n_factor);
  if (!pattern.full_column_rank()) {
    throw std::runtime_error("pattern " + pattern_label(pattern) +
                             " is rank deficient");
  }

  std::vector<sensor::ChannelFrame> frames;
  SimOutput sim;
  const bool simulated = frames_path.empty();
  if (simulated) {
    sim = simulate_from_config(cfg);
    frames = sim.frames;
    pattern = sim.pattern;
  } else {
    frames = read_frames_csv(frames_path, pattern.m());
  }

  auto trace = solver::reconstruct_sequence(frames, pattern, cfg.cam, cfg.illum.gammas);
  const double gain = sensor::substep_gain(cfg.cam, cfg.illum);
  for (double& v : trace.values) v /= gain;
  const auto sv = solver::spectrum(trace);

  const fs::path dir = prepare_out_dir(cfg);
  write_trace_csv(dir / "trace.csv", trace.values, trace.sample_rate(), trace.start_s);
  write_spectrum_csv(dir / "spectrum.csv", sv);
  if (simulated) {
    write_frames_csv(dir / "frames.csv", frames, pattern);
    write_trace_csv(dir / "truth.csv", sim.sig.samples, sim.sig.grid_rate, sim.sig.t0);
    const auto base = baseline_means(sim.sig, cfg.cam, frames.size());
    write_trace_csv(dir / "baseline.csv", base, cfg.cam.fps, sim.sig.t0);
    if (cfg.output.svg) {
      svg::Series truth;
      truth.label = "scene";
      truth.color = kPalette[0];
      for (std::size_t i = 0; i < sim.sig.samples.size(); ++i) {
        truth.points.emplace_back(sim.sig.t0 + static_cast<double>(i) / sim.sig.grid_rate,
                                  sim.sig.samples[i]);
      }
      svg::Series camera;
      camera.label = "camera (no upsampling)";
      camera.color = kPalette[1];
      for (std::size_t f = 0; f < base.size(); ++f) {
        const double t = sim.sig.t0 + static_cast<double>(f) / cfg.cam.fps;
        camera.points.emplace_back(t, base[f]);
        camera.points.emplace_back(t + 1.0 / cfg.cam.fps, base[f]);
      }
      svg::Series tsr;
      tsr.label = "reconstruction";
      tsr.color = kPalette[2];
      const double dt = 1.0 / trace.sample_rate();
      for (std::size_t i = 0; i < trace.values.size(); ++i) {
        const double t = trace.start_s + static_cast<double>(i) * dt;
        tsr.points.emplace_back(t, trace.values[i]);
        tsr.points.emplace_back(t + dt, trace.values[i]);
      }
      svg::PlotSpec plot;
      plot.title = "reconstruction overlay";
      plot.x_label = "time [s]";
      plot.y_label = "intensity";
      svg::write_plot(dir / "overlay.svg", plot, {truth, camera, tsr});
    }
  }
  if (cfg.output.svg) {
    svg::PlotSpec plot;
    plot.title = "reconstructed spectrum";
    plot.x_label = "frequency [Hz]";
    plot.y_label = "magnitude";
    svg::write_plot(dir / "spectrum.svg", plot,
                    {spectrum_series(sv, "reconstruction", kPalette[2])});
  }
  write_manifest(dir, "reconstruct", o, cfg);
  std::cout << "wrote reconstruction to " << dir.string() << "\n";
  return 0;
}

// -------------------------------------------------------------------- scan

int cmd_scan(const CommonOpts& o, const std::string& aa_mode_flag) {
  config::Config cfg = load(o);
  if (!aa_mode_flag.empty()) {
    if (aa_mode_flag == "composition") {
      cfg.scan.aa_mode = scanning::AaMode::Composition;
    } else if (aa_mode_flag == "literal") {
      cfg.scan.aa_mode = scanning::AaMode::Literal;
    } else {
      throw std::runtime_error("--aa-mode must be composition or literal");
    }
  }
  using PK = config::PatternConfig::Kind;
  if (cfg.pattern.kind == PK::Candidate || cfg.pattern.kind == PK::Explicit) {
    throw std::runtime_error(
        "scan varies n per window; use pattern preset identity, chosen or demo");
  }
  const double rate = config::resolve_grid_rate(cfg, cfg.scan.n_sequence);
  cfg.signal.grid_rate = rate;
  const auto sig = config::build_signal(cfg.signal, rate);

  scanning::ScanOptions options;
  options.averaging = cfg.scan.averaging;
  options.aa_mode = cfg.scan.aa_mode;
  options.noise_floor_fraction = cfg.scan.noise_floor;
  const auto pattern_rule = [&cfg](int n) {
    return config::make_pattern(cfg.pattern, n);
  };
  const auto result =
      scanning::run_scan(sig, cfg.scan.n_sequence, cfg.cam.fps, pattern_rule,
                         cfg.illum, cfg.noise, cfg.seed, options);

  const fs::path dir = prepare_out_dir(cfg);
  {
    csv::Writer w({"window_index", "n", "start_s", "end_s"});
    for (std::size_t i = 0; i < result.windows.size(); ++i) {
      const auto& win = result.windows[i];
      w.row({std::to_string(i), std::to_string(win.n_factor), fd(win.start_s),
             fd(win.end_s)});
    }
    w.save(dir / "windows.csv");
  }
  {
    csv::Writer w({"window_index", "freq_hz", "magnitude", "phase_rad"});
    for (std::size_t i = 0; i < result.windows.size(); ++i) {
      const auto& sv = result.windows[i].spectrum;
      for (std::size_t k = 0; k < sv.bins.size(); ++k) {
        w.row({std::to_string(i), fd(sv.df * static_cast<double>(k)),
               fd(std::abs(sv.bins[k])), fd(std::arg(sv.bins[k]))});
      }
    }
    w.save(dir / "window_spectra.csv");
  }
  {
    csv::Writer w({"band_index", "f_lo", "f_hi", "n", "windows"});
    const auto& bands = result.stitched.bands;
    for (std::size_t b = 0; b < bands.size(); ++b) {
      std::string wins;
      for (std::size_t j = 0; j < bands[b].window_indices.size(); ++j) {
        if (j) wins += ';';
        wins += std::to_string(bands[b].window_indices[j]);
      }
      w.row({std::to_string(b), fd(bands[b].f_lo), fd(bands[b].f_hi),
             std::to_string(bands[b].n_factor), wins});
    }
    w.save(dir / "bands.csv");
  }
  write_spectrum_csv(dir / "stitched.csv", result.stitched.combined);
  write_spectrum_csv(dir / "anti_aliased.csv", result.anti_aliased.combined);
  if (cfg.output.svg) {
    svg::PlotSpec plot;
    plot.title = "scanned spectrum";
    plot.x_label = "frequency [Hz]";
    plot.y_label = "magnitude";
    svg::write_plot(dir / "scan_spectrum.svg", plot,
                    {spectrum_series(result.stitched.combined, "stitched", kPalette[0]),
                     spectrum_series(result.anti_aliased.combined, "anti-aliased",
                                     kPalette[3])});
  }
  write_manifest(dir, "scan", o, cfg);
  std::cout << "wrote scan results to " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- patterns

std::string token_file_label(const std::string& token) {
  std::string out = token;
  std::replace(out.begin(), out.end(), ':', '-');
  return out;
}

int cmd_patterns(const CommonOpts& o) {
  config::Config cfg = load(o);
  if (cfg.analysis.entries.empty()) {
    throw std::runtime_error("no analysis entries configured (set [analysis] entries)");
  }
  const fs::path dir = prepare_out_dir(cfg);

  using EK = config::AnalysisEntry::Kind;
  std::vector<analysis::ErrorProfile> profiles;
  std::vector<std::string> profile_tokens;
  csv::Writer skipped({"entry", "pattern", "reason"});
  bool any_skipped = false;

  for (const auto& entry : cfg.analysis.entries) {
    if (entry.kind == EK::Exhaustive) {
      const auto set = analysis::enumerate_patterns(entry.n, 3, {});
      csv::Writer w({"index", "pattern"});
      for (std::size_t i = 0; i < set.size(); ++i) {
        w.row({std::to_string(i), pattern_label(set[i])});
      }
      w.save(dir / ("enumerated_" + token_file_label(entry.token) + ".csv"));
      continue;
    }

    sensor::FlickerPattern pat{};
    analysis::PatternMode mode = analysis::PatternMode::Fixed;
    switch (entry.kind) {
      case EK::Identity: pat = sensor::identity_pattern(entry.n); break;
      case EK::Chosen: pat = sensor::chosen_pattern(entry.n); break;
      case EK::Demo: pat = sensor::demo_pattern(entry.n); break;
      case EK::Candidate: pat = sensor::candidate_pattern(entry.n, entry.candidate_id); break;
      case EK::Random: {
        if (entry.n < 3) {
          throw std::runtime_error("entry '" + entry.token +
                                   "': random mode needs n >= 3");
        }
        // Random mode redraws an n x 3 full-rank code every frame; the
        // carrier pattern only fixes the sub-step count and the three color
        // channels the simulated camera has.
        std::vector<std::vector<int>> ch(3, std::vector<int>(entry.n, 0));
        for (int i = 0; i < entry.n; ++i) ch[i % 3][i] = 1;
        pat = sensor::FlickerPattern::from_channels(ch);
        mode = analysis::PatternMode::RandomPerFrame;
        break;
      }
      case EK::Exhaustive: break;  // handled above
    }
    if (mode == analysis::PatternMode::Fixed && !pat.full_column_rank()) {
      skipped.row({entry.token, pattern_label(pat), "rank deficient"});
      any_skipped = true;
      continue;
    }
    analysis::EnsembleSpec es = cfg.analysis.ensemble;
    if (cfg.analysis.nyquist_cap) {
      es.freq_hi_hz = std::min(es.freq_hi_hz,
                               static_cast<double>(entry.n) * cfg.cam.fps / 2.0);
      if (!(es.freq_lo_hz < es.freq_hi_hz)) {
        throw std::runtime_error("entry '" + entry.token +
                                 "': nyquist cap leaves an empty frequency range");
      }
    }
    profiles.push_back(
        analysis::evaluate_pattern(pat, es, cfg.cam, mode, cfg.analysis.bin_hz));
    profile_tokens.push_back(entry.token);
  }

  if (!profiles.empty()) {
    csv::Writer w({"entry", "pattern", "n", "f_lo", "f_hi", "mean_l2", "mean_l2_fine",
                   "mean_cosine", "baseline_l2", "baseline_l2_fine", "trials"});
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      const auto& pr = profiles[p];
      for (std::size_t b = 0; b < pr.freq_bins.size(); ++b) {
        w.row({profile_tokens[p], pr.pattern_id, std::to_string(pr.n_factor),
               fd(pr.freq_bins[b].first), fd(pr.freq_bins[b].second), fd(pr.mean_l2[b]),
               fd(pr.mean_l2_fine[b]), fd(pr.mean_cosine[b]), fd(pr.baseline_l2[b]),
               fd(pr.baseline_l2_fine[b]), std::to_string(pr.trial_counts[b])});
      }
    }
    w.save(dir / "profiles.csv");
  }
  if (any_skipped) skipped.save(dir / "skipped.csv");

  if (cfg.analysis.winners) {
    if (profiles.empty()) throw std::runtime_error("winner table needs profiled entries");
    for (const auto ref : {analysis::ErrorRef::SubstepMean, analysis::ErrorRef::FineGrid}) {
      const auto winners = analysis::band_winner_table(profiles, cfg.cam.fps, ref);
      csv::Writer w({"f_lo", "f_hi", "n", "pattern", "mean_error"});
      for (const auto& win : winners) {
        w.row({fd(win.f_lo), fd(win.f_hi), std::to_string(win.n_factor), win.pattern_id,
               fd(win.mean_error)});
      }
      w.save(dir / (ref == analysis::ErrorRef::SubstepMean ? "winners.csv"
                                                           : "winners_fine.csv"));
    }
  }

  if (!cfg.analysis.ranges.empty()) {
    csv::Writer w({"n", "f_lo", "f_hi", "mean_l2", "mean_l2_fine", "normalized"});
    double basis = 0.0;
    for (const auto& rg : cfg.analysis.ranges) {
      const analysis::ErrorProfile* match = nullptr;
      for (const auto& pr : profiles) {
        if (pr.n_factor == rg.n) {
          match = &pr;
          break;
        }
      }
      if (!match) {
        throw std::runtime_error("range report needs a profiled entry with n = " +
                                 std::to_string(rg.n));
      }
      const double sub =
          analysis::band_mean_error(*match, rg.lo, rg.hi, analysis::ErrorRef::SubstepMean);
      const double fine =
          analysis::band_mean_error(*match, rg.lo, rg.hi, analysis::ErrorRef::FineGrid);
      if (basis == 0.0) basis = fine;
      w.row({std::to_string(rg.n), fd(rg.lo), fd(rg.hi), fd(sub), fd(fine),
             fd(basis > 0.0 ? fine / basis : 0.0)});
    }
    w.save(dir / "ranges.csv");
  }

  if (cfg.output.svg && !profiles.empty()) {
    for (const auto ref : {analysis::ErrorRef::SubstepMean, analysis::ErrorRef::FineGrid}) {
      std::vector<svg::Series> series;
      for (std::size_t p = 0; p < profiles.size(); ++p) {
        const auto& pr = profiles[p];
        svg::Series s;
        s.label = profile_tokens[p];
        s.color = kPalette[p % kPalette.size()];
        for (std::size_t b = 0; b < pr.freq_bins.size(); ++b) {
          const double mid = 0.5 * (pr.freq_bins[b].first + pr.freq_bins[b].second);
          const double err = ref == analysis::ErrorRef::SubstepMean ? pr.mean_l2[b]
                                                                    : pr.mean_l2_fine[b];
          s.points.emplace_back(mid, err);
        }
        series.push_back(std::move(s));
      }
      // The plain-camera baseline of the first profile, for reference.
      svg::Series base;
      base.label = "camera (no upsampling)";
      base.color = "#000000";
      const auto& first = profiles.front();
      for (std::size_t b = 0; b < first.freq_bins.size(); ++b) {
        const double mid = 0.5 * (first.freq_bins[b].first + first.freq_bins[b].second);
        const double err = ref == analysis::ErrorRef::SubstepMean
                               ? first.baseline_l2[b]
                               : first.baseline_l2_fine[b];
        base.points.emplace_back(mid, err);
      }
      series.push_back(std::move(base));
      svg::PlotSpec plot;
      plot.title = ref == analysis::ErrorRef::SubstepMean
                       ? "mean L2 error vs sub-step means"
                       : "mean L2 error vs fine grid";
      plot.x_label = "frequency [Hz]";
      plot.y_label = "mean L2 error";
      svg::write_plot(dir / (ref == analysis::ErrorRef::SubstepMean
                                 ? "profiles_l2.svg"
                                 : "profiles_l2_fine.svg"),
                      plot, series);
    }
  }

  write_manifest(dir, "patterns", o, cfg);
  std::cout << "wrote pattern study to " << dir.string() << "\n";
  return 0;
}

// --------------------------------------------------------------------- snr

int cmd_snr(const CommonOpts& o) {
  config::Config cfg = load(o);
  const auto pattern = config::make_pattern(cfg.pattern, cfg.cam.n_factor);
  if (!pattern.full_column_rank()) {
    throw std::runtime_error("pattern " + pattern_label(pattern) +
                             " is rank deficient");
  }
  analysis::EnsembleSpec es = cfg.analysis.ensemble;
  es.n_trials = cfg.snr.cosine_trials;
  es.amplitude = cfg.snr.amplitude;
  analysis::AlphaSweepOptions options;
  options.cam = cfg.cam;
  options.env_intensity = cfg.snr.env_intensity;
  options.noise = cfg.noise;
  options.snr_trials = cfg.snr.trials;
  options.scene_offset = cfg.snr.offset;
  const auto points = analysis::alpha_sweep(cfg.snr.alphas, pattern, es, options);

  const fs::path dir = prepare_out_dir(cfg);
  csv::Writer w({"alpha", "snr_ratio_measured", "snr_ratio_sigma", "snr_ratio_bound",
                 "cosine_error", "signal_ratio"});
  for (const auto& pt : points) {
    w.row({fd(pt.alpha), fd(pt.snr_ratio_measured), fd(pt.snr_ratio_sigma),
           fd(pt.snr_ratio_bound), fd(pt.mean_cosine_error), fd(pt.signal_ratio)});
  }
  w.save(dir / "snr.csv");

  if (cfg.output.svg) {
    svg::Series measured, bound, cosine;
    measured.label = "measured";
    measured.color = kPalette[0];
    bound.label = "bound";
    bound.color = kPalette[3];
    cosine.label = "cosine error";
    cosine.color = kPalette[2];
    for (const auto& pt : points) {
      if (std::isfinite(pt.snr_ratio_measured)) {
        measured.points.emplace_back(pt.alpha, pt.snr_ratio_measured);
      }
      if (std::isfinite(pt.snr_ratio_bound)) {
        bound.points.emplace_back(pt.alpha, pt.snr_ratio_bound);
      }
      cosine.points.emplace_back(pt.alpha, pt.mean_cosine_error);
    }
    svg::PlotSpec snr_plot;
    snr_plot.title = "SNR ratio vs alpha";
    snr_plot.x_label = "alpha";
    snr_plot.y_label = "SNR ratio";
    snr_plot.log_x = true;
    svg::write_plot(dir / "snr_ratio.svg", snr_plot, {measured, bound});
    svg::PlotSpec cos_plot;
    cos_plot.title = "reconstruction cosine error vs alpha";
    cos_plot.x_label = "alpha";
    cos_plot.y_label = "cosine error [rad]";
    cos_plot.log_x = true;
    svg::write_plot(dir / "cosine_error.svg", cos_plot, {cosine});
  }
  write_manifest(dir, "snr", o, cfg);
  std::cout << "wrote snr sweep to " << dir.string() << "\n";
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"temporal super-resolution simulation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts sim_o, rec_o, scan_o, pat_o, snr_o;
  std::string frames_path, spatial_path, aa_mode_flag;
  int rc = 0;

  auto* sim = app.add_subcommand("simulate", "capture coded frames of a synthetic scene");
  add_common(sim, sim_o);
  sim->callback([&] { rc = cmd_simulate(sim_o); });

  auto* rec = app.add_subcommand("reconstruct",
                                 "recover the sub-step intensity trace from frames");
  add_common(rec, rec_o);
  rec->add_option("--frames", frames_path, "frames.csv to reconstruct from");
  rec->add_option("--spatial", spatial_path,
                  "five-pixel patch CSV for the joint spatial solve");
  rec->callback([&] { rc = cmd_reconstruct(rec_o, frames_path, spatial_path); });

  auto* scan = app.add_subcommand("scan", "multi-window spectral scan with alias removal");
  add_common(scan, scan_o);
  scan->add_option("--aa-mode", aa_mode_flag, "composition or literal")
      ->check(CLI::IsMember({"composition", "literal"}));
  scan->callback([&] { rc = cmd_scan(scan_o, aa_mode_flag); });

  auto* pat = app.add_subcommand("patterns", "ensemble error study of flicker patterns");
  add_common(pat, pat_o);
  pat->callback([&] { rc = cmd_patterns(pat_o); });

  auto* snr = app.add_subcommand("snr", "alpha sweep of SNR gain and reconstruction error");
  add_common(snr, snr_o);
  snr->callback([&] { rc = cmd_snr(snr_o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace tsr::cli
