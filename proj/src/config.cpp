#include "tsr/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "tsr/csv.hpp"

namespace tsr::config {

namespace {

struct RawEntry {
  std::string key;
  std::string value;
  int line = 0;
  bool used = false;
};

struct RawSection {
  std::string name;
  int line = 0;
  std::vector<RawEntry> entries;
};

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

// Consumes entries of one section and reports anything left over as an
// unknown key, so typos never pass silently.
class SectionReader {
 public:
  SectionReader(const std::string& source, RawSection* section)
      : source_(source), section_(section) {}

  const std::string& source() const { return source_; }
  int section_line() const { return section_ ? section_->line : 0; }

  std::optional<RawEntry> take(const std::string& key) {
    if (!section_) return std::nullopt;
    std::optional<RawEntry> found;
    for (auto& e : section_->entries) {
      if (e.key != key) continue;
      if (found) fail(source_, e.line, "duplicate key '" + key + "'");
      e.used = true;
      found = e;
    }
    return found;
  }

  std::vector<RawEntry> take_all(const std::string& key) {
    std::vector<RawEntry> out;
    if (!section_) return out;
    for (auto& e : section_->entries) {
      if (e.key != key) continue;
      e.used = true;
      out.push_back(e);
    }
    return out;
  }

  void finish() const {
    if (!section_) return;
    for (const auto& e : section_->entries) {
      if (!e.used) {
        fail(source_, e.line,
             "unknown key '" + e.key + "' in [" + section_->name + "]");
      }
    }
  }

 private:
  std::string source_;
  RawSection* section_;
};

double parse_double(const SectionReader& r, const RawEntry& e) {
  const std::string v = trim(e.value);
  if (v == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    fail(r.source(), e.line, "'" + e.key + "' expects a number, got '" + v + "'");
  }
}

long long parse_int(const SectionReader& r, const RawEntry& e, const std::string& text) {
  const std::string v = trim(text);
  long long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    fail(r.source(), e.line, "'" + e.key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

long long parse_int(const SectionReader& r, const RawEntry& e) {
  return parse_int(r, e, e.value);
}

bool parse_bool(const SectionReader& r, const RawEntry& e) {
  const std::string v = trim(e.value);
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  fail(r.source(), e.line, "'" + e.key + "' expects true or false, got '" + v + "'");
}

std::vector<double> parse_double_list(const SectionReader& r, const RawEntry& e) {
  std::vector<double> out;
  for (const auto& part : split(e.value, ',')) {
    RawEntry item = e;
    item.value = part;
    out.push_back(parse_double(r, item));
  }
  return out;
}

void check(const SectionReader& r, const RawEntry& e, bool ok, const std::string& msg) {
  if (!ok) fail(r.source(), e.line, "'" + e.key + "': " + msg);
}

std::vector<RawSection> tokenize(const std::string& text, const std::string& source) {
  std::vector<RawSection> sections;
  sections.push_back({"", 0, {}});  // top level
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) fail(source, lineno, "malformed section header");
      sections.push_back({trim(t.substr(1, t.size() - 2)), lineno, {}});
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(source, lineno, "expected 'key = value'");
    RawEntry e;
    e.key = trim(t.substr(0, eq));
    e.value = trim(t.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty()) fail(source, lineno, "empty key");
    sections.back().entries.push_back(std::move(e));
  }
  return sections;
}

RawSection* find_section(std::vector<RawSection>& sections, const std::string& name) {
  RawSection* found = nullptr;
  for (auto& s : sections) {
    if (s.name != name) continue;
    if (found) fail("config", s.line, "duplicate section [" + name + "]");
    found = &s;
  }
  return found;
}

void apply_camera(SectionReader r, Config& cfg, std::optional<int>* explicit_n) {
  if (auto e = r.take("fps")) {
    cfg.cam.fps = parse_double(r, *e);
    check(r, *e, cfg.cam.fps > 0.0, "must be positive");
  }
  if (auto e = r.take("n")) {
    const long long n = parse_int(r, *e);
    check(r, *e, n >= 1 && n <= 64, "must be in [1, 64]");
    cfg.cam.n_factor = static_cast<int>(n);
    *explicit_n = cfg.cam.n_factor;
  }
  if (auto e = r.take("exposure_fill")) {
    cfg.cam.exposure_fill = parse_double(r, *e);
    check(r, *e, cfg.cam.exposure_fill > 0.0 && cfg.cam.exposure_fill <= 1.0,
          "must be in (0, 1]");
  }
  r.finish();
}

void apply_signal(SectionReader r, Config& cfg) {
  auto& sc = cfg.signal;
  if (auto e = r.take("type")) {
    const std::string v = trim(e->value);
    if (v == "sinusoid_mix") {
      sc.type = SignalConfig::Type::SinusoidMix;
    } else if (v == "square_mix") {
      sc.type = SignalConfig::Type::SquareMix;
    } else {
      fail(r.source(), e->line, "'type' must be sinusoid_mix or square_mix");
    }
  }
  for (const auto& e : r.take_all("tone")) {
    const auto parts = split(e.value, ',');
    check(r, e, parts.size() == 2 || parts.size() == 3,
          "expects amplitude,freq_hz[,phase_rad]");
    RawEntry item = e;
    signals::ToneComponent tc;
    item.value = parts[0];
    tc.amplitude = parse_double(r, item);
    item.value = parts[1];
    tc.freq_hz = parse_double(r, item);
    if (parts.size() == 3) {
      item.value = parts[2];
      tc.phase_rad = parse_double(r, item);
    }
    check(r, e, std::isfinite(tc.amplitude), "amplitude must be finite");
    check(r, e, tc.freq_hz > 0.0 && std::isfinite(tc.freq_hz),
          "frequency must be positive");
    sc.tones.push_back(tc);
  }
  for (const auto& e : r.take_all("square")) {
    RawEntry item = e;
    const double f = parse_double(r, item);
    check(r, e, f > 0.0 && std::isfinite(f), "frequency must be positive");
    sc.square_freqs.push_back(f);
  }
  if (auto e = r.take("duration_s")) {
    sc.duration_s = parse_double(r, *e);
    check(r, *e, sc.duration_s > 0.0, "must be positive");
  }
  if (auto e = r.take("grid_rate")) {
    sc.grid_rate = parse_double(r, *e);
    check(r, *e, sc.grid_rate >= 0.0 && std::isfinite(sc.grid_rate),
          "must be non-negative");
  }
  r.finish();
  if (!sc.tones.empty() && sc.type == SignalConfig::Type::SquareMix) {
    fail(r.source(), r.section_line(), "square_mix signal cannot carry tone entries");
  }
  if (!sc.square_freqs.empty() && sc.type == SignalConfig::Type::SinusoidMix) {
    fail(r.source(), r.section_line(), "sinusoid_mix signal cannot carry square entries");
  }
}

void apply_pattern(SectionReader r, Config& cfg, std::optional<int> explicit_n) {
  auto& pc = cfg.pattern;
  const auto preset = r.take("preset");
  const auto cand = r.take("candidate_id");
  std::vector<std::pair<std::string, RawEntry>> rows;
  for (const char* ch : {"b", "g", "r"}) {
    if (auto e = r.take(ch)) rows.emplace_back(ch, *e);
  }
  r.finish();

  if (!rows.empty()) {
    if (preset) {
      fail(r.source(), preset->line, "give either 'preset' or explicit channel rows, not both");
    }
    pc.kind = PatternConfig::Kind::Explicit;
    for (const auto& [name, e] : rows) {
      const std::string bits = trim(e.value);
      check(r, e, !bits.empty(), "row must be non-empty");
      check(r, e, bits.find_first_not_of("01") == std::string::npos,
            "row must be a string of 0s and 1s");
      if (!pc.rows.empty()) {
        check(r, e, bits.size() == pc.rows.front().size(),
              "all channel rows must have equal length");
      }
      pc.channel_names.push_back(name);
      pc.rows.push_back(bits);
    }
    const int len = static_cast<int>(pc.rows.front().size());
    if (explicit_n && *explicit_n != len) {
      fail(r.source(), rows.front().second.line,
           "pattern rows have length " + std::to_string(len) + " but camera n = " +
               std::to_string(*explicit_n));
    }
    cfg.cam.n_factor = len;
  } else if (preset) {
    const std::string v = trim(preset->value);
    if (v == "identity") {
      pc.kind = PatternConfig::Kind::Identity;
    } else if (v == "chosen") {
      pc.kind = PatternConfig::Kind::Chosen;
    } else if (v == "demo") {
      pc.kind = PatternConfig::Kind::Demo;
    } else if (v == "candidate") {
      pc.kind = PatternConfig::Kind::Candidate;
      if (!cand) {
        fail(r.source(), preset->line, "preset 'candidate' requires candidate_id");
      }
    } else {
      fail(r.source(), preset->line,
           "'preset' must be identity, chosen, demo or candidate");
    }
  }
  if (cand) {
    if (pc.kind != PatternConfig::Kind::Candidate) {
      fail(r.source(), cand->line, "candidate_id is only valid with preset = candidate");
    }
    const long long id = parse_int(r, *cand);
    check(r, *cand, id >= 0 && id <= 4, "must be in [0, 4]");
    pc.candidate_id = static_cast<int>(id);
  }
}

void apply_illumination(SectionReader r, Config& cfg) {
  auto& il = cfg.illum;
  if (auto e = r.take("flicker")) {
    il.flicker_intensity = parse_double(r, *e);
    check(r, *e, il.flicker_intensity > 0.0 && std::isfinite(il.flicker_intensity),
          "must be positive");
  }
  const auto alpha = r.take("alpha");
  const auto env = r.take("env");
  if (alpha && env) {
    fail(r.source(), env->line, "give either 'alpha' or 'env', not both");
  }
  if (env) {
    il.env_intensity = parse_double(r, *env);
    check(r, *env, il.env_intensity >= 0.0, "must be non-negative");
  }
  if (alpha) {
    const double a = parse_double(r, *alpha);
    check(r, *alpha, a > 0.0, "must be positive");
    il.env_intensity = std::isinf(a) ? 0.0 : il.flicker_intensity / a;
  }
  if (auto e = r.take("gamma")) {
    il.gammas = parse_double_list(r, *e);
    for (double g : il.gammas) {
      check(r, *e, g > 0.0 && g <= 1.0, "each gamma must be in (0, 1]");
    }
  }
  r.finish();
}

void apply_noise(SectionReader r, Config& cfg) {
  if (auto e = r.take("dark_current")) {
    cfg.noise.dark_current = parse_double(r, *e);
    check(r, *e, cfg.noise.dark_current >= 0.0, "must be non-negative");
  }
  if (auto e = r.take("read_noise")) {
    cfg.noise.read_noise = parse_double(r, *e);
    check(r, *e, cfg.noise.read_noise >= 0.0, "must be non-negative");
  }
  if (auto e = r.take("shot")) cfg.noise.shot_noise_on = parse_bool(r, *e);
  r.finish();
}

void apply_scanning(SectionReader r, Config& cfg) {
  auto& sc = cfg.scan;
  if (auto e = r.take("n_sequence")) {
    sc.n_sequence.clear();
    for (const auto& part : split(e->value, ',')) {
      const long long n = parse_int(r, *e, part);
      check(r, *e, n >= 1 && n <= 64, "each n must be in [1, 64]");
      sc.n_sequence.push_back(static_cast<int>(n));
    }
    check(r, *e, !sc.n_sequence.empty(), "must list at least one n");
  }
  if (auto e = r.take("aa_mode")) {
    const std::string v = trim(e->value);
    if (v == "composition") {
      sc.aa_mode = scanning::AaMode::Composition;
    } else if (v == "literal") {
      sc.aa_mode = scanning::AaMode::Literal;
    } else {
      fail(r.source(), e->line, "'aa_mode' must be composition or literal");
    }
  }
  if (auto e = r.take("averaging")) {
    const std::string v = trim(e->value);
    if (v == "complex") {
      sc.averaging = scanning::Averaging::Complex;
    } else if (v == "magnitude") {
      sc.averaging = scanning::Averaging::Magnitude;
    } else {
      fail(r.source(), e->line, "'averaging' must be complex or magnitude");
    }
  }
  if (auto e = r.take("noise_floor")) {
    sc.noise_floor = parse_double(r, *e);
    check(r, *e, sc.noise_floor >= 0.0 && sc.noise_floor <= 1.0, "must be in [0, 1]");
  }
  r.finish();
}

AnalysisEntry parse_entry_token(const SectionReader& r, const RawEntry& e,
                                const std::string& token) {
  const auto parts = split(token, ':');
  AnalysisEntry out;
  out.token = token;
  const std::string kind = parts.empty() ? "" : parts[0];
  std::size_t want = 2;
  if (kind == "identity") {
    out.kind = AnalysisEntry::Kind::Identity;
  } else if (kind == "chosen") {
    out.kind = AnalysisEntry::Kind::Chosen;
  } else if (kind == "demo") {
    out.kind = AnalysisEntry::Kind::Demo;
  } else if (kind == "random") {
    out.kind = AnalysisEntry::Kind::Random;
  } else if (kind == "exhaustive") {
    out.kind = AnalysisEntry::Kind::Exhaustive;
  } else if (kind == "candidate") {
    out.kind = AnalysisEntry::Kind::Candidate;
    want = 3;
  } else {
    fail(r.source(), e.line,
         "entry '" + token +
             "': kind must be identity, chosen, demo, candidate, random or exhaustive");
  }
  check(r, e, parts.size() == want,
        "entry '" + token + "' must look like kind:n" +
            (want == 3 ? std::string(":id") : std::string()));
  const long long n = parse_int(r, e, parts[1]);
  check(r, e, n >= 1 && n <= 64, "entry '" + token + "': n must be in [1, 64]");
  out.n = static_cast<int>(n);
  if (want == 3) {
    const long long id = parse_int(r, e, parts[2]);
    check(r, e, id >= 0 && id <= 4, "entry '" + token + "': id must be in [0, 4]");
    out.candidate_id = static_cast<int>(id);
  }
  return out;
}

void apply_analysis(SectionReader r, Config& cfg) {
  auto& ac = cfg.analysis;
  if (auto e = r.take("trials")) {
    const long long t = parse_int(r, *e);
    check(r, *e, t > 0, "must be positive");
    ac.ensemble.n_trials = static_cast<int>(t);
  }
  if (auto e = r.take("freq_lo")) {
    ac.ensemble.freq_lo_hz = parse_double(r, *e);
    check(r, *e, ac.ensemble.freq_lo_hz >= 0.0, "must be non-negative");
  }
  if (auto e = r.take("freq_hi")) {
    ac.ensemble.freq_hi_hz = parse_double(r, *e);
    check(r, *e, ac.ensemble.freq_hi_hz > 0.0, "must be positive");
  }
  if (auto e = r.take("duration_s")) {
    ac.ensemble.duration_s = parse_double(r, *e);
    check(r, *e, ac.ensemble.duration_s > 0.0, "must be positive");
  }
  if (auto e = r.take("amplitude")) {
    ac.ensemble.amplitude = parse_double(r, *e);
    check(r, *e, ac.ensemble.amplitude > 0.0, "must be positive");
  }
  if (auto e = r.take("bin_hz")) {
    ac.bin_hz = parse_double(r, *e);
    check(r, *e, ac.bin_hz > 0.0, "must be positive");
  }
  if (auto e = r.take("entries")) {
    for (const auto& token : split(e->value, ',')) {
      if (token.empty()) continue;
      ac.entries.push_back(parse_entry_token(r, *e, token));
    }
    check(r, *e, !ac.entries.empty(), "must list at least one entry");
  }
  if (auto e = r.take("winners")) ac.winners = parse_bool(r, *e);
  if (auto e = r.take("nyquist_cap")) ac.nyquist_cap = parse_bool(r, *e);
  for (const auto& e : r.take_all("range")) {
    // n:lo-hi, e.g. 5:23-25
    const auto head = split(e.value, ':');
    check(r, e, head.size() == 2, "expects n:lo-hi");
    const auto span = split(head[1], '-');
    check(r, e, span.size() == 2, "expects n:lo-hi");
    AnalysisConfig::Range rg;
    rg.n = static_cast<int>(parse_int(r, e, head[0]));
    RawEntry item = e;
    item.value = span[0];
    rg.lo = parse_double(r, item);
    item.value = span[1];
    rg.hi = parse_double(r, item);
    check(r, e, rg.n >= 1, "n must be positive");
    check(r, e, rg.lo < rg.hi, "range must have lo < hi");
    ac.ranges.push_back(rg);
  }
  r.finish();
  if (ac.ensemble.freq_lo_hz >= ac.ensemble.freq_hi_hz) {
    fail(r.source(), r.section_line(), "analysis needs freq_lo < freq_hi");
  }
}

void apply_snr(SectionReader r, Config& cfg) {
  auto& sn = cfg.snr;
  if (auto e = r.take("alphas")) {
    sn.alphas = parse_double_list(r, *e);
    check(r, *e, !sn.alphas.empty(), "must list at least one alpha");
    for (double a : sn.alphas) check(r, *e, a > 0.0, "each alpha must be positive");
  }
  if (auto e = r.take("trials")) {
    const long long t = parse_int(r, *e);
    check(r, *e, t > 0, "must be positive");
    sn.trials = static_cast<int>(t);
  }
  if (auto e = r.take("cosine_trials")) {
    const long long t = parse_int(r, *e);
    check(r, *e, t > 0, "must be positive");
    sn.cosine_trials = static_cast<int>(t);
  }
  if (auto e = r.take("env")) {
    sn.env_intensity = parse_double(r, *e);
    check(r, *e, sn.env_intensity > 0.0 && std::isfinite(sn.env_intensity),
          "must be positive");
  }
  if (auto e = r.take("amplitude")) {
    sn.amplitude = parse_double(r, *e);
    check(r, *e, sn.amplitude > 0.0, "must be positive");
  }
  if (auto e = r.take("offset")) {
    sn.offset = parse_double(r, *e);
    check(r, *e, sn.offset >= 1.0,
          "must be >= 1 (offset is in units of the amplitude) so the scene "
          "stays non-negative");
  }
  r.finish();
}

void apply_solver(SectionReader r, Config& cfg) {
  if (auto e = r.take("w_t")) {
    cfg.solver.w_t = parse_double(r, *e);
    check(r, *e, cfg.solver.w_t > 0.0, "must be positive");
  }
  if (auto e = r.take("w_s")) {
    cfg.solver.w_s = parse_double(r, *e);
    check(r, *e, cfg.solver.w_s >= 0.0, "must be non-negative");
  }
  r.finish();
}

void apply_output(SectionReader r, Config& cfg) {
  if (auto e = r.take("dir")) cfg.output.dir = trim(e->value);
  if (auto e = r.take("format")) {
    const std::string v = trim(e->value);
    if (v == "csv") {
      cfg.output.svg = false;
    } else if (v == "csv+svg") {
      cfg.output.svg = true;
    } else {
      fail(r.source(), e->line, "'format' must be csv or csv+svg");
    }
  }
  r.finish();
}

}  // namespace

Config parse_config(const std::string& text, const std::string& source_name) {
  auto sections = tokenize(text, source_name);
  static const std::vector<std::string> known = {
      "camera", "signal",   "pattern", "illumination", "noise",
      "scanning", "analysis", "snr",     "solver",       "output"};
  for (const auto& s : sections) {
    if (s.name.empty()) continue;
    if (std::find(known.begin(), known.end(), s.name) == known.end()) {
      fail(source_name, s.line, "unknown section [" + s.name + "]");
    }
  }

  Config cfg;
  {
    SectionReader top(source_name, &sections.front());
    if (auto e = top.take("seed")) {
      const long long s = parse_int(top, *e);
      check(top, *e, s >= 0, "must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    }
    top.finish();
  }

  std::optional<int> explicit_n;
  apply_camera({source_name, find_section(sections, "camera")}, cfg, &explicit_n);
  apply_signal({source_name, find_section(sections, "signal")}, cfg);
  apply_pattern({source_name, find_section(sections, "pattern")}, cfg, explicit_n);
  apply_illumination({source_name, find_section(sections, "illumination")}, cfg);
  apply_noise({source_name, find_section(sections, "noise")}, cfg);
  apply_scanning({source_name, find_section(sections, "scanning")}, cfg);
  apply_analysis({source_name, find_section(sections, "analysis")}, cfg);
  apply_snr({source_name, find_section(sections, "snr")}, cfg);
  apply_solver({source_name, find_section(sections, "solver")}, cfg);
  apply_output({source_name, find_section(sections, "output")}, cfg);

  cfg.analysis.ensemble.seed = cfg.seed;
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.filename().string());
}

namespace {

std::string fmt(double v) { return csv::format_double(v); }

}  // namespace

std::string dump_config(const Config& cfg) {
  std::string out;
  out += "seed = " + std::to_string(cfg.seed) + "\n\n";

  out += "[camera]\n";
  out += "fps = " + fmt(cfg.cam.fps) + "\n";
  out += "n = " + std::to_string(cfg.cam.n_factor) + "\n";
  out += "exposure_fill = " + fmt(cfg.cam.exposure_fill) + "\n\n";

  out += "[signal]\n";
  out += std::string("type = ") +
         (cfg.signal.type == SignalConfig::Type::SinusoidMix ? "sinusoid_mix"
                                                             : "square_mix") +
         "\n";
  for (const auto& t : cfg.signal.tones) {
    out += "tone = " + fmt(t.amplitude) + "," + fmt(t.freq_hz) + "," +
           fmt(t.phase_rad) + "\n";
  }
  for (double f : cfg.signal.square_freqs) out += "square = " + fmt(f) + "\n";
  out += "duration_s = " + fmt(cfg.signal.duration_s) + "\n";
  out += "grid_rate = " + fmt(cfg.signal.grid_rate) + "\n\n";

  out += "[pattern]\n";
  switch (cfg.pattern.kind) {
    case PatternConfig::Kind::Identity: out += "preset = identity\n"; break;
    case PatternConfig::Kind::Chosen: out += "preset = chosen\n"; break;
    case PatternConfig::Kind::Demo: out += "preset = demo\n"; break;
    case PatternConfig::Kind::Candidate:
      out += "preset = candidate\n";
      out += "candidate_id = " + std::to_string(cfg.pattern.candidate_id) + "\n";
      break;
    case PatternConfig::Kind::Explicit:
      for (std::size_t i = 0; i < cfg.pattern.rows.size(); ++i) {
        out += cfg.pattern.channel_names[i] + " = " + cfg.pattern.rows[i] + "\n";
      }
      break;
  }
  out += "\n[illumination]\n";
  out += "flicker = " + fmt(cfg.illum.flicker_intensity) + "\n";
  out += "env = " + fmt(cfg.illum.env_intensity) + "\n";
  if (!cfg.illum.gammas.empty()) {
    out += "gamma = ";
    for (std::size_t i = 0; i < cfg.illum.gammas.size(); ++i) {
      if (i) out += ",";
      out += fmt(cfg.illum.gammas[i]);
    }
    out += "\n";
  }

  out += "\n[noise]\n";
  out += "dark_current = " + fmt(cfg.noise.dark_current) + "\n";
  out += "read_noise = " + fmt(cfg.noise.read_noise) + "\n";
  out += std::string("shot = ") + (cfg.noise.shot_noise_on ? "true" : "false") + "\n";

  out += "\n[scanning]\n";
  out += "n_sequence = ";
  for (std::size_t i = 0; i < cfg.scan.n_sequence.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(cfg.scan.n_sequence[i]);
  }
  out += "\n";
  out += std::string("aa_mode = ") +
         (cfg.scan.aa_mode == scanning::AaMode::Composition ? "composition" : "literal") +
         "\n";
  out += std::string("averaging = ") +
         (cfg.scan.averaging == scanning::Averaging::Complex ? "complex" : "magnitude") +
         "\n";
  out += "noise_floor = " + fmt(cfg.scan.noise_floor) + "\n";

  out += "\n[analysis]\n";
  out += "trials = " + std::to_string(cfg.analysis.ensemble.n_trials) + "\n";
  out += "freq_lo = " + fmt(cfg.analysis.ensemble.freq_lo_hz) + "\n";
  out += "freq_hi = " + fmt(cfg.analysis.ensemble.freq_hi_hz) + "\n";
  out += "duration_s = " + fmt(cfg.analysis.ensemble.duration_s) + "\n";
  out += "amplitude = " + fmt(cfg.analysis.ensemble.amplitude) + "\n";
  out += "bin_hz = " + fmt(cfg.analysis.bin_hz) + "\n";
  if (!cfg.analysis.entries.empty()) {
    out += "entries = ";
    for (std::size_t i = 0; i < cfg.analysis.entries.size(); ++i) {
      if (i) out += ",";
      out += cfg.analysis.entries[i].token;
    }
    out += "\n";
  }
  out += std::string("winners = ") + (cfg.analysis.winners ? "true" : "false") + "\n";
  out += std::string("nyquist_cap = ") + (cfg.analysis.nyquist_cap ? "true" : "false") +
         "\n";
  for (const auto& rg : cfg.analysis.ranges) {
    out += "range = " + std::to_string(rg.n) + ":" + fmt(rg.lo) + "-" + fmt(rg.hi) + "\n";
  }

  out += "\n[snr]\n";
  out += "alphas = ";
  for (std::size_t i = 0; i < cfg.snr.alphas.size(); ++i) {
    if (i) out += ",";
    out += fmt(cfg.snr.alphas[i]);
  }
  out += "\n";
  out += "trials = " + std::to_string(cfg.snr.trials) + "\n";
  out += "cosine_trials = " + std::to_string(cfg.snr.cosine_trials) + "\n";
  out += "env = " + fmt(cfg.snr.env_intensity) + "\n";
  out += "amplitude = " + fmt(cfg.snr.amplitude) + "\n";
  out += "offset = " + fmt(cfg.snr.offset) + "\n";

  out += "\n[solver]\n";
  out += "w_t = " + fmt(cfg.solver.w_t) + "\n";
  out += "w_s = " + fmt(cfg.solver.w_s) + "\n";

  out += "\n[output]\n";
  out += "dir = " + cfg.output.dir + "\n";
  out += std::string("format = ") + (cfg.output.svg ? "csv+svg" : "csv") + "\n";
  return out;
}

sensor::FlickerPattern make_pattern(const PatternConfig& pc, int n) {
  switch (pc.kind) {
    case PatternConfig::Kind::Identity:
      return sensor::identity_pattern(n);
    case PatternConfig::Kind::Chosen:
      return sensor::chosen_pattern(n);
    case PatternConfig::Kind::Demo:
      return sensor::demo_pattern(n);
    case PatternConfig::Kind::Candidate:
      return sensor::candidate_pattern(n, pc.candidate_id);
    case PatternConfig::Kind::Explicit: {
      if (static_cast<int>(pc.rows.front().size()) != n) {
        throw std::runtime_error("pattern rows have length " +
                                 std::to_string(pc.rows.front().size()) +
                                 " but n = " + std::to_string(n));
      }
      std::vector<std::vector<int>> channels;
      for (const auto& row : pc.rows) {
        std::vector<int> bits;
        for (char c : row) bits.push_back(c == '1' ? 1 : 0);
        channels.push_back(std::move(bits));
      }
      return sensor::FlickerPattern::from_channels(channels, pc.channel_names);
    }
  }
  throw std::logic_error("unreachable pattern kind");
}

double resolve_grid_rate(const Config& cfg, const std::vector<int>& n_factors) {
  long long base_steps = 1;
  for (int n : n_factors) base_steps = std::lcm(base_steps, static_cast<long long>(n));
  const double base = cfg.cam.fps * static_cast<double>(base_steps);

  double f_max = 0.0;
  for (const auto& t : cfg.signal.tones) f_max = std::max(f_max, t.freq_hz);
  for (double f : cfg.signal.square_freqs) f_max = std::max(f_max, f);

  if (cfg.signal.grid_rate > 0.0) {
    const double k = cfg.signal.grid_rate / base;
    if (std::abs(k - std::round(k)) > 1e-9 || k < 1.0 - 1e-9) {
      throw std::runtime_error(
          "grid_rate must be a whole multiple of fps * lcm(n factors) = " +
          csv::format_double(base));
    }
    return cfg.signal.grid_rate;
  }
  const double k = std::max(1.0, std::ceil(100.0 * f_max / base - 1e-9));
  return base * k;
}

signals::FineSignal build_signal(const SignalConfig& sc, double grid_rate) {
  if (sc.type == SignalConfig::Type::SinusoidMix) {
    if (sc.tones.empty()) throw std::runtime_error("signal has no tone components");
    return signals::gen_sinusoid_mix(sc.tones, sc.duration_s, grid_rate);
  }
  if (sc.square_freqs.empty()) throw std::runtime_error("signal has no square components");
  std::vector<signals::FineSignal> parts;
  for (double f : sc.square_freqs) {
    parts.push_back(signals::gen_square_wave(f, sc.duration_s, grid_rate));
  }
  return signals::superpose(parts);
}

}  // namespace tsr::config
