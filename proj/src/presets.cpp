#include "tsr/presets.hpp"

#include <array>
#include <map>
#include <utility>

namespace tsr::presets {

namespace {

// Each preset is a complete config for one of the standard studies; the
// command to run it with is noted in the leading comment.
const std::array<std::pair<const char*, const char*>, 12> kPresets = {{
    {"fig3", R"(# patterns: random per-frame codes at n = 4 against the fixed n = 3
# identity code and the plain-camera baseline.
seed = 1

[camera]
fps = 10

[analysis]
trials = 1000
freq_lo = 5
freq_hi = 30
duration_s = 5
amplitude = 1
bin_hz = 1
entries = random:4,identity:3

[output]
dir = out/fig3
)"},

    {"fig4", R"(# patterns: the five candidate codes for each n in {4, 5, 6}, each
# evaluated up to its own Nyquist limit.
seed = 1

[camera]
fps = 10

[analysis]
trials = 1000
freq_lo = 5
freq_hi = 30
duration_s = 5
amplitude = 1
bin_hz = 1
entries = candidate:4:0,candidate:4:1,candidate:4:2,candidate:4:3,candidate:4:4,candidate:5:0,candidate:5:1,candidate:5:2,candidate:5:3,candidate:5:4,candidate:6:0,candidate:6:1,candidate:6:2,candidate:6:3,candidate:6:4
nyquist_cap = true

[output]
dir = out/fig4
)"},

    {"fig5", R"(# patterns: the per-n production codes compared over the full band.
seed = 1

[camera]
fps = 10

[analysis]
trials = 1000
freq_lo = 5
freq_hi = 30
duration_s = 5
amplitude = 1
bin_hz = 1
entries = identity:3,chosen:4,chosen:5,chosen:6

[output]
dir = out/fig5
)"},

    {"fig6", R"(# patterns: production codes plus the per-band winner table.
seed = 1

[camera]
fps = 10

[analysis]
trials = 1000
freq_lo = 5
freq_hi = 30
duration_s = 5
amplitude = 1
bin_hz = 1
entries = identity:3,chosen:4,chosen:5,chosen:6
winners = true

[output]
dir = out/fig6
)"},

    {"table1", R"(# patterns: production codes with the fixed frequency-range error report.
seed = 1

[camera]
fps = 10

[analysis]
trials = 1000
freq_lo = 5
freq_hi = 30
duration_s = 5
amplitude = 1
bin_hz = 1
entries = identity:3,chosen:4,chosen:5,chosen:6
winners = true
range = 3:5-15
range = 4:15-20
range = 5:23-25
range = 6:28-30

[output]
dir = out/table1
)"},

    {"fig7-n3", R"(# simulate / reconstruct: six-tone demo scene at n = 3.
seed = 1

[camera]
fps = 10
n = 3

[signal]
type = sinusoid_mix
tone = 1,1
tone = 0.3,2
tone = 0.8,5
tone = 0.25,9
tone = 0.75,11
tone = 0.5,18
duration_s = 5

[pattern]
preset = demo

[output]
dir = out/fig7-n3
)"},

    {"fig7-n4", R"(# simulate / reconstruct: three-tone demo scene at n = 4.
seed = 1

[camera]
fps = 10
n = 4

[signal]
type = sinusoid_mix
tone = 1,1
tone = 1,6
tone = 1,11
duration_s = 5

[pattern]
preset = demo

[output]
dir = out/fig7-n4
)"},

    {"fig8-n5", R"(# simulate / reconstruct: three-tone demo scene at n = 5.
seed = 1

[camera]
fps = 10
n = 5

[signal]
type = sinusoid_mix
tone = 1,3
tone = 1,11
tone = 1,23
duration_s = 5

[pattern]
preset = demo

[output]
dir = out/fig8-n5
)"},

    {"fig8-n6", R"(# simulate / reconstruct: two-tone demo scene at n = 6.
seed = 1

[camera]
fps = 10
n = 6

[signal]
type = sinusoid_mix
tone = 1,7
tone = 1,28
duration_s = 5

[pattern]
preset = demo

[output]
dir = out/fig8-n6
)"},

    {"fig9", R"(# scan: four-square-wave scene swept through n = 3, 4, 5, 6 windows with
# alias subtraction and a 5% spectral noise floor.
seed = 1

[camera]
fps = 10

[signal]
type = square_mix
square = 12
square = 19
square = 23
square = 27
duration_s = 10

[pattern]
preset = chosen

[scanning]
n_sequence = 3,4,5,6
aa_mode = composition
averaging = complex
noise_floor = 0.05

[output]
dir = out/fig9
)"},

    {"fig13", R"(# snr: measured coded-vs-plain SNR ratio against the closed-form bound
# over a log-spaced alpha sweep.
seed = 1

[camera]
fps = 10
n = 3

[pattern]
preset = identity

[noise]
shot = true

[analysis]
freq_lo = 5
freq_hi = 15
duration_s = 5

[snr]
alphas = 0.5,1,2,5,10,50
trials = 10000
cosine_trials = 200
env = 1000
amplitude = 1
offset = 1.2

[output]
dir = out/fig13
)"},

    {"fig14", R"(# snr: reconstruction cosine error of a noisy tone scene as the flicker
# gets stronger relative to the ambient light (n = 3).
seed = 1

[camera]
fps = 10
n = 3

[pattern]
preset = identity

[noise]
shot = true

[analysis]
freq_lo = 5
freq_hi = 15
duration_s = 5

[snr]
alphas = 0.5,1,2,5,10,50
trials = 10000
cosine_trials = 500
env = 1000
amplitude = 1
offset = 1.2

[output]
dir = out/fig14
)"},
}};

}  // namespace

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : kPresets) out.emplace_back(name);
  return out;
}

const std::string* find(const std::string& name) {
  static const std::map<std::string, std::string> table = [] {
    std::map<std::string, std::string> t;
    for (const auto& [key, text] : kPresets) t.emplace(key, text);
    return t;
  }();
  const auto it = table.find(name);
  return it == table.end() ? nullptr : &it->second;
}

}  // namespace tsr::presets
