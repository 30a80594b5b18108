#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace tsr::svg {

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
};

// Minimal line plot: axes, tick labels, one polyline per series, legend.
void write_plot(const std::filesystem::path& path, const PlotSpec& spec,
                const std::vector<Series>& series);

}  // namespace tsr::svg
