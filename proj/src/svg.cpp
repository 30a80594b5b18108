#include "tsr/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "tsr/csv.hpp"

namespace tsr::svg {

namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 790.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 460.0;

std::string num(double v) { return csv::format_fixed(v, 2); }

double map_x(double x, double lo, double hi) {
  return kLeft + (x - lo) / (hi - lo) * (kRight - kLeft);
}

double map_y(double y, double lo, double hi) {
  return kBottom - (y - lo) / (hi - lo) * (kBottom - kTop);
}

}  // namespace

void write_plot(const std::filesystem::path& path, const PlotSpec& spec,
                const std::vector<Series>& series) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      if (spec.log_x && !(x > 0.0)) {
        throw std::invalid_argument("log axis requires positive x values");
      }
      const double xv = spec.log_x ? std::log10(x) : x;
      if (!std::isfinite(xv) || !std::isfinite(y)) continue;
      x_lo = std::min(x_lo, xv);
      x_hi = std::max(x_hi, xv);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!(x_lo < x_hi)) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (!(y_lo < y_hi)) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + num(kWidth) +
         " " + num(kHeight) + "\">\n";
  out += "<rect width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) +
         "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" + spec.title +
         "</text>\n";
  out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kBottom) + "\" x2=\"" +
         num(kRight) + "\" y2=\"" + num(kBottom) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" +
         num(kLeft) + "\" y2=\"" + num(kBottom) + "\" stroke=\"black\"/>\n";

  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double frac = static_cast<double>(t) / ticks;
    const double xv = x_lo + frac * (x_hi - x_lo);
    const double px = map_x(xv, x_lo, x_hi);
    const double shown = spec.log_x ? std::pow(10.0, xv) : xv;
    out += "<line x1=\"" + num(px) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(px) +
           "\" y2=\"" + num(kBottom + 6) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(px) + "\" y=\"" + num(kBottom + 22) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + csv::format_fixed(shown, 2) +
           "</text>\n";
    const double yv = y_lo + frac * (y_hi - y_lo);
    const double py = map_y(yv, y_lo, y_hi);
    out += "<line x1=\"" + num(kLeft - 6) + "\" y1=\"" + num(py) + "\" x2=\"" +
           num(kLeft) + "\" y2=\"" + num(py) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(kLeft - 10) + "\" y=\"" + num(py + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + csv::format_fixed(yv, 3) +
           "</text>\n";
  }
  out += "<text x=\"" + num((kLeft + kRight) / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + spec.x_label + "</text>\n";
  out += "<text x=\"18\" y=\"" + num((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
         num((kTop + kBottom) / 2) + ")\">" + spec.y_label + "</text>\n";

  double legend_y = kTop + 10.0;
  for (const auto& s : series) {
    std::string poly;
    for (auto [x, y] : s.points) {
      const double xv = spec.log_x ? std::log10(x) : x;
      if (!std::isfinite(xv) || !std::isfinite(y)) continue;
      poly += num(map_x(xv, x_lo, x_hi)) + "," + num(map_y(y, y_lo, y_hi)) + " ";
    }
    if (!poly.empty()) poly.pop_back();
    out += "<polyline fill=\"none\" stroke=\"" + s.color +
           "\" stroke-width=\"1.5\" points=\"" + poly + "\"/>\n";
    out += "<line x1=\"" + num(kRight - 150) + "\" y1=\"" + num(legend_y) +
           "\" x2=\"" + num(kRight - 126) + "\" y2=\"" + num(legend_y) +
           "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(kRight - 120) + "\" y=\"" + num(legend_y + 4) +
           "\" font-size=\"12\">" + s.label + "</text>\n";
    legend_y += 18.0;
  }
  out += "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace tsr::svg
