#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "efk/grid.hpp"

namespace efk::plot {

struct Series {
  std::string label;
  std::vector<double> x, y;
};

/// Standalone SVG line chart. A series with one point is drawn as a marker.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series);

/// PNG heatmap with x to the right and y upward, diverging colour map over
/// [lo, hi]. Each node becomes a square of `scale` pixels. Throws IoError.
void write_heatmap_png(const std::filesystem::path& path, const Matrix& values, double lo,
                       double hi, int scale = 4);

}  // namespace efk::plot
