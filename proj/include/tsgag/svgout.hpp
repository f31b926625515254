#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tsgag {

/// Minimal self-contained SVG 1.1 line/scatter plots; no external plotting
/// dependency, deterministic output.
struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool line = true;    // polyline through the points
  bool marks = false;  // circles at the points
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series, int width = 720,
                    int height = 480);

}  // namespace tsgag
