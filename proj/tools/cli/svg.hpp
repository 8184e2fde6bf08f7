#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ghost::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal polyline plot with axis ticks. x values are shown in millimetres.
void write_line_svg(const std::filesystem::path& path, const std::string& title, const std::string& y_label,
                    const std::vector<Series>& series);

/// Grey-scale heat map of a row-major n1 x n2 array over [lo, hi]^2 (metres).
void write_map_svg(const std::filesystem::path& path, const std::string& title, double lo, double hi, int n1,
                   int n2, const std::vector<double>& values);

}  // namespace ghost::cli
