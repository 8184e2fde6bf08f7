#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "ghost/errors.hpp"

namespace ghost::cli {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  os << std::setprecision(6);
  return os;
}

void header(std::ostream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
}

// Round tick step: 1, 2 or 5 times a power of ten.
double tick_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace

void write_line_svg(const std::filesystem::path& path, const std::string& title, const std::string& y_label,
                    const std::vector<Series>& series) {
  double x0 = INFINITY, x1 = -INFINITY, y1 = 0.0;
  for (const auto& s : series) {
    for (double x : s.x) x0 = std::min(x0, x * 1e3), x1 = std::max(x1, x * 1e3);
    for (double y : s.y) y1 = std::max(y1, y);
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > 0.0)) y1 = 1.0;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + ph - y / y1 * ph; };

  auto os = open(path);
  header(os, title);
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double xs = tick_step(x1 - x0);
  for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs)
    os << "<line x1=\"" << px(t) << "\" y1=\"" << kTop + ph << "\" x2=\"" << px(t) << "\" y2=\"" << kTop + ph + 5
       << "\" stroke=\"black\"/><text x=\"" << px(t) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
       << t << "</text>\n";
  const double ys = tick_step(y1);
  for (double t = 0.0; t <= y1 + 1e-9 * ys; t += ys)
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << kLeft << "\" y2=\"" << py(t)
       << "\" stroke=\"black\"/><text x=\"" << kLeft - 8 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">" << t
       << "</text>\n";
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">z (mm)</text>\n"
     << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << kTop + ph / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) os << px(s.x[i] * 1e3) << ',' << py(s.y[i]) << ' ';
    os << "\"/>\n<text x=\"" << kLeft + pw - 10 << "\" y=\"" << kTop + 16 + 16 * static_cast<double>(k)
       << "\" text-anchor=\"end\" fill=\"" << color << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
}

void write_map_svg(const std::filesystem::path& path, const std::string& title, double lo, double hi, int n1,
                   int n2, const std::vector<double>& values) {
  const double peak = values.empty() ? 1.0 : *std::max_element(values.begin(), values.end());
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const double side = std::min(pw, ph);
  // At most 128 cells per axis keeps the file small.
  const int step = std::max({1, n1 / 128, n2 / 128});
  const int m1 = n1 / step, m2 = n2 / step;
  const double cw = side / m2, ch = side / m1;

  auto os = open(path);
  header(os, title);
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m2; ++j) {
      const std::size_t k = static_cast<std::size_t>(i * step) * static_cast<std::size_t>(n2) + static_cast<std::size_t>(j * step);
      const double v = peak > 0.0 ? values[k] / peak : 0.0;
      const int g = 255 - static_cast<int>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
      // z1 increases upward, z2 to the right.
      os << "<rect x=\"" << kLeft + j * cw << "\" y=\"" << kTop + (m1 - 1 - i) * ch << "\" width=\"" << cw + 0.05
         << "\" height=\"" << ch + 0.05 << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
    }
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << side << "\" height=\"" << side
     << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << kLeft + side / 2 << "\" y=\"" << kTop + side + 30 << "\" text-anchor=\"middle\">z2 from "
     << lo * 1e3 << " to " << hi * 1e3 << " mm</text>\n"
     << "<text x=\"" << kLeft - 10 << "\" y=\"" << kTop + side / 2 << "\" text-anchor=\"end\">z1</text>\n"
     << "</svg>\n";
}

}  // namespace ghost::cli
