#include "tsgag/svgout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "tsgag/errors.hpp"

namespace tsgag {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b"};

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series, int width, int height) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmin <= xmax)) {
    xmin = 0;
    xmax = 1;
  }
  if (!(ymin <= ymax)) {
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ml = 70, mr = 20, mt = 40, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::DomainError, "cannot open " + path + " for writing");
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title)
      << "</text>\n";

  // axes + ticks
  out << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">\n";
  out << "<path d=\"M " << num(ml) << " " << num(mt) << " L " << num(ml) << " "
      << num(mt + ph) << " L " << num(ml + pw) << " " << num(mt + ph) << "\"/>\n";
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double x = xmin + (xmax - xmin) * i / nticks;
    const double y = ymin + (ymax - ymin) * i / nticks;
    out << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(mt + ph) << "\" x2=\""
        << num(px(x)) << "\" y2=\"" << num(mt + ph + 4)
        << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(mt + ph + 17)
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
    out << "<line x1=\"" << num(ml - 4) << "\" y1=\"" << num(py(y)) << "\" x2=\""
        << num(ml) << "\" y2=\"" << num(py(y)) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << num(ml - 7) << "\" y=\"" << num(py(y) + 4)
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(mt + ph + 40)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(xlabel)
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << num(mt + ph / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << num(mt + ph / 2) << ")\">" << escape(ylabel) << "</text>\n";
  out << "</g>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % 6];
    if (s.line && s.points.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.6\" points=\"";
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        out << num(px(x)) << "," << num(py(y)) << " ";
      }
      out << "\"/>\n";
    }
    if (s.marks || s.points.size() == 1) {
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        out << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
            << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
      }
    }
    if (!s.label.empty()) {
      const double ly = mt + 14 + 16 * static_cast<double>(si);
      out << "<line x1=\"" << num(ml + pw - 130) << "\" y1=\"" << num(ly - 4)
          << "\" x2=\"" << num(ml + pw - 110) << "\" y2=\"" << num(ly - 4)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << num(ml + pw - 105) << "\" y=\"" << num(ly)
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label)
          << "</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace tsgag
