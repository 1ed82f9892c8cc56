#include "ridge/svg_plot.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ridge {

namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 40.0;
constexpr std::size_t kMaxVertices = 4000;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title) {
  if (series.empty()) throw std::invalid_argument("render_svg: nothing to plot");
  const Trajectory& first = *series.front().trajectory;
  for (const auto& s : series) {
    if (s.trajectory == nullptr) throw std::invalid_argument("render_svg: null trajectory");
    if (s.trajectory->dimension() != 2) {
      throw std::invalid_argument("SVG plots need a two-dimensional problem, got n = " +
                                  std::to_string(s.trajectory->dimension()));
    }
    if (s.trajectory->records.empty()) throw std::invalid_argument("render_svg: empty trajectory");
  }
  const Vector lo = first.domain.lower();
  const Vector hi = first.domain.upper();
  const double span = kSize - 2.0 * kMargin;
  auto px = [&](double u) { return kMargin + (u - lo[0]) / (hi[0] - lo[0]) * span; };
  auto py = [&](double w) { return kSize - kMargin - (w - lo[1]) / (hi[1] - lo[1]) * span; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    os << "<text x=\"" << num(kSize / 2) << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"14\">" << escape(title) << "</text>\n";
  }
  os << "<rect x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\"" << num(span)
     << "\" height=\"" << num(span) << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num(kMargin) << "\" y=\"" << num(kSize - 12) << "\" font-family=\"sans-serif\" "
     << "font-size=\"11\">[" << lo[0] << ", " << hi[0] << "] x [" << lo[1] << ", " << hi[1]
     << "]</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& recs = series[k].trajectory->records;
    const char* color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    const std::size_t stride = std::max<std::size_t>(1, recs.size() / kMaxVertices);
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t r = 0; r < recs.size(); r += stride) {
      os << num(px(recs[r].x[0])) << ',' << num(py(recs[r].x[1])) << ' ';
    }
    os << num(px(recs.back().x[0])) << ',' << num(py(recs.back().x[1])) << "\"/>\n";
    os << "<circle cx=\"" << num(px(recs.front().x[0])) << "\" cy=\"" << num(py(recs.front().x[1]))
       << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    os << "<circle cx=\"" << num(px(recs.back().x[0])) << "\" cy=\"" << num(py(recs.back().x[1]))
       << "\" r=\"5\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    if (!series[k].label.empty()) {
      os << "<text x=\"" << num(kSize - kMargin - 4) << "\" y=\"" << num(kMargin + 14 + 14.0 * k)
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color
         << "\">" << escape(series[k].label) << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const std::vector<PlotSeries>& series, const std::string& path,
               const std::string& title) {
  const std::string doc = render_svg(series, title);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << doc;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace ridge
