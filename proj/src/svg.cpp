#include "projcomp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "projcomp/csv.hpp"

namespace projcomp {

namespace {
constexpr double kWidth = 720, kHeight = 480;
constexpr double kMarginL = 64, kMarginR = 20, kMarginT = 36, kMarginB = 48;
}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : m_title(std::move(title)), m_x_label(std::move(x_label)),
      m_y_label(std::move(y_label)) {}

void SvgPlot::add_polyline(const std::vector<double>& x,
                           const std::vector<double>& y,
                           const std::string& color) {
  if (x.size() != y.size())
    throw std::invalid_argument("SvgPlot: x/y length mismatch");
  m_lines.push_back({x, y, color});
}

void SvgPlot::add_hline(double y, const std::string& color) {
  m_hlines.emplace_back(y, color);
}

std::string SvgPlot::render() const {
  double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& l : m_lines)
    for (std::size_t i = 0; i < l.x.size(); ++i) {
      xmin = std::min(xmin, l.x[i]);
      xmax = std::max(xmax, l.x[i]);
      ymin = std::min(ymin, l.y[i]);
      ymax = std::max(ymax, l.y[i]);
    }
  for (const auto& h : m_hlines) {
    ymin = std::min(ymin, h.first);
    ymax = std::max(ymax, h.first);
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double x) {
    return kMarginL + (x - xmin) / (xmax - xmin) * (kWidth - kMarginL - kMarginR);
  };
  auto py = [&](double y) {
    return kHeight - kMarginB -
           (y - ymin) / (ymax - ymin) * (kHeight - kMarginT - kMarginB);
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
    << kHeight << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"14\">" << m_title << "</text>\n";

  // axes
  s << "<line x1=\"" << kMarginL << "\" y1=\"" << kHeight - kMarginB
    << "\" x2=\"" << kWidth - kMarginR << "\" y2=\"" << kHeight - kMarginB
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\""
    << kMarginL << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double xv = xmin + (xmax - xmin) * i / 4.0;
    double yv = ymin + (ymax - ymin) * i / 4.0;
    s << "<text x=\"" << px(xv) << "\" y=\"" << kHeight - kMarginB + 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">" << format_double(xv, 4) << "</text>\n";
    s << "<text x=\"" << kMarginL - 6 << "\" y=\"" << py(yv) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(yv, 4) << "</text>\n";
  }
  s << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
    << m_x_label << "</text>\n";
  s << "<text x=\"16\" y=\"" << kHeight / 2
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
       "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << m_y_label
    << "</text>\n";

  for (const auto& h : m_hlines)
    s << "<line x1=\"" << kMarginL << "\" y1=\"" << py(h.first) << "\" x2=\""
      << kWidth - kMarginR << "\" y2=\"" << py(h.first) << "\" stroke=\""
      << h.second << "\" stroke-dasharray=\"4 3\"/>\n";

  for (const auto& l : m_lines) {
    s << "<polyline fill=\"none\" stroke=\"" << l.color
      << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < l.x.size(); ++i)
      s << format_double(px(l.x[i]), 8) << ',' << format_double(py(l.y[i]), 8)
        << ' ';
    s << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void SvgPlot::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open SVG output: " + path);
  out << render();
}

}  // namespace projcomp
