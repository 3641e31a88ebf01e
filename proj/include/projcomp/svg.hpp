#ifndef PROJCOMP_SVG_HPP
#define PROJCOMP_SVG_HPP

#include <string>
#include <vector>

namespace projcomp {

/// Minimal polyline plot writer. One fixed-size canvas, light axes, one or
/// more labelled polylines.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_polyline(const std::vector<double>& x, const std::vector<double>& y,
                    const std::string& color = "#1f6fb2");
  void add_hline(double y, const std::string& color = "#999999");
  void write(const std::string& path) const;
  std::string render() const;

 private:
  struct Line {
    std::vector<double> x, y;
    std::string color;
  };
  std::string m_title, m_x_label, m_y_label;
  std::vector<Line> m_lines;
  std::vector<std::pair<double, std::string>> m_hlines;
};

}  // namespace projcomp

#endif
