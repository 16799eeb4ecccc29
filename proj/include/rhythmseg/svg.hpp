#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rsa::viz {

using Point2 = std::pair<double, double>;

/// Fixed-precision, locale-independent number formatting ("-0" prints as "0").
std::string fmt_num(double v, int precision = 3);

/// Minimal SVG 1.1 writer. Elements are emitted in call order with fixed
/// number formatting, so identical calls give identical bytes.
class SvgDocument {
public:
  SvgDocument(double width, double height);

  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view stroke = "none", double stroke_width = 0.0);
  void circle(double cx, double cy, double r, std::string_view fill,
              std::string_view stroke = "none", double stroke_width = 0.0, double opacity = 1.0);
  void plus(double cx, double cy, double half, std::string_view stroke, double stroke_width = 1.0);
  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width,
            std::string_view dash = {}, double opacity = 1.0, bool arrow = false);
  void polyline(const std::vector<Point2>& points, std::string_view stroke, double width,
                std::string_view dash = {}, std::string_view fill = "none", double opacity = 1.0);
  void polygon(const std::vector<Point2>& points, std::string_view fill, double fill_opacity,
               std::string_view stroke, double stroke_width);
  void path(std::string_view d, std::string_view stroke, double width, std::string_view fill = "none",
            double opacity = 1.0, bool arrow = false);
  void text(double x, double y, std::string_view content, double size = 11.0,
            std::string_view anchor = "middle", std::string_view fill = "#333333",
            double rotate = 0.0);
  void begin_group(std::string_view css_class);
  void end_group();

  /// Adds an arrowhead marker definition usable by line() and path().
  void define_arrow(std::string_view color);

  std::string str() const;

private:
  double width_;
  double height_;
  std::string defs_;
  std::string body_;
};

std::string xml_escape(std::string_view text);

}  // namespace rsa::viz
