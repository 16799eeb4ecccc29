#include "rhythmseg/svg.hpp"

#include <charconv>
#include <cmath>

namespace rsa::viz {

std::string fmt_num(double v, int precision) {
  if (!std::isfinite(v)) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  std::string s(buf, ec == std::errc{} ? end : buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

std::string points_attr(const std::vector<Point2>& points) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) out += ' ';
    out += fmt_num(points[i].first) + "," + fmt_num(points[i].second);
  }
  return out;
}

std::string opacity_attr(const char* name, double opacity) {
  if (opacity >= 1.0) return {};
  return std::string(" ") + name + "=\"" + fmt_num(opacity) + "\"";
}

}  // namespace

SvgDocument::SvgDocument(double width, double height) : width_(width), height_(height) {}

void SvgDocument::rect(double x, double y, double w, double h, std::string_view fill,
                       std::string_view stroke, double stroke_width) {
  body_ += "<rect x=\"" + fmt_num(x) + "\" y=\"" + fmt_num(y) + "\" width=\"" + fmt_num(w) +
           "\" height=\"" + fmt_num(h) + "\" fill=\"" + std::string(fill) + "\" stroke=\"" +
           std::string(stroke) + "\" stroke-width=\"" + fmt_num(stroke_width) + "\"/>\n";
}

void SvgDocument::circle(double cx, double cy, double r, std::string_view fill,
                         std::string_view stroke, double stroke_width, double opacity) {
  body_ += "<circle cx=\"" + fmt_num(cx) + "\" cy=\"" + fmt_num(cy) + "\" r=\"" + fmt_num(r) +
           "\" fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) +
           "\" stroke-width=\"" + fmt_num(stroke_width) + "\"" + opacity_attr("opacity", opacity) +
           "/>\n";
}

void SvgDocument::plus(double cx, double cy, double half, std::string_view stroke,
                       double stroke_width) {
  body_ += "<path class=\"noise\" d=\"M" + fmt_num(cx - half) + "," + fmt_num(cy) + "H" +
           fmt_num(cx + half) + "M" + fmt_num(cx) + "," + fmt_num(cy - half) + "V" +
           fmt_num(cy + half) + "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" +
           fmt_num(stroke_width) + "\" fill=\"none\"/>\n";
}

void SvgDocument::line(double x1, double y1, double x2, double y2, std::string_view stroke,
                       double width, std::string_view dash, double opacity, bool arrow) {
  body_ += "<line x1=\"" + fmt_num(x1) + "\" y1=\"" + fmt_num(y1) + "\" x2=\"" + fmt_num(x2) +
           "\" y2=\"" + fmt_num(y2) + "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" +
           fmt_num(width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + std::string(dash) + "\"";
  body_ += opacity_attr("stroke-opacity", opacity);
  if (arrow) body_ += " marker-end=\"url(#arrow)\"";
  body_ += "/>\n";
}

void SvgDocument::polyline(const std::vector<Point2>& points, std::string_view stroke,
                           double width, std::string_view dash, std::string_view fill,
                           double opacity) {
  body_ += "<polyline points=\"" + points_attr(points) + "\" fill=\"" + std::string(fill) +
           "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + fmt_num(width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + std::string(dash) + "\"";
  body_ += opacity_attr("stroke-opacity", opacity);
  body_ += "/>\n";
}

void SvgDocument::polygon(const std::vector<Point2>& points, std::string_view fill,
                          double fill_opacity, std::string_view stroke, double stroke_width) {
  body_ += "<polygon points=\"" + points_attr(points) + "\" fill=\"" + std::string(fill) + "\"" +
           opacity_attr("fill-opacity", fill_opacity) + " stroke=\"" + std::string(stroke) +
           "\" stroke-width=\"" + fmt_num(stroke_width) + "\"/>\n";
}

void SvgDocument::path(std::string_view d, std::string_view stroke, double width,
                       std::string_view fill, double opacity, bool arrow) {
  body_ += "<path d=\"" + std::string(d) + "\" fill=\"" + std::string(fill) + "\" stroke=\"" +
           std::string(stroke) + "\" stroke-width=\"" + fmt_num(width) + "\"" +
           opacity_attr("stroke-opacity", opacity);
  if (arrow) body_ += " marker-end=\"url(#arrow)\"";
  body_ += "/>\n";
}

void SvgDocument::text(double x, double y, std::string_view content, double size,
                       std::string_view anchor, std::string_view fill, double rotate) {
  body_ += "<text x=\"" + fmt_num(x) + "\" y=\"" + fmt_num(y) + "\" font-size=\"" + fmt_num(size) +
           "\" text-anchor=\"" + std::string(anchor) + "\" fill=\"" + std::string(fill) + "\"";
  if (rotate != 0.0) {
    body_ += " transform=\"rotate(" + fmt_num(rotate) + " " + fmt_num(x) + " " + fmt_num(y) + ")\"";
  }
  body_ += ">" + xml_escape(content) + "</text>\n";
}

void SvgDocument::begin_group(std::string_view css_class) {
  body_ += "<g class=\"" + xml_escape(css_class) + "\">\n";
}

void SvgDocument::end_group() { body_ += "</g>\n"; }

void SvgDocument::define_arrow(std::string_view color) {
  defs_ +=
      "<marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"5\" "
      "markerHeight=\"5\" orient=\"auto-start-reverse\" markerUnits=\"userSpaceOnUse\">"
      "<path d=\"M0,0L10,5L0,10z\" fill=\"" +
      std::string(color) + "\"/></marker>\n";
}

std::string SvgDocument::str() const {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
      fmt_num(width_) + "\" height=\"" + fmt_num(height_) + "\" viewBox=\"0 0 " + fmt_num(width_) +
      " " + fmt_num(height_) + "\" font-family=\"Helvetica, Arial, sans-serif\">\n";
  if (!defs_.empty()) out += "<defs>\n" + defs_ + "</defs>\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

}  // namespace rsa::viz
