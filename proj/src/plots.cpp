#include "rhythmseg/plots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "rhythmseg/quantal.hpp"

namespace rsa::viz {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
const char* const kAxisColor = "#333333";
const char* const kGridColor = "#e6e6e6";

struct Panel {
  double left;
  double top;
  double right;
  double bottom;
};

Panel main_panel(const PlotSpec& spec, double extra_top = 0.0, double extra_right = 0.0) {
  return {spec.margins.left, spec.margins.top + extra_top,
          spec.width - spec.margins.right - extra_right, spec.height - spec.margins.bottom};
}

std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
  std::vector<double> ticks;
  if (!(hi > lo)) return ticks;
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  const double first = std::ceil(lo / step - 1e-9) * step;
  for (double t = first; t <= hi + step * 1e-9; t += step) {
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

std::string tick_label(double v) {
  return fmt_num(v, std::abs(v) >= 10 ? 0 : (std::abs(v) >= 1 ? 1 : 2));
}

void draw_title(SvgDocument& doc, const PlotSpec& spec) {
  if (!spec.title.empty()) doc.text(spec.width / 2.0, 18.0, spec.title, 13.0);
}

void draw_x_axis(SvgDocument& doc, const LinearAxis& x, double y_px, const std::string& label) {
  doc.line(x.px_lo, y_px, x.px_hi, y_px, kAxisColor, 1.0);
  for (double t : nice_ticks(std::min(x.lo, x.hi), std::max(x.lo, x.hi))) {
    const double px = x.to_px(t);
    doc.line(px, y_px, px, y_px + 4.0, kAxisColor, 1.0);
    doc.text(px, y_px + 15.0, tick_label(t), 10.0);
  }
  doc.text((x.px_lo + x.px_hi) / 2.0, y_px + 32.0, label, 11.0);
}

void draw_y_axis(SvgDocument& doc, const LinearAxis& y, double x_px, const std::string& label,
                 bool ticks = true) {
  doc.line(x_px, y.px_lo, x_px, y.px_hi, kAxisColor, 1.0);
  if (ticks) {
    for (double t : nice_ticks(std::min(y.lo, y.hi), std::max(y.lo, y.hi))) {
      const double py = y.to_px(t);
      doc.line(x_px - 4.0, py, x_px, py, kAxisColor, 1.0);
      doc.text(x_px - 6.0, py + 3.5, tick_label(t), 10.0, "end");
    }
  }
  const double mid = (y.px_lo + y.px_hi) / 2.0;
  doc.text(x_px - 38.0, mid, label, 11.0, "middle", "#333333", -90.0);
}

std::string cluster_color(const PlotSpec& spec, int label) {
  if (label < 0 || spec.cluster_colors.empty()) return spec.noise_color;
  return spec.cluster_colors[static_cast<std::size_t>(label) % spec.cluster_colors.size()];
}

void draw_scatter(SvgDocument& doc, const std::vector<ScatterPoint>& points, const PlotSpec& spec,
                  const std::vector<std::string>* fills = nullptr) {
  // Noise first so clustered points stay on top.
  doc.begin_group("noise");
  for (const auto& p : points) {
    if (p.clustered && p.label == cluster::kNoise) {
      doc.plus(p.px, p.py, spec.point_radius + 1.0, spec.noise_color, 0.8);
    }
  }
  doc.end_group();
  doc.begin_group("points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.clustered && p.label == cluster::kNoise) continue;
    std::string fill = fills != nullptr ? (*fills)[i]
                       : p.clustered    ? cluster_color(spec, p.label)
                                        : spec.point_color;
    doc.circle(p.px, p.py, spec.point_radius, fill, "none", 0.0, 0.7);
  }
  doc.end_group();
}

void check_overlay(const Overlay& overlay, std::size_t n) {
  if (overlay.labeling != nullptr && overlay.labeling->labels.size() != n) {
    throw std::invalid_argument("cluster labeling does not match the segments");
  }
}

void require_length(std::span<const Segment> segments, std::size_t n) {
  for (const auto& s : segments) {
    if (s.size() != n) {
      throw std::invalid_argument("expected segments of length " + std::to_string(n) + ", got " +
                                  std::to_string(s.size()));
    }
  }
}

std::vector<EdgeGlyph> edge_glyphs(const network::TransitionNetwork& net) {
  std::vector<EdgeGlyph> out;
  if (net.edges.empty()) return out;
  std::size_t lo = net.edges.front().count;
  std::size_t hi = lo;
  for (const auto& e : net.edges) {
    lo = std::min(lo, e.count);
    hi = std::max(hi, e.count);
  }
  for (const auto& e : net.edges) {
    const double t = hi == lo ? 0.5
                              : static_cast<double>(e.count - lo) / static_cast<double>(hi - lo);
    out.push_back({e.from, e.to, e.count, 0.5 + t * (6.0 - 0.5)});
  }
  return out;
}

std::string node_text(const network::Node& node) {
  return node.label ? *node.label : "C" + std::to_string(node.id);
}

void draw_network(SvgDocument& doc, const std::vector<NetworkGlyph>& nodes,
                  const std::vector<EdgeGlyph>& edges) {
  std::map<int, const NetworkGlyph*> by_id;
  for (const auto& n : nodes) by_id[n.id] = &n;
  doc.begin_group("network-edges");
  for (const auto& e : edges) {
    const auto a = by_id.find(e.from);
    const auto b = by_id.find(e.to);
    if (a == by_id.end() || b == by_id.end()) continue;
    const NetworkGlyph& s = *a->second;
    const NetworkGlyph& t = *b->second;
    if (e.from == e.to) {
      const double r = 9.0;
      doc.path("M" + fmt_num(s.px) + "," + fmt_num(s.py - 4.0) + "a" + fmt_num(r) + "," +
                   fmt_num(r) + " 0 1 1 0.01,0",
               "#222222", e.width, "none", 0.6);
      continue;
    }
    // Stop short of the target marker so the arrowhead stays visible.
    const double dx = t.px - s.px;
    const double dy = t.py - s.py;
    const double len = std::hypot(dx, dy);
    const double shrink = len > 12.0 ? 6.0 / len : 0.0;
    doc.line(s.px, s.py, t.px - dx * shrink, t.py - dy * shrink, "#222222", e.width, {}, 0.6,
             true);
  }
  doc.end_group();
  doc.begin_group("network-nodes");
  for (const auto& n : nodes) {
    doc.circle(n.px, n.py, 4.5, "#ffffff", "#222222", 1.5);
    doc.text(n.px + 7.0, n.py - 6.0, n.text, 10.0, "start", "#111111");
  }
  doc.end_group();
}

// Splits sampled data-space points into polylines that stay inside y range.
std::vector<std::vector<Point2>> clip_runs(const std::vector<Point2>& data, const LinearAxis& x,
                                           const LinearAxis& y) {
  std::vector<std::vector<Point2>> runs;
  std::vector<Point2> current;
  const double ylo = std::min(y.lo, y.hi);
  const double yhi = std::max(y.lo, y.hi);
  for (const auto& [u, v] : data) {
    if (v >= ylo && v <= yhi) {
      current.emplace_back(x.to_px(u), y.to_px(v));
    } else if (!current.empty()) {
      runs.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) runs.push_back(std::move(current));
  return runs;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Point2& o, const Point2& a, const Point2& b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double auto_upper(double max_value) { return max_value > 0.0 ? max_value * 1.05 : 1.0; }

}  // namespace

// ---------------------------------------------------------------- raster

RasterFigure raster_figure(std::span<const Segment> segments, const PlotSpec& spec) {
  require_length(segments, 2);
  RasterFigure fig;
  double widest = 0.0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const double a = segments[i][0];
    const double b = segments[i][1];
    fig.rows.push_back({i, a + b, -std::min(a, b), std::max(a, b)});
    widest = std::max(widest, std::max(a, b));
  }
  std::stable_sort(fig.rows.begin(), fig.rows.end(),
                   [](const RasterRow& p, const RasterRow& q) { return p.duration < q.duration; });
  const Panel panel = main_panel(spec);
  const double half = spec.x_range ? std::max(std::abs(spec.x_range->lo), std::abs(spec.x_range->hi))
                                   : auto_upper(widest);
  fig.x = {-half, half, panel.left, panel.right};
  fig.y = {-1.0, static_cast<double>(std::max<std::size_t>(fig.rows.size(), 1)), panel.bottom,
           panel.top};
  return fig;
}

std::string raster_plot(std::span<const Segment> segments, const PlotSpec& spec) {
  const RasterFigure fig = raster_figure(segments, spec);
  SvgDocument doc(spec.width, spec.height);
  doc.rect(0, 0, spec.width, spec.height, "#ffffff");
  draw_title(doc, spec);
  doc.line(fig.x.to_px(0.0), fig.y.px_lo, fig.x.to_px(0.0), fig.y.px_hi, kGridColor, 1.0);
  doc.begin_group("points");
  for (std::size_t rank = 0; rank < fig.rows.size(); ++rank) {
    const auto& row = fig.rows[rank];
    const double py = fig.y.to_px(static_cast<double>(rank));
    doc.circle(fig.x.to_px(row.left), py, spec.point_radius, spec.point_color, "none", 0.0, 0.7);
    doc.circle(fig.x.to_px(row.right), py, spec.point_radius, spec.point_color, "none", 0.0, 0.7);
  }
  doc.end_group();
  draw_x_axis(doc, fig.x, fig.y.px_lo, "shorter interval (left) / longer interval (right), s");
  draw_y_axis(doc, fig.y, fig.x.px_lo, "segments sorted by duration", false);
  return doc.str();
}

// ---------------------------------------------------------------- phase

PhaseFigure phase_figure(std::span<const Segment> segments, const PlotSpec& spec,
                         bool trajectories) {
  require_length(segments, 2);
  PhaseFigure fig;
  double widest = 0.0;
  for (const auto& s : segments) {
    fig.points.emplace_back(s[0], s[1]);
    widest = std::max({widest, s[0], s[1]});
  }
  if (trajectories) {
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
      const auto& a = segments[i].origin();
      const auto& b = segments[i + 1].origin();
      if (a.sequence_id == b.sequence_id && b.start == a.start + 1) fig.trajectories.emplace_back(i, i + 1);
    }
  }
  const Panel panel = main_panel(spec);
  const AxisRange xr = spec.x_range.value_or(AxisRange{0.0, auto_upper(widest)});
  const AxisRange yr = spec.y_range.value_or(xr);
  fig.x = {xr.lo, xr.hi, panel.left, panel.right};
  fig.y = {yr.lo, yr.hi, panel.bottom, panel.top};
  return fig;
}

std::string phase_plot(std::span<const Segment> segments, const PlotSpec& spec,
                       bool trajectories) {
  const PhaseFigure fig = phase_figure(segments, spec, trajectories);
  SvgDocument doc(spec.width, spec.height);
  doc.rect(0, 0, spec.width, spec.height, "#ffffff");
  draw_title(doc, spec);
  doc.begin_group("trajectories");
  for (const auto& [i, j] : fig.trajectories) {
    doc.line(fig.x.to_px(fig.points[i].first), fig.y.to_px(fig.points[i].second),
             fig.x.to_px(fig.points[j].first), fig.y.to_px(fig.points[j].second), "#bbbbbb", 0.5,
             {}, 0.5);
  }
  doc.end_group();
  doc.begin_group("points");
  for (const auto& [a, b] : fig.points) {
    doc.circle(fig.x.to_px(a), fig.y.to_px(b), spec.point_radius, spec.point_color, "none", 0.0,
               0.7);
  }
  doc.end_group();
  draw_x_axis(doc, fig.x, fig.y.px_lo, "first interval (s)");
  draw_y_axis(doc, fig.y, fig.x.px_lo, "second interval (s)");
  return doc.str();
}

// ---------------------------------------------------------------- pattern-duration

double min_duration_boundary(double r, double min_interval) {
  return min_interval / std::min(r, 1.0 - r);
}

double max_duration_boundary(double r, double max_interval) {
  return max_interval / std::max(r, 1.0 - r);
}

DensityCurve ratio_density(std::span<const Segment> segments, const PlotSpec& spec) {
  require_length(segments, 2);
  std::vector<double> ratios;
  ratios.reserve(segments.size());
  for (const auto& s : segments) ratios.push_back(rhythm_ratio(s[0], s[1]));
  return kde(ratios, spec.bandwidth, GridRange{0.0, 1.0, spec.kde_points});
}

PatternDurationFigure pattern_duration_figure(std::span<const Segment> segments,
                                              const Overlay& overlay, const PlotSpec& spec) {
  require_length(segments, 2);
  check_overlay(overlay, segments.size());
  PatternDurationFigure fig;
  fig.quanta_axis = spec.quantum.has_value();
  const double unit = spec.quantum.value_or(1.0);
  if (!(unit > 0.0)) throw std::invalid_argument("quantum must be positive");

  double tallest = 0.0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    ScatterPoint p;
    p.u = rhythm_ratio(segments[i][0], segments[i][1]);
    p.v = segments[i].duration() / unit;
    if (overlay.labeling != nullptr) {
      p.clustered = true;
      p.label = overlay.labeling->labels[i];
    }
    tallest = std::max(tallest, p.v);
    fig.points.push_back(p);
  }

  const Panel panel = main_panel(spec, spec.marginal_size, spec.marginal_size);
  const AxisRange xr = spec.x_range.value_or(AxisRange{0.0, 1.0});
  const AxisRange yr = spec.y_range.value_or(AxisRange{0.0, auto_upper(tallest)});
  fig.x = {xr.lo, xr.hi, panel.left, panel.right};
  fig.y = {yr.lo, yr.hi, panel.bottom, panel.top};
  for (auto& p : fig.points) {
    p.px = fig.x.to_px(p.u);
    p.py = fig.y.to_px(p.v);
  }

  if (segments.size() >= 2) {
    fig.ratio_marginal = ratio_density(segments, spec);
    std::vector<double> durations;
    durations.reserve(fig.points.size());
    for (const auto& p : fig.points) durations.push_back(p.v);
    fig.duration_marginal = kde(durations, std::nullopt, GridRange{yr.lo, yr.hi, spec.kde_points});
  }

  if (fig.quanta_axis) {
    for (int m = 1; m <= spec.annotation_max; ++m) {
      for (int k = 1; k <= spec.annotation_max; ++k) {
        const double d = m + k;
        if (d > yr.hi || d < yr.lo) continue;
        fig.annotations.push_back({m, k, static_cast<double>(m) / d, d});
      }
    }
  }

  constexpr int kBoundarySamples = 400;
  for (int i = 1; i < kBoundarySamples; ++i) {
    const double r = static_cast<double>(i) / kBoundarySamples;
    if (spec.min_interval) {
      fig.min_boundary.emplace_back(r, min_duration_boundary(r, *spec.min_interval) / unit);
    }
    if (spec.max_interval) {
      fig.max_boundary.emplace_back(r, max_duration_boundary(r, *spec.max_interval) / unit);
    }
  }

  if (overlay.network != nullptr) {
    for (const auto& node : overlay.network->nodes) {
      const double r = node.medoid.pattern.ratio();
      const double d = node.medoid.duration / unit;
      fig.nodes.push_back({node.id, fig.x.to_px(r), fig.y.to_px(d), node_text(node)});
    }
    fig.edges = edge_glyphs(*overlay.network);
  }
  return fig;
}

std::string pattern_duration_plot(std::span<const Segment> segments, const Overlay& overlay,
                                  const PlotSpec& spec) {
  const PatternDurationFigure fig = pattern_duration_figure(segments, overlay, spec);
  SvgDocument doc(spec.width, spec.height);
  if (!fig.edges.empty()) doc.define_arrow("#222222");
  doc.rect(0, 0, spec.width, spec.height, "#ffffff");
  draw_title(doc, spec);
  doc.line(fig.x.to_px(0.5), fig.y.px_lo, fig.x.to_px(0.5), fig.y.px_hi, kGridColor, 1.0, "4,3");

  doc.begin_group("annotations");
  for (const auto& a : fig.annotations) {
    const double px = fig.x.to_px(a.ratio);
    const double py = fig.y.to_px(a.duration);
    doc.circle(px, py, 1.5, "#999999");
    doc.text(px, py - 4.0, std::to_string(a.first) + ":" + std::to_string(a.second), 7.0,
             "middle", "#999999");
  }
  doc.end_group();

  doc.begin_group("boundaries");
  for (const auto& run : clip_runs(fig.min_boundary, fig.x, fig.y)) {
    doc.polyline(run, "#555555", 1.0, "6,4");
  }
  for (const auto& run : clip_runs(fig.max_boundary, fig.x, fig.y)) {
    doc.polyline(run, "#555555", 1.0, "1,3");
  }
  doc.end_group();

  draw_scatter(doc, fig.points, spec);
  draw_network(doc, fig.nodes, fig.edges);

  if (fig.ratio_marginal) {
    const auto& c = *fig.ratio_marginal;
    const double peak = std::max(*std::max_element(c.density.begin(), c.density.end()), 1e-300);
    const LinearAxis dens{0.0, peak * 1.05, fig.y.px_hi - 4.0, fig.y.px_hi - spec.marginal_size + 4.0};
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      pts.emplace_back(fig.x.to_px(c.grid[i]), dens.to_px(c.density[i]));
    }
    doc.begin_group("ratio-marginal");
    doc.polyline(pts, "#333333", 1.2);
    doc.end_group();
  }
  if (fig.duration_marginal) {
    const auto& c = *fig.duration_marginal;
    const double peak = std::max(*std::max_element(c.density.begin(), c.density.end()), 1e-300);
    const LinearAxis dens{0.0, peak * 1.05, fig.x.px_hi + 4.0, fig.x.px_hi + spec.marginal_size - 4.0};
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      pts.emplace_back(dens.to_px(c.density[i]), fig.y.to_px(c.grid[i]));
    }
    doc.begin_group("duration-marginal");
    doc.polyline(pts, "#333333", 1.2);
    doc.end_group();
  }

  draw_x_axis(doc, fig.x, fig.y.px_lo, "rhythm ratio r");
  draw_y_axis(doc, fig.y, fig.x.px_lo,
              fig.quanta_axis ? "duration (quanta)" : "duration (s)");
  return doc.str();
}

// ---------------------------------------------------------------- ratio

RatioFigure ratio_figure(std::span<const Segment> segments, const PlotSpec& spec) {
  if (segments.size() < 2) throw std::invalid_argument("ratio plot needs at least 2 segments");
  RatioFigure fig;
  fig.curve = ratio_density(segments, spec);
  const double peak = *std::max_element(fig.curve.density.begin(), fig.curve.density.end());
  const Panel panel = main_panel(spec);
  fig.x = {0.0, 1.0, panel.left, panel.right};
  fig.y = {0.0, auto_upper(peak), panel.bottom, panel.top};
  return fig;
}

std::string ratio_plot(std::span<const Segment> segments, const PlotSpec& spec) {
  const RatioFigure fig = ratio_figure(segments, spec);
  SvgDocument doc(spec.width, spec.height);
  doc.rect(0, 0, spec.width, spec.height, "#ffffff");
  draw_title(doc, spec);
  doc.line(fig.x.to_px(0.5), fig.y.px_lo, fig.x.to_px(0.5), fig.y.px_hi, "#888888", 1.0, "4,3");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < fig.curve.grid.size(); ++i) {
    pts.emplace_back(fig.x.to_px(fig.curve.grid[i]), fig.y.to_px(fig.curve.density[i]));
  }
  doc.begin_group("density");
  doc.polyline(pts, spec.point_color, 1.5);
  doc.end_group();
  draw_x_axis(doc, fig.x, fig.y.px_lo, "rhythm ratio r");
  draw_y_axis(doc, fig.y, fig.x.px_lo, "density");
  return doc.str();
}

// ---------------------------------------------------------------- triangle

Point2 TernaryFrame::to_px(const Pattern& p) const {
  if (p.size() != 3) throw std::invalid_argument("ternary projection needs a length-3 pattern");
  return {p[0] * bottom_left.first + p[1] * bottom_right.first + p[2] * top.first,
          p[0] * bottom_left.second + p[1] * bottom_right.second + p[2] * top.second};
}

Point2 TernaryFrame::centroid() const {
  return {(bottom_left.first + bottom_right.first + top.first) / 3.0,
          (bottom_left.second + bottom_right.second + top.second) / 3.0};
}

std::string duration_color(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{{68, 1, 84},
                                                              {59, 82, 139},
                                                              {33, 145, 140},
                                                              {94, 201, 98},
                                                              {253, 231, 37}}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double pos = t * (stops.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), stops.size() - 2);
  const double f = pos - static_cast<double>(i);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
  }
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

TriangleFigure triangle_figure(std::span<const Segment> segments, const Overlay& overlay,
                               const PlotSpec& spec) {
  require_length(segments, 3);
  check_overlay(overlay, segments.size());
  TriangleFigure fig;
  fig.quanta_axis = spec.quantum.has_value();
  const double unit = spec.quantum.value_or(1.0);
  if (!(unit > 0.0)) throw std::invalid_argument("quantum must be positive");

  constexpr double kColorbar = 70.0;
  const double avail_w = spec.width - spec.margins.left - spec.margins.right - kColorbar;
  const double avail_h = spec.height - spec.margins.top - spec.margins.bottom;
  const double side = std::min(avail_w, avail_h * 2.0 / kSqrt3);
  const double x0 = spec.margins.left + (avail_w - side) / 2.0;
  const double base = spec.margins.top + avail_h / 2.0 + side * kSqrt3 / 4.0;
  fig.frame = {{x0, base}, {x0 + side, base}, {x0 + side / 2.0, base - side * kSqrt3 / 2.0}};

  std::vector<PatternDuration> pds;
  pds.reserve(segments.size());
  for (const auto& s : segments) pds.push_back(normalize(s));
  if (!pds.empty()) {
    fig.color_lo = fig.color_hi = pds.front().duration / unit;
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    ScatterPoint p;
    p.u = pds[i].duration / unit;
    std::tie(p.px, p.py) = fig.frame.to_px(pds[i].pattern);
    if (overlay.labeling != nullptr) {
      p.clustered = true;
      p.label = overlay.labeling->labels[i];
    }
    fig.color_lo = std::min(fig.color_lo, p.u);
    fig.color_hi = std::max(fig.color_hi, p.u);
    fig.points.push_back(p);
  }
  if (!(fig.color_hi > fig.color_lo)) fig.color_hi = fig.color_lo + 1.0;

  if (overlay.labeling != nullptr) {
    for (const auto& c : overlay.labeling->clusters) {
      std::vector<Point2> pts;
      for (std::size_t m : c.members) pts.emplace_back(fig.points[m].px, fig.points[m].py);
      fig.hulls.push_back(convex_hull(std::move(pts)));
    }
  }
  if (overlay.network != nullptr) {
    for (const auto& node : overlay.network->nodes) {
      const auto [px, py] = fig.frame.to_px(node.medoid.pattern);
      fig.nodes.push_back({node.id, px, py, node_text(node)});
    }
    fig.edges = edge_glyphs(*overlay.network);
  }
  return fig;
}

std::string triangle_plot(std::span<const Segment> segments, const Overlay& overlay,
                          const PlotSpec& spec) {
  const TriangleFigure fig = triangle_figure(segments, overlay, spec);
  SvgDocument doc(spec.width, spec.height);
  if (!fig.edges.empty()) doc.define_arrow("#222222");
  doc.rect(0, 0, spec.width, spec.height, "#ffffff");
  draw_title(doc, spec);

  const auto& f = fig.frame;
  doc.begin_group("simplex");
  for (double t : {0.25, 0.5, 0.75}) {
    // lines of constant weight for each of the three coordinates
    for (int k = 0; k < 3; ++k) {
      std::vector<double> a(3, 0.0);
      std::vector<double> b(3, 0.0);
      a[k] = b[k] = t;
      a[(k + 1) % 3] = 1.0 - t;
      b[(k + 2) % 3] = 1.0 - t;
      const auto pa = f.to_px(Pattern(a));
      const auto pb = f.to_px(Pattern(b));
      doc.line(pa.first, pa.second, pb.first, pb.second, kGridColor, 1.0);
    }
  }
  doc.polygon({f.bottom_left, f.bottom_right, f.top}, "none", 1.0, kAxisColor, 1.0);
  doc.text(f.bottom_left.first - 4.0, f.bottom_left.second + 14.0, "1:0:0", 10.0, "middle");
  doc.text(f.bottom_right.first + 4.0, f.bottom_right.second + 14.0, "0:1:0", 10.0, "middle");
  doc.text(f.top.first, f.top.second - 6.0, "0:0:1", 10.0, "middle");
  doc.end_group();

  doc.begin_group("clusters");
  for (std::size_t c = 0; c < fig.hulls.size(); ++c) {
    if (fig.hulls[c].size() >= 3) {
      doc.polygon(fig.hulls[c], cluster_color(spec, static_cast<int>(c)), 0.12,
                  cluster_color(spec, static_cast<int>(c)), 0.8);
    }
  }
  doc.end_group();

  std::vector<std::string> fills;
  fills.reserve(fig.points.size());
  for (const auto& p : fig.points) {
    fills.push_back(duration_color((p.u - fig.color_lo) / (fig.color_hi - fig.color_lo)));
  }
  draw_scatter(doc, fig.points, spec, &fills);

  const auto [cx, cy] = f.centroid();
  doc.begin_group("isochrony");
  doc.line(cx - 4.0, cy - 4.0, cx + 4.0, cy + 4.0, "#000000", 1.2);
  doc.line(cx - 4.0, cy + 4.0, cx + 4.0, cy - 4.0, "#000000", 1.2);
  doc.end_group();

  draw_network(doc, fig.nodes, fig.edges);

  // Duration colorbar.
  const double bar_x = spec.width - spec.margins.right - 30.0;
  const double bar_top = spec.margins.top + 20.0;
  const double bar_h = spec.height - spec.margins.top - spec.margins.bottom - 40.0;
  constexpr int kSteps = 32;
  doc.begin_group("colorbar");
  for (int i = 0; i < kSteps; ++i) {
    const double t = (i + 0.5) / kSteps;
    doc.rect(bar_x, bar_top + bar_h * (1.0 - static_cast<double>(i + 1) / kSteps), 12.0,
             bar_h / kSteps + 0.5, duration_color(t));
  }
  doc.text(bar_x + 6.0, bar_top - 6.0, fmt_num(fig.color_hi, 2), 9.0);
  doc.text(bar_x + 6.0, bar_top + bar_h + 12.0, fmt_num(fig.color_lo, 2), 9.0);
  doc.text(bar_x - 6.0, bar_top + bar_h / 2.0,
           fig.quanta_axis ? "duration (quanta)" : "duration (s)", 10.0, "middle", "#333333",
           -90.0);
  doc.end_group();
  return doc.str();
}

}  // namespace rsa::viz
