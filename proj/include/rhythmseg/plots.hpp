#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rhythmseg/clustering.hpp"
#include "rhythmseg/core.hpp"
#include "rhythmseg/kde.hpp"
#include "rhythmseg/network.hpp"
#include "rhythmseg/svg.hpp"

/// SVG plots of segments.
///
/// Every plot is built in two steps: a `*_figure` function computes the
/// geometry (data values, axes, pixel positions, density curves) and the
/// matching `*_plot` function renders it. Tests inspect the figures; the CLI
/// writes the SVG. Rendering is deterministic: the same data and spec give
/// the same bytes.
namespace rsa::viz {

struct Margins {
  double top = 30.0;
  double right = 20.0;
  double bottom = 45.0;
  double left = 55.0;
};

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct PlotSpec {
  double width = 560.0;
  double height = 500.0;
  Margins margins;
  std::optional<AxisRange> x_range;  // auto when empty
  std::optional<AxisRange> y_range;
  double point_radius = 2.0;
  std::string point_color = "#1f77b4";
  std::vector<std::string> cluster_colors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                             "#9467bd", "#8c564b", "#e377c2", "#bcbd22",
                                             "#17becf", "#7f7f7f"};
  std::string noise_color = "#a0a0a0";
  /// When set, durations are drawn in multiples of the quantum and
  /// integer-ratio annotations are enabled.
  std::optional<double> quantum;
  int annotation_max = 6;
  std::optional<double> bandwidth;  // Silverman's rule when empty
  std::size_t kde_points = kDefaultGridPoints;
  /// Shortest / longest possible interval, for the duration boundaries.
  std::optional<double> min_interval;
  std::optional<double> max_interval;
  double marginal_size = 70.0;  // height of the top band / width of the side band
  std::string title;
};

/// Clustering and network to draw on top of a scatter. Either may be null.
struct Overlay {
  const cluster::ClusterLabeling* labeling = nullptr;
  const network::TransitionNetwork* network = nullptr;
};

/// Affine map from data values to pixels.
struct LinearAxis {
  double lo = 0.0;
  double hi = 1.0;
  double px_lo = 0.0;
  double px_hi = 1.0;

  double to_px(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
  double from_px(double px) const { return lo + (px - px_lo) / (px_hi - px_lo) * (hi - lo); }
};

// ---------------------------------------------------------------- raster

struct RasterRow {
  std::size_t segment = 0;  // index into the input
  double duration = 0.0;
  double left = 0.0;   // -min(a, b)
  double right = 0.0;  // +max(a, b)
};

struct RasterFigure {
  std::vector<RasterRow> rows;  // bottom (fastest) to top (slowest)
  LinearAxis x;
  LinearAxis y;  // row rank, no scale
};

RasterFigure raster_figure(std::span<const Segment> segments, const PlotSpec& spec = {});
std::string raster_plot(std::span<const Segment> segments, const PlotSpec& spec = {});

// ---------------------------------------------------------------- phase

struct PhaseFigure {
  std::vector<Point2> points;  // (first, second) interval
  /// Index pairs of successive segments of the same sequence.
  std::vector<std::pair<std::size_t, std::size_t>> trajectories;
  LinearAxis x;
  LinearAxis y;
};

PhaseFigure phase_figure(std::span<const Segment> segments, const PlotSpec& spec = {},
                         bool trajectories = false);
std::string phase_plot(std::span<const Segment> segments, const PlotSpec& spec = {},
                       bool trajectories = false);

// ---------------------------------------------------------------- pattern-duration

struct ScatterPoint {
  double u = 0.0;  // horizontal data coordinate
  double v = 0.0;  // vertical data coordinate
  double px = 0.0;
  double py = 0.0;
  int label = cluster::kNoise;
  bool clustered = false;  // false when no labeling was supplied
};

struct RatioAnnotation {
  int first = 0;
  int second = 0;
  double ratio = 0.0;     // first / (first + second)
  double duration = 0.0;  // first + second, in quanta
};

struct NetworkGlyph {
  int id = 0;
  double px = 0.0;
  double py = 0.0;
  std::string text;
};

struct EdgeGlyph {
  int from = 0;
  int to = 0;
  std::size_t count = 0;
  double width = 0.0;
};

struct PatternDurationFigure {
  std::vector<ScatterPoint> points;  // u = rhythm ratio, v = duration (s or quanta)
  LinearAxis x;
  LinearAxis y;
  bool quanta_axis = false;
  std::optional<DensityCurve> ratio_marginal;     // over [0, 1]
  std::optional<DensityCurve> duration_marginal;  // over the y range
  std::vector<RatioAnnotation> annotations;
  std::vector<Point2> min_boundary;  // data coordinates, dashed
  std::vector<Point2> max_boundary;  // data coordinates, dotted
  std::vector<NetworkGlyph> nodes;
  std::vector<EdgeGlyph> edges;
};

/// Density of rhythm ratios over [0, 1]; the ratio plot and the top
/// marginal of the pattern-duration plot both use it.
DensityCurve ratio_density(std::span<const Segment> segments, const PlotSpec& spec);

/// Throws std::invalid_argument unless every segment has length 2.
PatternDurationFigure pattern_duration_figure(std::span<const Segment> segments,
                                              const Overlay& overlay = {},
                                              const PlotSpec& spec = {});
std::string pattern_duration_plot(std::span<const Segment> segments, const Overlay& overlay = {},
                                  const PlotSpec& spec = {});

/// Lowest feasible duration at ratio r when no interval is below min_interval.
double min_duration_boundary(double r, double min_interval);
/// Highest feasible duration at ratio r when no interval exceeds max_interval.
double max_duration_boundary(double r, double max_interval);

// ---------------------------------------------------------------- ratio

struct RatioFigure {
  DensityCurve curve;
  LinearAxis x;
  LinearAxis y;
};

RatioFigure ratio_figure(std::span<const Segment> segments, const PlotSpec& spec = {});
std::string ratio_plot(std::span<const Segment> segments, const PlotSpec& spec = {});

// ---------------------------------------------------------------- triangle

/// Equilateral triangle for length-3 patterns: the first weight pulls toward
/// the bottom-left corner, the second toward the bottom-right, the third
/// toward the top.
struct TernaryFrame {
  Point2 bottom_left;
  Point2 bottom_right;
  Point2 top;

  Point2 to_px(const Pattern& p) const;
  Point2 centroid() const;
};

struct TriangleFigure {
  TernaryFrame frame;
  std::vector<ScatterPoint> points;  // u = duration (s or quanta), v unused
  bool quanta_axis = false;
  double color_lo = 0.0;
  double color_hi = 1.0;
  std::vector<std::vector<Point2>> hulls;  // per cluster, pixel coordinates
  std::vector<NetworkGlyph> nodes;
  std::vector<EdgeGlyph> edges;
};

TriangleFigure triangle_figure(std::span<const Segment> segments, const Overlay& overlay = {},
                               const PlotSpec& spec = {});
std::string triangle_plot(std::span<const Segment> segments, const Overlay& overlay = {},
                          const PlotSpec& spec = {});

/// Viridis-like color for t in [0, 1].
std::string duration_color(double t);

}  // namespace rsa::viz
