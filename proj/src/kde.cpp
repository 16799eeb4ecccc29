#include "rhythmseg/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rsa::viz {

double DensityCurve::integral() const {
  double total = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    total += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
  }
  return total;
}

double DensityCurve::mode() const {
  if (grid.empty()) throw std::logic_error("empty density curve");
  const auto it = std::max_element(density.begin(), density.end());
  return grid[static_cast<std::size_t>(it - density.begin())];
}

namespace {

// Linear-interpolated quantile of sorted data (type 7).
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("bandwidth needs at least 2 values");
  const auto n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = (quantile(sorted, 0.75) - quantile(sorted, 0.25)) / 1.34;

  double spread = std::min(sd, iqr);
  if (!(spread > 0.0)) spread = std::max(sd, iqr);
  if (!(spread > 0.0)) spread = std::abs(sorted.front());
  if (!(spread > 0.0)) spread = 1.0;
  return 0.9 * spread * std::pow(n, -0.2);
}

DensityCurve kde(std::span<const double> values, std::optional<double> bandwidth,
                 std::optional<GridRange> grid) {
  if (values.size() < 2) throw std::invalid_argument("density estimate needs at least 2 values");
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(values);
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("bandwidth must be positive");

  GridRange range;
  if (grid) {
    range = *grid;
  } else {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    range = {*lo - 3.0 * h, *hi + 3.0 * h, kDefaultGridPoints};
  }
  if (range.points < 2 || !(range.hi > range.lo)) throw std::invalid_argument("invalid grid range");

  DensityCurve curve;
  curve.bandwidth = h;
  curve.grid.resize(range.points);
  curve.density.assign(range.points, 0.0);
  const double step = (range.hi - range.lo) / static_cast<double>(range.points - 1);
  for (std::size_t i = 0; i < range.points; ++i) {
    curve.grid[i] = range.lo + step * static_cast<double>(i);
  }
  const double norm = 1.0 / (static_cast<double>(values.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 0; i < range.points; ++i) {
    double total = 0.0;
    for (double v : values) {
      const double z = (curve.grid[i] - v) / h;
      total += std::exp(-0.5 * z * z);
    }
    curve.density[i] = total * norm;
  }
  return curve;
}

}  // namespace rsa::viz
