#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rsa::viz {

inline constexpr std::size_t kDefaultGridPoints = 512;

/// Density evaluated on a uniform grid.
struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;

  /// Trapezoidal integral over the grid.
  double integral() const;
  /// Abscissa of the largest density value (first one on ties).
  double mode() const;
};

struct GridRange {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = kDefaultGridPoints;
};

/// Silverman's rule of thumb, 0.9 * min(sd, IQR / 1.34) * n^(-1/5). Falls
/// back to whichever spread is non-zero, then to |x| or 1 for constant data.
double silverman_bandwidth(std::span<const double> values);

/// Gaussian kernel density estimate. Bandwidth defaults to Silverman's rule;
/// the grid defaults to [min - 3h, max + 3h]. Throws with fewer than 2 values.
DensityCurve kde(std::span<const double> values, std::optional<double> bandwidth = std::nullopt,
                 std::optional<GridRange> grid = std::nullopt);

}  // namespace rsa::viz
