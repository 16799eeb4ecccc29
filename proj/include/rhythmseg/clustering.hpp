#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rhythmseg/core.hpp"

namespace rsa::cluster {

inline constexpr int kNoise = -1;
inline constexpr std::size_t kDefaultMinClusterSize = 10;

using DistanceFn = std::function<double(std::size_t, std::size_t)>;

/// Symmetric pairwise distances, stored as the strict upper triangle.
class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n < 2 ? 0 : n * (n - 1) / 2, 0.0) {}

  static DistanceMatrix from_segments(std::span<const Segment> segments);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double d);

private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct Cluster {
  int id = 0;
  std::vector<std::size_t> members;  // indices into the clustered segments
  std::size_t medoid_index = 0;      // index into the clustered segments
  Segment medoid;
  PatternDuration medoid_pd;

  std::size_t size() const { return members.size(); }
};

struct ClusterLabeling {
  std::vector<int> labels;  // kNoise or a cluster id
  std::vector<Cluster> clusters;

  std::size_t noise_count() const;
  const Cluster* find(int id) const;
};

/// HDBSCAN over `n` points with an arbitrary metric.
///
/// Core distance is the distance to the k-th nearest point counting the point
/// itself (k = min_cluster_size). The minimum spanning tree of the
/// mutual-reachability graph is built exactly with Prim's algorithm, then
/// condensed with min_cluster_size and flattened by excess-of-mass selection.
/// The root is never selected, so a single global cluster is reported as
/// noise. Cluster ids are ordered by each cluster's first member index.
std::vector<int> hdbscan_labels(std::size_t n, const DistanceFn& distance,
                                std::size_t min_cluster_size);

/// Clusters segments under the taxicab segment distance.
ClusterLabeling cluster_segments(std::span<const Segment> segments,
                                 std::size_t min_cluster_size = kDefaultMinClusterSize);

/// Same pipeline with distances taken from a precomputed matrix.
ClusterLabeling cluster_segments(std::span<const Segment> segments, const DistanceMatrix& distances,
                                 std::size_t min_cluster_size = kDefaultMinClusterSize);

/// Index of the member minimizing summed segment distance; ties go to the
/// lowest index.
std::size_t medoid_index(std::span<const Segment> members);
Segment medoid(std::span<const Segment> members);

}  // namespace rsa::cluster
