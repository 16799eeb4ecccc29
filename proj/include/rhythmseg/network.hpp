#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rhythmseg/clustering.hpp"
#include "rhythmseg/core.hpp"

namespace rsa::network {

inline constexpr std::size_t kDefaultPruneThreshold = 15;

struct Node {
  int id = 0;
  std::size_t size = 0;
  PatternDuration medoid;
  std::optional<std::string> label;  // integer-ratio label of the medoid
};

struct Edge {
  int from = 0;
  int to = 0;
  std::size_t count = 0;

  bool operator==(const Edge&) const = default;
};

struct TransitionNetwork {
  std::vector<Node> nodes;
  std::vector<Edge> edges;  // sorted by (from, to)
  std::size_t prune_threshold = kDefaultPruneThreshold;

  const Node* find_node(int id) const;
  const Node* find_label(const std::string& label) const;
  /// Count of the retained edge from -> to, or 0.
  std::size_t edge_count(int from, int to) const;
};

/// Counts transitions between clusters of successive segments (same
/// sequence, consecutive start indices). Pairs touching a noise segment are
/// skipped, never bridged. Edges counted fewer than `prune_threshold` times
/// are dropped; nodes are kept regardless.
///
/// `quantum`, when given, attaches integer-ratio labels to the nodes.
TransitionNetwork build_network(const cluster::ClusterLabeling& labeling,
                                std::span<const SegmentOrigin> origins,
                                std::size_t prune_threshold = kDefaultPruneThreshold,
                                std::optional<double> quantum = std::nullopt);

/// Convenience overload taking the clustered segments.
TransitionNetwork build_network(const cluster::ClusterLabeling& labeling,
                                std::span<const Segment> segments,
                                std::size_t prune_threshold = kDefaultPruneThreshold,
                                std::optional<double> quantum = std::nullopt);

/// Unpruned transition counts, sorted by (from, to).
std::vector<Edge> count_transitions(std::span<const int> labels,
                                    std::span<const SegmentOrigin> origins);

/// Rhythm read off a path of labeled nodes: all multiples of the first
/// node, then the last multiple of every following node. Consecutive nodes
/// must be joined by an edge. Throws on unlabeled or unknown nodes.
std::vector<int> path_rhythm(const TransitionNetwork& network, std::span<const int> node_path);

}  // namespace rsa::network
