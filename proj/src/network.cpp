#include "rhythmseg/network.hpp"

#include <map>
#include <stdexcept>
#include <utility>

#include "rhythmseg/quantal.hpp"

namespace rsa::network {

const Node* TransitionNetwork::find_node(int id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const Node* TransitionNetwork::find_label(const std::string& label) const {
  for (const auto& n : nodes) {
    if (n.label && *n.label == label) return &n;
  }
  return nullptr;
}

std::size_t TransitionNetwork::edge_count(int from, int to) const {
  for (const auto& e : edges) {
    if (e.from == from && e.to == to) return e.count;
  }
  return 0;
}

std::vector<Edge> count_transitions(std::span<const int> labels,
                                    std::span<const SegmentOrigin> origins) {
  if (labels.size() != origins.size()) {
    throw std::invalid_argument("labels and segment origins differ in length");
  }
  std::map<std::pair<int, int>, std::size_t> counts;
  for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
    const auto& a = origins[i];
    const auto& b = origins[i + 1];
    if (a.sequence_id != b.sequence_id || b.start != a.start + 1) continue;
    if (labels[i] == cluster::kNoise || labels[i + 1] == cluster::kNoise) continue;
    ++counts[{labels[i], labels[i + 1]}];
  }
  std::vector<Edge> edges;
  edges.reserve(counts.size());
  for (const auto& [key, count] : counts) edges.push_back({key.first, key.second, count});
  return edges;
}

TransitionNetwork build_network(const cluster::ClusterLabeling& labeling,
                                std::span<const SegmentOrigin> origins,
                                std::size_t prune_threshold, std::optional<double> quantum) {
  if (prune_threshold < 1) throw std::invalid_argument("prune threshold must be >= 1");
  TransitionNetwork net;
  net.prune_threshold = prune_threshold;
  for (const auto& c : labeling.clusters) {
    Node node{c.id, c.size(), c.medoid_pd, std::nullopt};
    if (quantum) node.label = quantal::integer_ratio_label(c.medoid, *quantum);
    net.nodes.push_back(std::move(node));
  }
  for (const auto& e : count_transitions(labeling.labels, origins)) {
    if (e.count >= prune_threshold) net.edges.push_back(e);
  }
  return net;
}

TransitionNetwork build_network(const cluster::ClusterLabeling& labeling,
                                std::span<const Segment> segments, std::size_t prune_threshold,
                                std::optional<double> quantum) {
  std::vector<SegmentOrigin> origins;
  origins.reserve(segments.size());
  for (const auto& s : segments) origins.push_back(s.origin());
  return build_network(labeling, origins, prune_threshold, quantum);
}

std::vector<int> path_rhythm(const TransitionNetwork& network, std::span<const int> node_path) {
  std::vector<int> rhythm;
  for (std::size_t i = 0; i < node_path.size(); ++i) {
    const Node* node = network.find_node(node_path[i]);
    if (node == nullptr) {
      throw std::invalid_argument("path visits unknown node " + std::to_string(node_path[i]));
    }
    if (!node->label) {
      throw std::invalid_argument("path visits unlabeled node " + std::to_string(node->id));
    }
    if (i > 0 && network.edge_count(node_path[i - 1], node_path[i]) == 0) {
      throw std::invalid_argument("no edge " + std::to_string(node_path[i - 1]) + " -> " +
                                  std::to_string(node_path[i]));
    }
    const auto multiples = quantal::parse_ratio_label(*node->label);
    if (i == 0) {
      rhythm.insert(rhythm.end(), multiples.begin(), multiples.end());
    } else {
      rhythm.push_back(multiples.back());
    }
  }
  return rhythm;
}

}  // namespace rsa::network
