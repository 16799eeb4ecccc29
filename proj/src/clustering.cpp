#include "rhythmseg/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace rsa::cluster {

std::size_t DistanceMatrix::index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  // row-major strict upper triangle
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

double DistanceMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  return data_[index(i, j)];
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double d) {
  if (i == j) return;
  data_[index(i, j)] = d;
}

DistanceMatrix DistanceMatrix::from_segments(std::span<const Segment> segments) {
  DistanceMatrix m(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    for (std::size_t j = i + 1; j < segments.size(); ++j) {
      m.set(i, j, segment_distance(segments[i], segments[j]));
    }
  }
  return m;
}

std::size_t ClusterLabeling::noise_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

const Cluster* ClusterLabeling::find(int id) const {
  for (const auto& c : clusters) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

namespace {

struct Edge {
  std::size_t a;
  std::size_t b;
  double weight;
};

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void attach(std::size_t child_root, std::size_t new_root) { parent_[child_root] = new_root; }

private:
  std::vector<std::size_t> parent_;
};

std::vector<double> core_distances(std::size_t n, const DistanceFn& distance, std::size_t k) {
  std::vector<double> core(n, 0.0);
  if (k <= 1 || n < 2) return core;
  const std::size_t rank = std::min(k, n) - 2;  // among the other n - 1 points
  std::vector<double> row(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t w = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row[w++] = distance(i, j);
    }
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(rank), row.end());
    core[i] = row[rank];
  }
  return core;
}

// Prim's algorithm on the dense mutual-reachability graph; ties resolve to
// the lowest vertex index.
std::vector<Edge> mutual_reachability_mst(std::size_t n, const DistanceFn& distance,
                                          const std::vector<double>& core) {
  std::vector<Edge> edges;
  if (n < 2) return edges;
  edges.reserve(n - 1);
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(n, 0);
  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    double next_weight = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      const double mr = std::max({core[current], core[j], distance(current, j)});
      if (mr < best[j]) {
        best[j] = mr;
        from[j] = current;
      }
      if (next == n || best[j] < next_weight) {
        next = j;
        next_weight = best[j];
      }
    }
    in_tree[next] = true;
    edges.push_back({from[next], next, best[next]});
    current = next;
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& x, const Edge& y) { return x.weight < y.weight; });
  return edges;
}

struct LinkageNode {
  std::size_t left = 0;
  std::size_t right = 0;
  double distance = 0.0;
  std::size_t size = 1;
};

// Nodes 0..n-1 are points, n..2n-2 are merges in edge order.
std::vector<LinkageNode> single_linkage(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<LinkageNode> nodes(n + edges.size());
  UnionFind uf(nodes.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::size_t id = n + e;
    const std::size_t ra = uf.find(edges[e].a);
    const std::size_t rb = uf.find(edges[e].b);
    nodes[id] = {ra, rb, edges[e].weight, nodes[ra].size + nodes[rb].size};
    uf.attach(ra, id);
    uf.attach(rb, id);
  }
  return nodes;
}

struct CondensedCluster {
  std::size_t parent = 0;
  double birth = 0.0;
  std::size_t size = 0;
  std::vector<std::size_t> children;
  double stability = 0.0;
};

struct CondensedTree {
  std::vector<CondensedCluster> clusters;  // index 0 is the root
  std::vector<std::size_t> point_cluster;  // cluster each point falls out of
  std::vector<double> point_lambda;
};

CondensedTree condense(std::size_t n, const std::vector<LinkageNode>& nodes,
                       std::size_t min_cluster_size) {
  CondensedTree tree;
  tree.point_cluster.assign(n, 0);
  tree.point_lambda.assign(n, 0.0);
  tree.clusters.push_back({0, 0.0, n, {}, 0.0});
  if (n < 2) return tree;

  // Zero-distance merges get a finite lambda above every real one.
  double max_lambda = 0.0;
  for (std::size_t id = n; id < nodes.size(); ++id) {
    if (nodes[id].distance > 0.0) max_lambda = std::max(max_lambda, 1.0 / nodes[id].distance);
  }
  const double zero_lambda = max_lambda > 0.0 ? 2.0 * max_lambda : 1.0;
  auto lambda_of = [&](double d) { return d > 0.0 ? 1.0 / d : zero_lambda; };

  auto fall_out = [&](std::size_t subtree, std::size_t cluster, double lambda) {
    std::vector<std::size_t> stack{subtree};
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      if (x < n) {
        tree.point_cluster[x] = cluster;
        tree.point_lambda[x] = lambda;
      } else {
        stack.push_back(nodes[x].right);
        stack.push_back(nodes[x].left);
      }
    }
  };

  // Breadth-first so that child clusters always get larger ids than parents.
  std::vector<std::pair<std::size_t, std::size_t>> queue{{nodes.size() - 1, 0}};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [node_id, cluster] = queue[head];
    const LinkageNode& node = nodes[node_id];
    const double lambda = lambda_of(node.distance);
    const bool left_big = nodes[node.left].size >= min_cluster_size;
    const bool right_big = nodes[node.right].size >= min_cluster_size;
    if (left_big && right_big) {
      for (std::size_t child : {node.left, node.right}) {
        const std::size_t id = tree.clusters.size();
        tree.clusters.push_back({cluster, lambda, nodes[child].size, {}, 0.0});
        tree.clusters[cluster].children.push_back(id);
        queue.emplace_back(child, id);
      }
    } else if (left_big) {
      fall_out(node.right, cluster, lambda);
      queue.emplace_back(node.left, cluster);
    } else if (right_big) {
      fall_out(node.left, cluster, lambda);
      queue.emplace_back(node.right, cluster);
    } else {
      fall_out(node.left, cluster, lambda);
      fall_out(node.right, cluster, lambda);
    }
  }

  for (std::size_t p = 0; p < n; ++p) {
    auto& c = tree.clusters[tree.point_cluster[p]];
    c.stability += tree.point_lambda[p] - c.birth;
  }
  for (std::size_t id = 1; id < tree.clusters.size(); ++id) {
    auto& child = tree.clusters[id];
    auto& parent = tree.clusters[child.parent];
    parent.stability += (child.birth - parent.birth) * static_cast<double>(child.size);
  }
  return tree;
}

std::vector<bool> select_excess_of_mass(CondensedTree& tree) {
  const std::size_t count = tree.clusters.size();
  std::vector<bool> selected(count, true);
  selected[0] = false;
  std::vector<double> stability(count);
  for (std::size_t id = 0; id < count; ++id) stability[id] = tree.clusters[id].stability;

  for (std::size_t id = count; id-- > 1;) {
    const auto& children = tree.clusters[id].children;
    if (children.empty()) continue;
    double subtree = 0.0;
    for (std::size_t c : children) subtree += stability[c];
    if (stability[id] < subtree) {
      selected[id] = false;
      stability[id] = subtree;
    } else {
      std::vector<std::size_t> stack(children.begin(), children.end());
      while (!stack.empty()) {
        const std::size_t x = stack.back();
        stack.pop_back();
        selected[x] = false;
        for (std::size_t c : tree.clusters[x].children) stack.push_back(c);
      }
    }
  }
  return selected;
}

ClusterLabeling summarize(std::span<const Segment> segments, std::vector<int> labels) {
  ClusterLabeling out;
  int count = 0;
  for (int l : labels) count = std::max(count, l + 1);
  out.clusters.resize(static_cast<std::size_t>(count));
  for (int id = 0; id < count; ++id) out.clusters[static_cast<std::size_t>(id)].id = id;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kNoise) out.clusters[static_cast<std::size_t>(labels[i])].members.push_back(i);
  }
  for (auto& c : out.clusters) {
    std::vector<Segment> members;
    members.reserve(c.members.size());
    for (std::size_t i : c.members) members.push_back(segments[i]);
    c.medoid_index = c.members[medoid_index(members)];
    c.medoid = segments[c.medoid_index];
    c.medoid_pd = normalize(c.medoid);
  }
  out.labels = std::move(labels);
  return out;
}

void check_lengths(std::span<const Segment> segments) {
  for (const auto& s : segments) {
    if (s.size() != segments.front().size()) {
      throw std::invalid_argument("cannot cluster segments of mixed lengths");
    }
  }
}

}  // namespace

std::vector<int> hdbscan_labels(std::size_t n, const DistanceFn& distance,
                                std::size_t min_cluster_size) {
  if (min_cluster_size < 2) throw std::invalid_argument("min_cluster_size must be >= 2");
  std::vector<int> labels(n, kNoise);
  if (n < 2) return labels;

  const auto core = core_distances(n, distance, min_cluster_size);
  const auto mst = mutual_reachability_mst(n, distance, core);
  const auto linkage = single_linkage(n, mst);
  auto tree = condense(n, linkage, min_cluster_size);
  const auto selected = select_excess_of_mass(tree);

  std::vector<std::size_t> owner(n, 0);  // selected cluster id, 0 = none
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t c = tree.point_cluster[p];
    while (c != 0 && !selected[c]) c = tree.clusters[c].parent;
    owner[p] = c;
  }
  std::vector<int> relabel(tree.clusters.size(), kNoise);
  int next = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (owner[p] == 0) continue;
    if (relabel[owner[p]] == kNoise) relabel[owner[p]] = next++;
    labels[p] = relabel[owner[p]];
  }
  return labels;
}

ClusterLabeling cluster_segments(std::span<const Segment> segments,
                                 std::size_t min_cluster_size) {
  if (segments.empty()) return {};
  check_lengths(segments);
  auto labels = hdbscan_labels(
      segments.size(),
      [&](std::size_t i, std::size_t j) { return segment_distance(segments[i], segments[j]); },
      min_cluster_size);
  return summarize(segments, std::move(labels));
}

ClusterLabeling cluster_segments(std::span<const Segment> segments, const DistanceMatrix& distances,
                                 std::size_t min_cluster_size) {
  if (segments.empty()) return {};
  check_lengths(segments);
  if (distances.size() != segments.size()) {
    throw std::invalid_argument("distance matrix does not match the segments");
  }
  auto labels = hdbscan_labels(
      segments.size(), [&](std::size_t i, std::size_t j) { return distances(i, j); },
      min_cluster_size);
  return summarize(segments, std::move(labels));
}

std::size_t medoid_index(std::span<const Segment> members) {
  if (members.empty()) throw std::invalid_argument("medoid of an empty set");
  std::size_t best = 0;
  double best_total = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < members.size(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < members.size(); ++j) total += segment_distance(members[i], members[j]);
    if (total < best_total) {
      best_total = total;
      best = i;
    }
  }
  return best;
}

Segment medoid(std::span<const Segment> members) { return members[medoid_index(members)]; }

}  // namespace rsa::cluster
