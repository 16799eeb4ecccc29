// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Oracles here are written independently of the library code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rhythmseg/cli.hpp"
#include "rhythmseg/clustering.hpp"
#include "rhythmseg/core.hpp"
#include "rhythmseg/network.hpp"
#include "rhythmseg/plots.hpp"
#include "rhythmseg/quantal.hpp"
#include "rhythmseg/synth.hpp"

namespace fs = std::filesystem;
using namespace rsa;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void require(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int failures = 0;

void criterion(int id, const std::string& name, double time_limit_s,
               const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= time_limit_s) o.fail("took " + fmt(secs) + " s, limit " + fmt(time_limit_s) + " s");
  if (!o.pass) ++failures;
  std::printf("%s criterion %2d: %s (%.3f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
              secs, o.detail.empty() ? "" : " -- ", o.detail.c_str());
  std::fflush(stdout);
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<Segment> segments_of(const IntervalSequence& seq, std::size_t n) {
  return extract_segments(seq, n);
}

// Medoid (r, d/q) of every cluster.
std::vector<std::pair<double, double>> medoid_coordinates(const cluster::ClusterLabeling& lab,
                                                          double q) {
  std::vector<std::pair<double, double>> out;
  for (const auto& c : lab.clusters) {
    const double a = c.medoid[0];
    const double b = c.medoid[1];
    out.emplace_back(a / (a + b), (a + b) / q);
  }
  return out;
}

// Fraction of non-noise items whose cluster maps to their true class under
// the best one-to-one cluster-to-class assignment.
double best_matching_accuracy(const std::vector<int>& labels, const std::vector<int>& truth,
                              int classes) {
  std::map<int, std::vector<std::size_t>> counts;  // cluster -> per-class count
  std::size_t clustered = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    auto& row = counts[labels[i]];
    row.resize(static_cast<std::size_t>(classes), 0);
    ++row[static_cast<std::size_t>(truth[i])];
    ++clustered;
  }
  if (clustered == 0) return 0.0;
  const std::size_t full = std::size_t{1} << classes;
  std::vector<long> best(full, -1);
  best[0] = 0;
  for (const auto& [id, row] : counts) {
    std::vector<long> next = best;  // cluster left unmatched
    for (std::size_t mask = 0; mask < full; ++mask) {
      if (best[mask] < 0) continue;
      for (int k = 0; k < classes; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t m2 = mask | (std::size_t{1} << k);
        next[m2] = std::max(next[m2], best[mask] + static_cast<long>(row[static_cast<std::size_t>(k)]));
      }
    }
    best = std::move(next);
  }
  const long matched = *std::max_element(best.begin(), best.end());
  return static_cast<double>(matched) / static_cast<double>(clustered);
}

synth::RepeatTemplate repeated_template() {
  synth::RepeatTemplate t;
  t.multiples = {3, 3, 2, 4, 1};
  t.quantum = 0.5;
  t.noise_sigma = 0.5 / 20.0;
  t.repeats = 200;
  return t;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "worked-example exactness", 1.0, [](Outcome& o) {
    o.require(close(segment_distance(Segment({1, 2, 3}), Segment({4, 5, 6})), 9.0, 1e-12),
              "segment distance");
    const auto pd = normalize(Segment({0.1, 0.1, 0.2}));
    o.require(close(pd.pattern[0], 0.25, 1e-12) && close(pd.pattern[1], 0.25, 1e-12) &&
                  close(pd.pattern[2], 0.5, 1e-12) && close(pd.duration, 0.4, 1e-12),
              "normalize");
    o.require(close(pattern_distance(Pattern({0.25, 0.75}), Pattern({0.75, 0.25})), 0.5, 1e-12),
              "pattern distance");
    o.require(close(rhythm_ratio(3, 2), 0.6, 1e-12), "rhythm ratio");
  });

  criterion(2, "anisochrony anchors", 1.0, [](Outcome& o) {
    o.require(anisochrony(Pattern({0.5, 0.5})) == 0.0, "isochronous pair");
    o.require(close(anisochrony(Pattern({0.25, 0.75})), 0.5, 1e-12), "(0.25, 0.75)");
    for (std::size_t n = 2; n <= 5; ++n) {
      for (std::size_t k = 0; k < n; ++k) {
        const double a = anisochrony(Pattern::corner(n, k));
        o.require(close(a, 1.0, 1e-12), "corner n=" + std::to_string(n) + " gives " + fmt(a));
      }
    }
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double r = i / 1000.0;
      worst = std::max(worst, std::abs(anisochrony(Pattern({r, 1.0 - r})) - std::abs(2 * r - 1)));
    }
    o.require(worst < 1e-12, "line grid max error " + fmt(worst));
  });

  criterion(3, "nPVI equals 200 x mean length-2 anisochrony", 5.0, [](Outcome& o) {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<int> len(2, 200);
    std::uniform_real_distribution<double> logu(std::log(0.05), std::log(5.0));
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> v(static_cast<std::size_t>(len(gen)));
      for (double& x : v) x = std::exp(logu(gen));
      const IntervalSequence seq(v);
      const std::vector<IntervalSequence> one{seq};
      worst = std::max(worst, std::abs(npvi(seq) - 200.0 * mean_anisochrony(one, 2)));
    }
    o.require(worst < 1e-10, "max deviation " + fmt(worst));
  });

  criterion(4, "metric and simplex properties", 30.0, [](Outcome& o) {
    std::mt19937_64 gen(4);
    std::uniform_int_distribution<int> len(2, 6);
    std::uniform_real_distribution<double> val(0.01, 5.0);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    std::size_t failed = 0;
    std::size_t checks = 0;
    auto check = [&](bool ok) {
      ++checks;
      if (!ok) ++failed;
    };
    for (int t = 0; t < 100000; ++t) {
      const auto n = static_cast<std::size_t>(len(gen));
      std::vector<double> a(n), b(n), c(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = val(gen);
        b[i] = val(gen);
        c[i] = val(gen);
      }
      const Segment x(a), y(b), z(c);
      const double dxy = segment_distance(x, y);
      check(dxy >= 0.0);
      check(segment_distance(x, x) == 0.0);
      check(dxy == segment_distance(y, x));
      check(segment_distance(x, z) <= dxy + segment_distance(y, z) + 1e-12);

      const auto px = normalize(x), py = normalize(y), pz = normalize(z);
      const double pxy = pattern_distance(px.pattern, py.pattern);
      check(pxy >= 0.0 && pxy <= 1.0 + 1e-12);
      check(pattern_distance(px.pattern, px.pattern) == 0.0);
      check(pxy == pattern_distance(py.pattern, px.pattern));
      check(pattern_distance(px.pattern, pz.pattern) <=
            pxy + pattern_distance(py.pattern, pz.pattern) + 1e-12);

      double l1 = 0.0;
      for (double v : a) l1 += std::abs(v);
      check(std::abs(px.duration - l1) <= 1e-12 * l1);

      const Segment back = denormalize(px);
      bool round = true;
      for (std::size_t i = 0; i < n; ++i) round &= std::abs(back[i] - a[i]) <= 1e-12 * a[i];
      check(round);

      const double s = scale(gen);
      std::vector<double> sa(a);
      for (double& v : sa) v *= s;
      const auto ps = normalize(Segment(sa));
      bool inv = std::abs(ps.duration - s * px.duration) <= 1e-12 * s * px.duration;
      for (std::size_t i = 0; i < n; ++i) inv &= std::abs(ps.pattern[i] - px.pattern[i]) <= 1e-12;
      check(inv);
    }
    o.require(failed == 0, std::to_string(failed) + " of " + std::to_string(checks) + " failed");
  });

  criterion(5, "pattern-duration anchor points", 10.0, [](Outcome& o) {
    synth::RepeatTemplate t;
    t.multiples = {1, 3, 9};
    t.quantum = 1.0;
    t.noise_sigma = t.quantum / 50.0;
    t.repeats = 200;
    const auto seq = synth::gen_repeated(t, 5);
    const auto segs = segments_of(seq, 2);
    const auto lab = cluster::cluster_segments(segs, 10);
    const auto pts = medoid_coordinates(lab, t.quantum);
    o.require(!pts.empty(), "no clusters");
    const std::vector<std::pair<double, double>> anchors{{0.25, 4}, {0.25, 12}, {0.90, 10}};
    const std::vector<std::pair<double, double>> mirrors{{0.75, 4}, {0.75, 12}, {0.10, 10}};
    for (const auto& [r, d] : anchors) {
      const bool hit = std::any_of(pts.begin(), pts.end(), [&](const auto& p) {
        return std::abs(p.first - r) <= 0.02 && std::abs(p.second - d) <= 0.2;
      });
      o.require(hit, "no medoid near (" + fmt(r) + ", " + fmt(d) + ")");
    }
    for (const auto& [r, d] : mirrors) {
      const bool hit = std::any_of(pts.begin(), pts.end(), [&](const auto& p) {
        return std::abs(p.first - r) <= 0.05 && std::abs(p.second - d) <= 0.5;
      });
      o.require(!hit, "medoid near mirror (" + fmt(r) + ", " + fmt(d) + ")");
    }
  });

  criterion(6, "cluster recovery", 30.0, [](Outcome& o) {
    const auto t = repeated_template();
    const auto seq = synth::gen_repeated(t, 6);
    const auto segs = segments_of(seq, 2);
    const auto lab = cluster::cluster_segments(segs, 10);
    o.require(!lab.clusters.empty(), "no clusters");
    std::vector<std::string> bigrams;
    for (std::size_t i = 0; i < t.multiples.size(); ++i) {
      bigrams.push_back(std::to_string(t.multiples[i]) + ":" +
                        std::to_string(t.multiples[(i + 1) % t.multiples.size()]));
    }
    for (const auto& c : lab.clusters) {
      const auto label = quantal::integer_ratio_label(c.medoid, t.quantum);
      const bool ok = label && std::find(bigrams.begin(), bigrams.end(), *label) != bigrams.end();
      o.require(ok, "cluster " + std::to_string(c.id) + " medoid label " +
                        (label ? *label : std::string("<none>")));
    }
    std::vector<int> truth(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
      truth[i] = static_cast<int>(segs[i].origin().start % t.multiples.size());
    }
    const double acc =
        best_matching_accuracy(lab.labels, truth, static_cast<int>(t.multiples.size()));
    o.require(acc >= 0.95, "matched fraction " + fmt(acc));
  });

  criterion(7, "network recovery", 30.0, [](Outcome& o) {
    const auto t = repeated_template();
    const auto segs = segments_of(synth::gen_repeated(t, 6), 2);
    const auto lab = cluster::cluster_segments(segs, 10);
    const auto net = network::build_network(lab, segs, 15, t.quantum);
    const std::vector<std::string> cycle{"3:3", "3:2", "2:4", "4:1", "1:3", "3:3"};
    std::vector<int> ids;
    for (const auto& l : cycle) {
      const auto* node = net.find_label(l);
      o.require(node != nullptr, "no node " + l);
      if (node) ids.push_back(node->id);
    }
    if (ids.size() == cycle.size()) {
      for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
        o.require(net.edge_count(ids[i], ids[i + 1]) >= 15,
                  "missing edge " + cycle[i] + " -> " + cycle[i + 1]);
      }
      if (o.pass) {
        const std::vector<int> path(ids.begin(), ids.begin() + 4);
        o.require(network::path_rhythm(net, path) == std::vector<int>{3, 3, 2, 4, 1},
                  "cycle path rhythm");
      }
    }

    synth::RepeatTemplate clave = t;
    clave.multiples = {3, 3, 4, 2, 4};
    const auto csegs = segments_of(synth::gen_repeated(clave, 7), 2);
    const auto clab = cluster::cluster_segments(csegs, 10);
    const auto cnet = network::build_network(clab, csegs, 15, clave.quantum);
    std::vector<int> cpath;
    for (const std::string l : {"3:3", "3:4", "4:2", "2:4"}) {
      const auto* node = cnet.find_label(l);
      o.require(node != nullptr, "no clave node " + l);
      if (node) cpath.push_back(node->id);
    }
    if (cpath.size() == 4) {
      o.require(network::path_rhythm(cnet, cpath) == std::vector<int>{3, 3, 4, 2, 4},
                "clave path rhythm");
    }
  });

  criterion(8, "quantality detection", 5.0, [](Outcome& o) {
    const double q = 0.2;
    const std::vector<IntervalSequence> geo{
        synth::gen_quantal_geometric(10000, q, 0.5, q / 20.0, 8)};
    const double s = quantal::quantality_score(geo, q, 0.25);
    o.require(s >= 0.95, "geometric score " + fmt(s));
    const std::vector<IntervalSequence> uni{synth::gen_uniform(10000, 0.2, 2.0, 9)};
    for (int i = 0; i <= 400; ++i) {
      const double cand = 0.1 + i * 0.001;
      const double u = quantal::quantality_score(uni, cand, 0.25);
      o.require(std::abs(u - 0.5) <= 0.05, "uniform score " + fmt(u) + " at q=" + fmt(cand));
    }
  });

  criterion(9, "duration boundary soundness", 10.0, [](Outcome& o) {
    const double lo = 0.2, hi = 2.0;
    const auto segs = segments_of(synth::gen_uniform(100001, lo, hi, 10), 2);
    o.require(segs.size() == 100000, "segment count");
    std::size_t below = 0, above = 0;
    for (const auto& s : segs) {
      const double d = s.duration();
      const double r = s[0] / d;
      const double dmin = lo / std::min(r, 1.0 - r);
      const double dmax = hi / std::max(r, 1.0 - r);
      if (d < dmin * (1.0 - 1e-12)) ++below;
      if (d > dmax * (1.0 + 1e-12)) ++above;
      if (std::abs(viz::min_duration_boundary(r, lo) - dmin) > 1e-12 * dmin ||
          std::abs(viz::max_duration_boundary(r, hi) - dmax) > 1e-12 * dmax) {
        o.fail("library boundary disagrees at r=" + fmt(r));
      }
    }
    o.require(below == 0 && above == 0,
              std::to_string(below) + " below, " + std::to_string(above) + " above");
  });

  criterion(10, "visualization determinism and consistency", 30.0, [](Outcome& o) {
    auto render = [](std::uint64_t seed) {
      const auto t = repeated_template();
      const auto seq = synth::gen_repeated(t, seed);
      const auto s2 = segments_of(seq, 2);
      const auto s3 = segments_of(seq, 3);
      const auto l2 = cluster::cluster_segments(s2, 10);
      const auto l3 = cluster::cluster_segments(s3, 10);
      const auto n2 = network::build_network(l2, s2, 15, t.quantum);
      const auto n3 = network::build_network(l3, s3, 15, t.quantum);
      viz::PlotSpec spec;
      spec.quantum = t.quantum;
      spec.min_interval = 0.5;
      spec.max_interval = 2.0;
      return std::vector<std::string>{
          viz::raster_plot(s2, spec),
          viz::phase_plot(s2, spec, true),
          viz::pattern_duration_plot(s2, {&l2, &n2}, spec),
          viz::ratio_plot(s2, spec),
          viz::triangle_plot(s3, {&l3, &n3}, spec),
      };
    };
    const auto a = render(11);
    const auto b = render(11);
    const char* names[] = {"raster", "phase", "pattern-duration", "ratio", "triangle"};
    for (std::size_t i = 0; i < a.size(); ++i) {
      o.require(!a[i].empty() && a[i] == b[i], std::string(names[i]) + " not byte-identical");
    }

    const auto segs = segments_of(synth::gen_repeated(repeated_template(), 12), 2);
    for (const std::optional<double> bw : {std::optional<double>{}, std::optional<double>{0.03}}) {
      viz::PlotSpec spec;
      spec.bandwidth = bw;
      const auto ratio = viz::ratio_figure(segs, spec);
      const auto pd = viz::pattern_duration_figure(segs, {}, spec);
      if (!pd.ratio_marginal || pd.ratio_marginal->density.size() != ratio.curve.density.size()) {
        o.fail("marginal missing or different grid");
        continue;
      }
      double worst = 0.0;
      for (std::size_t i = 0; i < ratio.curve.density.size(); ++i) {
        worst = std::max(worst, std::abs(ratio.curve.density[i] - pd.ratio_marginal->density[i]));
        worst = std::max(worst, std::abs(ratio.curve.grid[i] - pd.ratio_marginal->grid[i]));
      }
      o.require(worst < 1e-9, "ratio curve vs marginal differ by " + fmt(worst));
    }

    const auto tri = viz::triangle_figure(std::vector<Segment>{Segment({1.0, 1.0, 1.0})});
    const auto& f = tri.frame;
    const double cx = (f.bottom_left.first + f.bottom_right.first + f.top.first) / 3.0;
    const double cy = (f.bottom_left.second + f.bottom_right.second + f.top.second) / 3.0;
    o.require(tri.points.size() == 1 && std::hypot(tri.points[0].px - cx, tri.points[0].py - cy) < 0.5,
              "isochronous point off the centroid");
  });

  criterion(11, "no near-isochronous length-3 cluster", 30.0, [](Outcome& o) {
    const auto segs = segments_of(synth::gen_repeated(repeated_template(), 6), 3);
    const auto lab = cluster::cluster_segments(segs, 10);
    o.require(!lab.clusters.empty(), "no clusters");
    const auto iso = Pattern::isochronous(3);
    for (const auto& c : lab.clusters) {
      const double d = pattern_distance(c.medoid_pd.pattern, iso);
      o.require(d >= 0.05, "cluster " + std::to_string(c.id) + " at distance " + fmt(d));
    }
  });

  criterion(12, "end-to-end CLI smoke", 60.0, [](Outcome& o) {
    const fs::path dir = fs::temp_directory_path() / "rhythmseg_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string csv = (dir / "intervals.csv").string();
    std::ostringstream out, err;
    int code = cli::run({"rhythmseg", "synth", "--kind", "repeated", "--seed", "12", "-o", csv},
                        out, err);
    o.require(code == 0, "synth exit " + std::to_string(code) + ": " + err.str());
    code = cli::run({"rhythmseg", "analyze", "--intervals", csv, "--quantum", "0.5", "--out-dir",
                     (dir / "out").string()},
                    out, err);
    o.require(code == 0, "analyze exit " + std::to_string(code) + ": " + err.str());
    for (const char* f : {"measures.json", "labels_n2.csv", "network_n2.json"}) {
      o.require(fs::exists(dir / "out" / f) && !slurp(dir / "out" / f).empty(),
                std::string("missing ") + f);
    }
    int svgs = 0;
    if (fs::exists(dir / "out")) {
      for (const auto& e : fs::directory_iterator(dir / "out")) {
        if (e.path().extension() == ".svg" && slurp(e.path()).find("<svg") != std::string::npos) {
          ++svgs;
        }
      }
    }
    o.require(svgs >= 4, std::to_string(svgs) + " SVG plots");
    fs::remove_all(dir);
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
