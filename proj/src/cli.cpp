#include "rhythmseg/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "rhythmseg/clustering.hpp"
#include "rhythmseg/io.hpp"
#include "rhythmseg/network.hpp"
#include "rhythmseg/plots.hpp"
#include "rhythmseg/quantal.hpp"
#include "rhythmseg/synth.hpp"

namespace rsa::cli {

namespace {

namespace fs = std::filesystem;

struct InputOptions {
  std::string intervals;
  std::string onsets;
  std::string cycles;
  std::string onset_column = "onset_s";
  std::string instrument_column = "instrument";
  std::string song_column = "song";
  double max_bad_fraction = 0.0;
  int subdivisions = 16;
  std::optional<double> quantum;
  std::string song;
  std::string instrument;

  void add_to(CLI::App& cmd) {
    auto* group = cmd.add_option_group("input");
    group->add_option("--intervals", intervals, "interval CSV (sequence_id,interval_s)");
    group->add_option("--onsets", onsets, "onset CSV (onset_s[,instrument][,song])");
    group->require_option(1);
    cmd.add_option("--onset-column", onset_column, "onset column name")->capture_default_str();
    cmd.add_option("--instrument-column", instrument_column, "instrument column name")
        ->capture_default_str();
    cmd.add_option("--song-column", song_column, "song column name")->capture_default_str();
    cmd.add_option("--max-bad-fraction", max_bad_fraction,
                   "fraction of onset rows allowed to be unparsable")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--cycles", cycles, "cycle CSV (song,cycle_onset_s) to derive the quantum");
    cmd.add_option("--subdivisions", subdivisions, "quanta per metrical cycle")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--quantum", quantum, "quantum in seconds (overrides --cycles)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--song", song, "only analyze this song");
    cmd.add_option("--instrument", instrument, "only analyze this instrument");
  }
};

struct Loaded {
  io::Corpus corpus;
  std::optional<double> quantum;
};

Loaded load_input(const InputOptions& opt, std::ostream& err) {
  Loaded loaded;
  if (!opt.intervals.empty()) {
    loaded.corpus = io::load_intervals(opt.intervals);
  } else {
    io::OnsetColumns columns{opt.onset_column, opt.instrument_column, opt.song_column,
                             opt.max_bad_fraction};
    loaded.corpus = io::load_onsets(opt.onsets, columns);
    if (loaded.corpus.dropped_intervals > 0) {
      err << "warning: dropped " << loaded.corpus.dropped_intervals
          << " non-positive onset differences\n";
    }
    if (loaded.corpus.skipped_rows > 0) {
      err << "warning: skipped " << loaded.corpus.skipped_rows << " unparsable rows\n";
    }
  }
  auto& seqs = loaded.corpus.sequences;
  if (!opt.song.empty() || !opt.instrument.empty()) {
    std::erase_if(seqs, [&](const IntervalSequence& s) {
      return (!opt.song.empty() && s.song() != opt.song) ||
             (!opt.instrument.empty() && s.instrument() != opt.instrument);
    });
  }
  if (seqs.empty()) throw io::LoadError("no interval sequences to analyze", 0);

  if (opt.quantum) {
    loaded.quantum = opt.quantum;
  } else if (!opt.cycles.empty()) {
    for (const auto& w : io::attach_quanta(loaded.corpus, io::load_cycles(opt.cycles),
                                           opt.subdivisions)) {
      err << "warning: " << w << '\n';
    }
    std::set<double> quanta;
    bool all_known = true;
    for (const auto& s : seqs) {
      const auto q = loaded.corpus.quantum_for(s);
      if (q) {
        quanta.insert(*q);
      } else {
        all_known = false;
      }
    }
    if (all_known && quanta.size() == 1) {
      loaded.quantum = *quanta.begin();
    } else if (quanta.size() > 1) {
      err << "warning: songs have different quanta; select one with --song to enable quanta "
             "axes\n";
    }
  }
  return loaded;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::LoadError("cannot write '" + path.string() + "'", 0);
  out << text;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text(path, text);
  }
}

io::Json optional_json(const std::optional<double>& v) {
  return v ? io::Json(*v) : io::Json(nullptr);
}

std::pair<double, double> interval_bounds(std::span<const IntervalSequence> seqs) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& s : seqs) {
    for (double v : s.intervals()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

// ------------------------------------------------------------------ synth

struct SynthOptions {
  std::string kind = "repeated";
  std::size_t count = 1000;
  int repeats = 200;
  std::optional<double> quantum;
  std::optional<double> sigma;
  std::uint64_t seed = 0;
  std::string tmpl = "3,3,2,4,1";
  double lo = 0.2;
  double hi = 2.0;
  double success_p = 0.5;
  int max_multiple = 11;
  double occupancy = 0.5;
  std::string id;
  std::string out;
};

std::vector<int> parse_template(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--template", "not a comma-separated integer list: " + text);
    }
  }
  return out;
}

int run_synth(const SynthOptions& o, std::ostream& out) {
  IntervalSequence seq;
  const std::string id = o.id.empty() ? o.kind : o.id;
  if (o.kind == "uniform") {
    seq = synth::gen_uniform(o.count, o.lo, o.hi, o.seed, id);
  } else if (o.kind == "geometric") {
    const double q = o.quantum.value_or(0.2);
    seq = synth::gen_quantal_geometric(o.count, q, o.success_p, o.sigma.value_or(q / 20.0), o.seed,
                                       id);
  } else if (o.kind == "quantal-uniform") {
    const double q = o.quantum.value_or(0.2);
    seq = synth::gen_quantal_uniform(o.count, q, o.max_multiple, o.sigma.value_or(q / 20.0),
                                     o.seed, id);
  } else if (o.kind == "repeated") {
    synth::RepeatTemplate t;
    t.multiples = parse_template(o.tmpl);
    t.quantum = o.quantum.value_or(0.5);
    t.noise_sigma = o.sigma.value_or(t.quantum / 20.0);
    t.repeats = o.repeats;
    seq = synth::gen_repeated(t, o.seed, id);
  } else {
    const double grid = o.quantum.value_or(0.25);
    seq = synth::gen_grid_events(o.count, grid, o.sigma.value_or(grid / 20.0), o.seed, o.occupancy,
                                 id);
  }
  std::ostringstream text;
  io::write_intervals(text, std::span<const IntervalSequence>(&seq, 1));
  emit(o.out, text.str(), out);
  return kExitOk;
}

// ------------------------------------------------------------------ measure

struct MeasureOptions {
  InputOptions input;
  std::vector<std::size_t> lengths{2, 3};
  double theta = quantal::kDefaultTheta;
  std::string format = "json";
};

int run_measure(const MeasureOptions& o, std::ostream& out, std::ostream& err) {
  const Loaded in = load_input(o.input, err);
  const auto m = io::compute_measures(in.corpus.sequences, o.lengths, in.quantum, o.theta);
  if (o.format == "json") {
    out << io::measures_json(m).dump(2) << '\n';
    return kExitOk;
  }
  auto show = [](const std::optional<double>& v) { return v ? io::format_double(*v) : "n/a"; };
  out << "npvi\t" << show(m.npvi) << '\n';
  for (const auto& [n, v] : m.mean_anisochrony) {
    out << "mean_anisochrony[n=" << n << "]\t" << show(v) << '\n';
  }
  if (m.quantality) {
    out << "quantum\t" << io::format_double(m.quantality->quantum) << '\n';
    out << "theta\t" << io::format_double(m.quantality->theta) << '\n';
    out << "quantality\t" << io::format_double(m.quantality->score) << '\n';
  } else {
    out << "quantality\tn/a\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------ cluster

struct ClusterOptions {
  InputOptions input;
  std::size_t n = 2;
  std::size_t min_cluster_size = cluster::kDefaultMinClusterSize;
  std::size_t prune_threshold = network::kDefaultPruneThreshold;
  std::string labels_out;
  std::string network_out;
};

struct Analysis {
  std::vector<Segment> segments;
  cluster::ClusterLabeling labeling;
  network::TransitionNetwork network;
};

Analysis analyze_segments(std::span<const IntervalSequence> seqs, std::size_t n,
                          std::size_t min_cluster_size, std::size_t prune_threshold,
                          std::optional<double> quantum) {
  Analysis a;
  a.segments = extract_segments(seqs, n);
  a.labeling = cluster::cluster_segments(a.segments, min_cluster_size);
  a.network = network::build_network(a.labeling, std::span<const Segment>(a.segments),
                                     prune_threshold, quantum);
  return a;
}

int run_cluster(const ClusterOptions& o, std::ostream& out, std::ostream& err) {
  const Loaded in = load_input(o.input, err);
  const Analysis a =
      analyze_segments(in.corpus.sequences, o.n, o.min_cluster_size, o.prune_threshold, in.quantum);
  std::ostringstream labels;
  io::write_labels(labels, a.segments, a.labeling);
  emit(o.labels_out, labels.str(), out);
  if (!o.network_out.empty()) {
    emit(o.network_out, io::network_json(a.network).dump(2) + "\n", out);
  }
  err << "clusters: " << a.labeling.clusters.size() << ", noise: " << a.labeling.noise_count()
      << " of " << a.segments.size() << " segments, edges: " << a.network.edges.size() << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ plot

struct PlotOptions {
  InputOptions input;
  std::string kind = "pattern-duration";
  int annotate_max = 6;
  std::optional<double> bandwidth;
  bool boundaries = false;
  bool clusters = false;
  bool trajectories = false;
  std::size_t min_cluster_size = cluster::kDefaultMinClusterSize;
  std::size_t prune_threshold = network::kDefaultPruneThreshold;
  double width = 560.0;
  double height = 500.0;
  std::string out;
};

viz::PlotSpec make_spec(std::optional<double> quantum, int annotate_max,
                        std::optional<double> bandwidth, double width, double height) {
  viz::PlotSpec spec;
  spec.quantum = quantum;
  spec.annotation_max = annotate_max;
  spec.bandwidth = bandwidth;
  spec.width = width;
  spec.height = height;
  return spec;
}

std::string render_plot(const std::string& kind, std::span<const IntervalSequence> seqs,
                        viz::PlotSpec spec, bool overlay, bool trajectories, bool boundaries,
                        std::size_t min_cluster_size, std::size_t prune_threshold) {
  if (boundaries) {
    const auto [lo, hi] = interval_bounds(seqs);
    spec.min_interval = lo;
    spec.max_interval = hi;
  }
  const std::size_t n = kind == "triangle" ? 3 : 2;
  Analysis a;
  viz::Overlay ov;
  if (overlay) {
    a = analyze_segments(seqs, n, min_cluster_size, prune_threshold, spec.quantum);
    ov = {&a.labeling, &a.network};
  } else {
    a.segments = extract_segments(seqs, n);
  }
  if (kind == "raster") return viz::raster_plot(a.segments, spec);
  if (kind == "phase") return viz::phase_plot(a.segments, spec, trajectories);
  if (kind == "ratio") return viz::ratio_plot(a.segments, spec);
  if (kind == "triangle") return viz::triangle_plot(a.segments, ov, spec);
  return viz::pattern_duration_plot(a.segments, ov, spec);
}

int run_plot(const PlotOptions& o, std::ostream& out, std::ostream& err) {
  const Loaded in = load_input(o.input, err);
  const auto spec = make_spec(in.quantum, o.annotate_max, o.bandwidth, o.width, o.height);
  emit(o.out,
       render_plot(o.kind, in.corpus.sequences, spec, o.clusters, o.trajectories, o.boundaries,
                   o.min_cluster_size, o.prune_threshold),
       out);
  return kExitOk;
}

// ------------------------------------------------------------------ analyze

struct AnalyzeOptions {
  InputOptions input;
  std::string out_dir;
  std::size_t min_cluster_size = cluster::kDefaultMinClusterSize;
  std::size_t prune_threshold = network::kDefaultPruneThreshold;
  double theta = quantal::kDefaultTheta;
  int annotate_max = 6;
  std::optional<double> bandwidth;
};

int run_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
  const Loaded in = load_input(o.input, err);
  const auto& seqs = in.corpus.sequences;
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  auto save = [&](const std::string& name, const std::string& text) {
    write_text(dir / name, text);
    outputs.push_back(name);
  };

  const std::vector<std::size_t> lengths{2, 3};
  const auto measures = io::compute_measures(seqs, lengths, in.quantum, o.theta);
  save("measures.json", io::measures_json(measures).dump(2) + "\n");

  io::Json clusters_summary = io::Json::object();
  std::optional<Analysis> pairs;
  std::optional<Analysis> triples;
  for (std::size_t n : lengths) {
    Analysis a = analyze_segments(seqs, n, o.min_cluster_size, o.prune_threshold, in.quantum);
    std::ostringstream labels;
    io::write_labels(labels, a.segments, a.labeling);
    save("labels_n" + std::to_string(n) + ".csv", labels.str());
    save("network_n" + std::to_string(n) + ".json", io::network_json(a.network).dump(2) + "\n");
    clusters_summary[std::to_string(n)] = {{"segments", a.segments.size()},
                                           {"clusters", a.labeling.clusters.size()},
                                           {"noise", a.labeling.noise_count()},
                                           {"edges", a.network.edges.size()}};
    (n == 2 ? pairs : triples) = std::move(a);
  }

  auto spec = make_spec(in.quantum, o.annotate_max, o.bandwidth, 560.0, 500.0);
  const auto [lo, hi] = interval_bounds(seqs);
  if (!pairs->segments.empty()) {
    save("raster.svg", viz::raster_plot(pairs->segments, spec));
    save("phase.svg", viz::phase_plot(pairs->segments, spec, true));
    auto pd_spec = spec;
    pd_spec.min_interval = lo;
    pd_spec.max_interval = hi;
    save("pattern_duration.svg",
         viz::pattern_duration_plot(pairs->segments, {&pairs->labeling, &pairs->network}, pd_spec));
  } else {
    err << "warning: fewer than 2 intervals per sequence; skipping length-2 plots\n";
  }
  if (pairs->segments.size() >= 2) {
    save("ratio.svg", viz::ratio_plot(pairs->segments, spec));
  }
  if (!triples->segments.empty()) {
    save("triangle.svg",
         viz::triangle_plot(triples->segments, {&triples->labeling, &triples->network}, spec));
  }

  io::Json manifest;
  manifest["tool"] = "rhythmseg";
  manifest["command"] = "analyze";
  io::Json params;
  params["input"] = o.input.intervals.empty() ? o.input.onsets : o.input.intervals;
  params["input_kind"] = o.input.intervals.empty() ? "onsets" : "intervals";
  params["cycles"] = o.input.cycles.empty() ? io::Json(nullptr) : io::Json(o.input.cycles);
  params["subdivisions"] = o.input.subdivisions;
  params["quantum"] = optional_json(in.quantum);
  params["song"] = o.input.song;
  params["instrument"] = o.input.instrument;
  params["segment_lengths"] = lengths;
  params["min_cluster_size"] = o.min_cluster_size;
  params["prune_threshold"] = o.prune_threshold;
  params["theta"] = o.theta;
  params["annotate_max"] = o.annotate_max;
  params["bandwidth"] = optional_json(o.bandwidth);
  manifest["parameters"] = std::move(params);
  manifest["sequences"] = seqs.size();
  manifest["clusters"] = std::move(clusters_summary);
  outputs.push_back("manifest.json");
  manifest["outputs"] = outputs;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << outputs.size() << " files to " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rhythmic segment analysis of inter-onset intervals", "rhythmseg"};
  app.require_subcommand(1);

  SynthOptions synth_opt;
  auto* synth = app.add_subcommand("synth", "generate a synthetic interval sequence");
  synth->add_option("--kind", synth_opt.kind, "dataset kind")
      ->check(CLI::IsMember({"uniform", "geometric", "quantal-uniform", "repeated", "grid"}))
      ->capture_default_str();
  synth->add_option("--count", synth_opt.count, "number of intervals")->capture_default_str();
  synth->add_option("--repeats", synth_opt.repeats, "template repetitions (repeated)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--quantum", synth_opt.quantum, "quantum or grid size in seconds")
      ->check(CLI::PositiveNumber);
  synth->add_option("--sigma", synth_opt.sigma, "noise sd in seconds (default quantum/20)")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", synth_opt.seed, "random seed")->required();
  synth->add_option("--template", synth_opt.tmpl, "comma-separated multiples (repeated)")
      ->capture_default_str();
  synth->add_option("--lo", synth_opt.lo, "lower bound (uniform)")->capture_default_str();
  synth->add_option("--hi", synth_opt.hi, "upper bound (uniform)")->capture_default_str();
  synth->add_option("--p", synth_opt.success_p, "success probability (geometric)")
      ->capture_default_str();
  synth->add_option("--max-multiple", synth_opt.max_multiple, "largest multiple (quantal-uniform)")
      ->capture_default_str();
  synth->add_option("--occupancy", synth_opt.occupancy, "slot occupancy (grid)")
      ->capture_default_str();
  synth->add_option("--id", synth_opt.id, "sequence id (default: the kind)");
  synth->add_option("-o,--out", synth_opt.out, "output CSV (default stdout)");

  MeasureOptions measure_opt;
  auto* measure = app.add_subcommand("measure", "nPVI, mean anisochrony and quantality");
  measure_opt.input.add_to(*measure);
  measure->add_option("--n", measure_opt.lengths, "segment lengths for anisochrony")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  measure->add_option("--theta", measure_opt.theta, "near-multiple threshold (fraction of quantum)")
      ->check(CLI::Range(0.0, 0.5))
      ->capture_default_str();
  measure->add_option("--format", measure_opt.format, "json or table")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  ClusterOptions cluster_opt;
  auto* cluster_cmd = app.add_subcommand("cluster", "cluster segments and build the network");
  cluster_opt.input.add_to(*cluster_cmd);
  cluster_cmd->add_option("--n", cluster_opt.n, "segment length")
      ->check(CLI::Range(std::size_t{2}, std::size_t{64}))
      ->capture_default_str();
  cluster_cmd->add_option("--min-cluster-size", cluster_opt.min_cluster_size)
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  cluster_cmd->add_option("--prune-threshold", cluster_opt.prune_threshold)
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  cluster_cmd->add_option("--labels", cluster_opt.labels_out, "labels CSV (default stdout)");
  cluster_cmd->add_option("--network", cluster_opt.network_out, "network JSON");

  PlotOptions plot_opt;
  auto* plot = app.add_subcommand("plot", "render one plot as SVG");
  plot_opt.input.add_to(*plot);
  plot->add_option("--kind", plot_opt.kind, "plot type")
      ->check(CLI::IsMember({"raster", "phase", "pattern-duration", "ratio", "triangle"}))
      ->capture_default_str();
  plot->add_option("--annotate-max", plot_opt.annotate_max, "largest annotated multiple")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  plot->add_option("--bandwidth", plot_opt.bandwidth, "KDE bandwidth (default Silverman)")
      ->check(CLI::PositiveNumber);
  plot->add_flag("--boundaries", plot_opt.boundaries, "draw duration boundaries");
  plot->add_flag("--clusters", plot_opt.clusters, "overlay clusters and the transition network");
  plot->add_flag("--trajectories", plot_opt.trajectories, "connect successive segments (phase)");
  plot->add_option("--min-cluster-size", plot_opt.min_cluster_size)
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  plot->add_option("--prune-threshold", plot_opt.prune_threshold)
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  plot->add_option("--width", plot_opt.width)->check(CLI::PositiveNumber)->capture_default_str();
  plot->add_option("--height", plot_opt.height)->check(CLI::PositiveNumber)->capture_default_str();
  plot->add_option("-o,--out", plot_opt.out, "output SVG (default stdout)");

  AnalyzeOptions analyze_opt;
  auto* analyze = app.add_subcommand("analyze", "full pipeline into an output directory");
  analyze_opt.input.add_to(*analyze);
  analyze->add_option("--out-dir", analyze_opt.out_dir, "output directory")->required();
  analyze->add_option("--min-cluster-size", analyze_opt.min_cluster_size)
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  analyze->add_option("--prune-threshold", analyze_opt.prune_threshold)
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  analyze->add_option("--theta", analyze_opt.theta)->check(CLI::Range(0.0, 0.5))->capture_default_str();
  analyze->add_option("--annotate-max", analyze_opt.annotate_max)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  analyze->add_option("--bandwidth", analyze_opt.bandwidth)->check(CLI::PositiveNumber);

  std::vector<std::string> rest(args.rbegin(), args.rend());
  if (!rest.empty()) rest.pop_back();  // program name
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return run_synth(synth_opt, out);
    if (measure->parsed()) return run_measure(measure_opt, out, err);
    if (cluster_cmd->parsed()) return run_cluster(cluster_opt, out, err);
    if (plot->parsed()) return run_plot(plot_opt, out, err);
    if (analyze->parsed()) return run_analyze(analyze_opt, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const io::LoadError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace rsa::cli
