#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "rhythmseg/clustering.hpp"
#include "rhythmseg/core.hpp"
#include "rhythmseg/network.hpp"

/// File formats: interval, onset, cycle and label CSVs; network and measures
/// JSON.
namespace rsa::io {

using Json = nlohmann::ordered_json;

/// Raised for malformed input files. `row` is the 1-based line number
/// (the header is line 1), or 0 when the problem is not tied to a row.
class LoadError : public std::runtime_error {
public:
  LoadError(const std::string& message, std::size_t row);
  std::size_t row() const { return row_; }

private:
  std::size_t row_;
};

struct Corpus {
  std::vector<IntervalSequence> sequences;
  /// Quantum per song, when known.
  std::map<std::string, double> song_quantum;
  /// Non-positive onset differences dropped while loading.
  std::size_t dropped_intervals = 0;
  /// Unparsable rows tolerated while loading.
  std::size_t skipped_rows = 0;

  /// Throws LoadError on duplicate sequence ids or non-positive quanta.
  void validate() const;
  std::optional<double> quantum_for(const IntervalSequence& seq) const;
};

struct OnsetColumns {
  std::string onset = "onset_s";
  std::string instrument = "instrument";  // optional column
  std::string song = "song";              // optional column
  /// Fraction of data rows that may fail to parse before loading fails.
  double max_bad_fraction = 0.0;
};

/// Onsets grouped by (song, instrument), sorted, then differenced. Zero and
/// negative differences are dropped and counted.
Corpus read_onsets(std::istream& in, const OnsetColumns& columns = {});
Corpus load_onsets(const std::filesystem::path& path, const OnsetColumns& columns = {});

/// `sequence_id,interval_s`; sequences in order of first appearance.
Corpus read_intervals(std::istream& in);
Corpus load_intervals(const std::filesystem::path& path);

using CycleTable = std::map<std::string, std::vector<double>>;

/// `song,cycle_onset_s`; onsets sorted per song.
CycleTable read_cycles(std::istream& in);
CycleTable load_cycles(const std::filesystem::path& path);

/// Sets each song's quantum from its cycle onsets. Returns a warning for
/// every song in the corpus without usable cycles.
std::vector<std::string> attach_quanta(Corpus& corpus, const CycleTable& cycles,
                                       int subdivisions = 16);

void write_intervals(std::ostream& out, std::span<const IntervalSequence> sequences);

/// `sequence_id,start_index,label`.
void write_labels(std::ostream& out, std::span<const Segment> segments,
                  const cluster::ClusterLabeling& labeling);

/// {nodes:[{id,size,r,duration,label}],edges:[{from,to,count}],prune_threshold}
Json network_json(const network::TransitionNetwork& net);

struct Quantality {
  double quantum = 0.0;
  double theta = 0.0;
  double score = 0.0;
};

struct Measures {
  std::optional<double> npvi;
  std::map<std::size_t, std::optional<double>> mean_anisochrony;  // by segment length
  std::optional<Quantality> quantality;
};

Measures compute_measures(std::span<const IntervalSequence> sequences,
                          std::span<const std::size_t> lengths, std::optional<double> quantum,
                          double theta);

/// {npvi, mean_anisochrony:{n:value}, quantality:{quantum,theta,score}}
Json measures_json(const Measures& m);

/// Formats a double with up to 17 significant digits, round-trippable.
std::string format_double(double v);

}  // namespace rsa::io
