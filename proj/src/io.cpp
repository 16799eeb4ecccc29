#include "rhythmseg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "rhythmseg/quantal.hpp"

namespace rsa::io {

LoadError::LoadError(const std::string& message, std::size_t row)
    : std::runtime_error(row > 0 ? "row " + std::to_string(row) + ": " + message : message),
      row_(row) {}

void Corpus::validate() const {
  std::set<std::string> ids;
  for (const auto& s : sequences) {
    if (!ids.insert(s.id()).second) throw LoadError("duplicate sequence id '" + s.id() + "'", 0);
  }
  for (const auto& [song, q] : song_quantum) {
    if (!(q > 0.0)) throw LoadError("non-positive quantum for song '" + song + "'", 0);
  }
}

std::optional<double> Corpus::quantum_for(const IntervalSequence& seq) const {
  const auto it = song_quantum.find(seq.song());
  if (it == song_quantum.end()) return std::nullopt;
  return it->second;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc{} ? end : buf);
}

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      cell += c;
    } else if (c == ',' && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = text.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

/// Line-oriented CSV reader that tracks 1-based line numbers and skips blank
/// lines.
class CsvReader {
public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& cells) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty()) continue;
      cells = split_row(line);
      return true;
    }
    return false;
  }

  std::size_t line() const { return line_; }

private:
  std::istream& in_;
  std::size_t line_ = 0;
};

std::optional<std::size_t> column_index(const std::vector<std::string>& header,
                                        const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::size_t require_column(const std::vector<std::string>& header, const std::string& name,
                           std::size_t row) {
  const auto idx = column_index(header, name);
  if (!idx) throw LoadError("missing required column '" + name + "'", row);
  return *idx;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path.string() + "'", 0);
  return in;
}

std::string cell_at(const std::vector<std::string>& cells, std::optional<std::size_t> idx) {
  if (!idx || *idx >= cells.size()) return {};
  return cells[*idx];
}

}  // namespace

Corpus read_onsets(std::istream& in, const OnsetColumns& columns) {
  CsvReader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header)) throw LoadError("empty onset file (no header)", 1);
  const std::size_t onset_col = require_column(header, columns.onset, reader.line());
  const auto instrument_col = column_index(header, columns.instrument);
  const auto song_col = column_index(header, columns.song);

  struct Group {
    std::string song;
    std::string instrument;
    std::vector<double> onsets;
  };
  std::vector<Group> groups;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::size_t rows = 0;
  std::size_t bad = 0;
  std::size_t first_bad_row = 0;

  std::vector<std::string> cells;
  while (reader.next(cells)) {
    ++rows;
    const auto onset = onset_col < cells.size() ? parse_number(cells[onset_col]) : std::nullopt;
    if (!onset) {
      if (bad++ == 0) first_bad_row = reader.line();
      continue;
    }
    const std::string song = cell_at(cells, song_col);
    const std::string instrument = cell_at(cells, instrument_col);
    const auto key = std::make_pair(song, instrument);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      groups.push_back({song, instrument, {}});
    }
    groups[it->second].onsets.push_back(*onset);
  }
  if (bad > 0 && static_cast<double>(bad) > columns.max_bad_fraction * static_cast<double>(rows)) {
    throw LoadError("unparsable onset value (" + std::to_string(bad) + " of " +
                        std::to_string(rows) + " rows bad)",
                    first_bad_row);
  }

  Corpus corpus;
  corpus.skipped_rows = bad;
  for (auto& g : groups) {
    std::sort(g.onsets.begin(), g.onsets.end());
    std::vector<double> intervals;
    for (std::size_t i = 1; i < g.onsets.size(); ++i) {
      const double d = g.onsets[i] - g.onsets[i - 1];
      if (d > 0.0) {
        intervals.push_back(d);
      } else {
        ++corpus.dropped_intervals;
      }
    }
    std::string id = g.song;
    if (!g.instrument.empty()) id += (id.empty() ? "" : "/") + g.instrument;
    if (id.empty()) id = "onsets";
    corpus.sequences.emplace_back(std::move(intervals), id, g.instrument, g.song);
  }
  corpus.validate();
  return corpus;
}

Corpus load_onsets(const std::filesystem::path& path, const OnsetColumns& columns) {
  auto in = open(path);
  return read_onsets(in, columns);
}

Corpus read_intervals(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> header;
  Corpus corpus;
  if (!reader.next(header)) return corpus;
  const std::size_t id_col = require_column(header, "sequence_id", reader.line());
  const std::size_t value_col = require_column(header, "interval_s", reader.line());

  std::vector<std::pair<std::string, std::vector<double>>> seqs;
  std::map<std::string, std::size_t> index;
  std::vector<std::string> cells;
  while (reader.next(cells)) {
    const std::string id = cell_at(cells, id_col);
    const auto value = value_col < cells.size() ? parse_number(cells[value_col]) : std::nullopt;
    if (!value) throw LoadError("unparsable interval", reader.line());
    if (!(*value > 0.0)) {
      throw LoadError("non-positive interval " + cell_at(cells, value_col), reader.line());
    }
    auto it = index.find(id);
    if (it == index.end()) {
      it = index.emplace(id, seqs.size()).first;
      seqs.emplace_back(id, std::vector<double>{});
    }
    seqs[it->second].second.push_back(*value);
  }
  for (auto& [id, values] : seqs) corpus.sequences.emplace_back(std::move(values), id);
  return corpus;
}

Corpus load_intervals(const std::filesystem::path& path) {
  auto in = open(path);
  return read_intervals(in);
}

CycleTable read_cycles(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> header;
  CycleTable table;
  if (!reader.next(header)) return table;
  const std::size_t song_col = require_column(header, "song", reader.line());
  const std::size_t onset_col = require_column(header, "cycle_onset_s", reader.line());
  std::vector<std::string> cells;
  while (reader.next(cells)) {
    const auto onset = onset_col < cells.size() ? parse_number(cells[onset_col]) : std::nullopt;
    if (!onset) throw LoadError("unparsable cycle onset", reader.line());
    table[cell_at(cells, song_col)].push_back(*onset);
  }
  for (auto& [song, onsets] : table) std::sort(onsets.begin(), onsets.end());
  return table;
}

CycleTable load_cycles(const std::filesystem::path& path) {
  auto in = open(path);
  return read_cycles(in);
}

std::vector<std::string> attach_quanta(Corpus& corpus, const CycleTable& cycles,
                                       int subdivisions) {
  std::vector<std::string> warnings;
  std::set<std::string> songs;
  for (const auto& s : corpus.sequences) songs.insert(s.song());
  for (const auto& song : songs) {
    const auto it = cycles.find(song);
    if (it == cycles.end()) {
      warnings.push_back("no cycle annotations for song '" + song +
                         "'; quantum unavailable, quanta axes disabled");
      continue;
    }
    try {
      corpus.song_quantum[song] = quantal::quantum_from_cycles(it->second, subdivisions);
    } catch (const std::invalid_argument& e) {
      warnings.push_back("cannot derive quantum for song '" + song + "': " + e.what());
    }
  }
  return warnings;
}

void write_intervals(std::ostream& out, std::span<const IntervalSequence> sequences) {
  out << "sequence_id,interval_s\n";
  for (const auto& seq : sequences) {
    for (double v : seq.intervals()) out << seq.id() << ',' << format_double(v) << '\n';
  }
}

void write_labels(std::ostream& out, std::span<const Segment> segments,
                  const cluster::ClusterLabeling& labeling) {
  if (labeling.labels.size() != segments.size()) {
    throw std::invalid_argument("labeling does not match the segments");
  }
  out << "sequence_id,start_index,label\n";
  for (std::size_t i = 0; i < segments.size(); ++i) {
    out << segments[i].origin().sequence_id << ',' << segments[i].origin().start << ','
        << labeling.labels[i] << '\n';
  }
}

Json network_json(const network::TransitionNetwork& net) {
  Json nodes = Json::array();
  for (const auto& n : net.nodes) {
    Json node;
    node["id"] = n.id;
    node["size"] = n.size;
    node["r"] = n.medoid.pattern.ratio();
    node["duration"] = n.medoid.duration;
    node["label"] = n.label ? Json(*n.label) : Json(nullptr);
    nodes.push_back(std::move(node));
  }
  Json edges = Json::array();
  for (const auto& e : net.edges) {
    Json edge;
    edge["from"] = e.from;
    edge["to"] = e.to;
    edge["count"] = e.count;
    edges.push_back(std::move(edge));
  }
  Json out;
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  out["prune_threshold"] = net.prune_threshold;
  return out;
}

Measures compute_measures(std::span<const IntervalSequence> sequences,
                          std::span<const std::size_t> lengths, std::optional<double> quantum,
                          double theta) {
  Measures m;
  try {
    m.npvi = npvi(sequences);
  } catch (const std::invalid_argument&) {
    m.npvi = std::nullopt;
  }
  for (std::size_t n : lengths) {
    try {
      m.mean_anisochrony[n] = mean_anisochrony(sequences, n);
    } catch (const std::invalid_argument&) {
      m.mean_anisochrony[n] = std::nullopt;
    }
  }
  if (quantum) {
    m.quantality = Quantality{*quantum, theta, quantal::quantality_score(sequences, *quantum, theta)};
  }
  return m;
}

Json measures_json(const Measures& m) {
  Json out;
  out["npvi"] = m.npvi ? Json(*m.npvi) : Json(nullptr);
  Json aniso = Json::object();
  for (const auto& [n, v] : m.mean_anisochrony) {
    aniso[std::to_string(n)] = v ? Json(*v) : Json(nullptr);
  }
  out["mean_anisochrony"] = std::move(aniso);
  if (m.quantality) {
    Json q;
    q["quantum"] = m.quantality->quantum;
    q["theta"] = m.quantality->theta;
    q["score"] = m.quantality->score;
    out["quantality"] = std::move(q);
  } else {
    out["quantality"] = nullptr;
  }
  return out;
}

}  // namespace rsa::io
