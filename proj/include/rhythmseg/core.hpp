#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

/// Segments, patterns and the distance measures built on them.
///
/// An interval sequence is cut into overlapping fixed-length segments. Each
/// segment splits into a duration (its sum, i.e. its L1 norm) and a pattern
/// (the segment divided by its duration), which is a point on the rhythm
/// simplex.
namespace rsa {

/// Absolute tolerance on the sum of pattern weights.
inline constexpr double kPatternTolerance = 1e-9;

/// Ordered, strictly positive durations (seconds) from a single source.
class IntervalSequence {
public:
  IntervalSequence() = default;
  /// Throws std::invalid_argument if any interval is not strictly positive
  /// (or not finite).
  explicit IntervalSequence(std::vector<double> intervals, std::string id = "seq",
                            std::string instrument = {}, std::string song = {});

  std::span<const double> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  double operator[](std::size_t i) const { return intervals_[i]; }

  const std::string& id() const { return id_; }
  const std::string& instrument() const { return instrument_; }
  const std::string& song() const { return song_; }

private:
  std::vector<double> intervals_;
  std::string id_ = "seq";
  std::string instrument_;
  std::string song_;
};

/// Where a segment came from: sequence id and start index within it.
struct SegmentOrigin {
  std::string sequence_id;
  std::size_t start = 0;

  bool operator==(const SegmentOrigin&) const = default;
};

/// n >= 2 consecutive strictly positive intervals.
class Segment {
public:
  Segment() = default;
  explicit Segment(std::vector<double> values, SegmentOrigin origin = {});

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const SegmentOrigin& origin() const { return origin_; }

  /// Sum of the entries.
  double duration() const;

private:
  std::vector<double> values_;
  SegmentOrigin origin_;
};

/// A point on the rhythm simplex: non-negative weights summing to one.
///
/// Weights whose sum is within kPatternTolerance of one are renormalized;
/// anything further off is rejected.
class Pattern {
public:
  Pattern() = default;
  explicit Pattern(std::vector<double> weights);

  /// The isochronous pattern (1/n, ..., 1/n).
  static Pattern isochronous(std::size_t n);
  /// The simplex corner with all mass on index `k`.
  static Pattern corner(std::size_t n, std::size_t k);

  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

  /// First relative duration; the rhythm ratio for length-2 patterns.
  double ratio() const { return weights_.front(); }

private:
  std::vector<double> weights_;
};

struct PatternDuration {
  Pattern pattern;
  double duration = 0.0;
};

/// Sliding window of length n with hop 1. Returns an empty list when the
/// sequence is shorter than n. Throws if n < 2.
std::vector<Segment> extract_segments(const IntervalSequence& seq, std::size_t n);

/// Segments of every sequence, never crossing sequence boundaries.
std::vector<Segment> extract_segments(std::span<const IntervalSequence> sequences,
                                      std::size_t n);

PatternDuration normalize(const Segment& seg);

/// Inverse of normalize: entrywise pattern * duration.
Segment denormalize(const PatternDuration& pd);

/// a / (a + b).
double rhythm_ratio(double a, double b);

/// Taxicab (L1) distance between equal-length vectors.
double taxicab(std::span<const double> x, std::span<const double> y);

/// Sum of absolute differences between two segments.
double segment_distance(const Segment& x, const Segment& y);

/// Total variation distance: half the L1 distance. Corners are 1 apart.
double pattern_distance(const Pattern& p, const Pattern& q);

/// Normalized distance from the isochronous center: 0 at the center, 1 at
/// every corner. For n = 2 this is |p1 - p2|.
double anisochrony(const Pattern& p);

double segment_anisochrony(const Segment& x);

/// Mean anisochrony over all segments of length n across the sequences.
/// Throws if there are no such segments.
double mean_anisochrony(std::span<const IntervalSequence> sequences, std::size_t n);

/// Normalized pairwise variability index of a single sequence.
double npvi(const IntervalSequence& seq);

/// nPVI pooled over several sequences: 200 times the mean over every
/// within-sequence interval pair. Throws if there is no pair at all.
double npvi(std::span<const IntervalSequence> sequences);

/// Mean pattern distance to `reference`, divided by the largest distance
/// from the reference to any simplex corner so the result stays in [0, 1].
double mean_reference_distance(std::span<const Pattern> patterns, const Pattern& reference);

}  // namespace rsa
