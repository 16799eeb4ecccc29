#include "rhythmseg/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rsa {

namespace {

void require_positive(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw std::invalid_argument(std::string(what) + ": entry " + std::to_string(i) +
                                  " is not a positive finite duration");
    }
  }
}

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("length mismatch: " + std::to_string(a) + " vs " +
                                std::to_string(b));
  }
}

}  // namespace

IntervalSequence::IntervalSequence(std::vector<double> intervals, std::string id,
                                   std::string instrument, std::string song)
    : intervals_(std::move(intervals)),
      id_(std::move(id)),
      instrument_(std::move(instrument)),
      song_(std::move(song)) {
  require_positive(intervals_, "interval sequence");
}

Segment::Segment(std::vector<double> values, SegmentOrigin origin)
    : values_(std::move(values)), origin_(std::move(origin)) {
  if (values_.size() < 2) {
    throw std::invalid_argument("segment needs at least 2 intervals");
  }
  require_positive(values_, "segment");
}

double Segment::duration() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

Pattern::Pattern(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.size() < 2) {
    throw std::invalid_argument("pattern needs at least 2 weights");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("pattern weights must be finite and non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kPatternTolerance) {
    throw std::invalid_argument("pattern weights sum to " + std::to_string(sum) +
                                ", not 1");
  }
  if (sum != 1.0) {
    for (double& w : weights_) w /= sum;
  }
}

Pattern Pattern::isochronous(std::size_t n) {
  if (n < 2) throw std::invalid_argument("pattern needs at least 2 weights");
  return Pattern(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Pattern Pattern::corner(std::size_t n, std::size_t k) {
  if (k >= n) throw std::invalid_argument("corner index out of range");
  std::vector<double> w(n, 0.0);
  w[k] = 1.0;
  return Pattern(std::move(w));
}

std::vector<Segment> extract_segments(const IntervalSequence& seq, std::size_t n) {
  if (n < 2) throw std::invalid_argument("segment length must be at least 2");
  std::vector<Segment> out;
  if (seq.size() < n) return out;
  const auto values = seq.intervals();
  out.reserve(seq.size() - n + 1);
  for (std::size_t start = 0; start + n <= seq.size(); ++start) {
    out.emplace_back(std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(start),
                                         values.begin() + static_cast<std::ptrdiff_t>(start + n)),
                     SegmentOrigin{seq.id(), start});
  }
  return out;
}

std::vector<Segment> extract_segments(std::span<const IntervalSequence> sequences,
                                      std::size_t n) {
  std::vector<Segment> out;
  for (const auto& seq : sequences) {
    auto part = extract_segments(seq, n);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

PatternDuration normalize(const Segment& seg) {
  const double d = seg.duration();
  std::vector<double> w(seg.values().begin(), seg.values().end());
  for (double& x : w) x /= d;
  return {Pattern(std::move(w)), d};
}

Segment denormalize(const PatternDuration& pd) {
  if (!(pd.duration > 0.0)) {
    throw std::invalid_argument("duration must be positive");
  }
  std::vector<double> v(pd.pattern.weights().begin(), pd.pattern.weights().end());
  for (double& x : v) x *= pd.duration;
  return Segment(std::move(v));
}

double rhythm_ratio(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("rhythm ratio needs positive durations");
  }
  return a / (a + b);
}

double taxicab(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += std::abs(x[i] - y[i]);
  return total;
}

double segment_distance(const Segment& x, const Segment& y) {
  return taxicab(x.values(), y.values());
}

double pattern_distance(const Pattern& p, const Pattern& q) {
  return 0.5 * taxicab(p.weights(), q.weights());
}

double anisochrony(const Pattern& p) {
  const auto n = static_cast<double>(p.size());
  double total = 0.0;
  for (double w : p.weights()) total += std::abs(w - 1.0 / n);
  return n / (2.0 * (n - 1.0)) * total;
}

double segment_anisochrony(const Segment& x) { return anisochrony(normalize(x).pattern); }

double mean_anisochrony(std::span<const IntervalSequence> sequences, std::size_t n) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& seq : sequences) {
    for (const auto& seg : extract_segments(seq, n)) {
      total += segment_anisochrony(seg);
      ++count;
    }
  }
  if (count == 0) {
    throw std::invalid_argument("no segments of length " + std::to_string(n));
  }
  return total / static_cast<double>(count);
}

double npvi(const IntervalSequence& seq) {
  const std::size_t k = seq.size();
  if (k < 2) throw std::invalid_argument("nPVI needs at least 2 intervals");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    total += std::abs((seq[i] - seq[i + 1]) / (seq[i] + seq[i + 1]));
  }
  return 200.0 / static_cast<double>(k - 1) * total;
}

double npvi(std::span<const IntervalSequence> sequences) {
  double total = 0.0;
  std::size_t pairs = 0;
  for (const auto& seq : sequences) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      total += std::abs((seq[i] - seq[i + 1]) / (seq[i] + seq[i + 1]));
      ++pairs;
    }
  }
  if (pairs == 0) throw std::invalid_argument("nPVI needs at least 2 intervals");
  return 200.0 * total / static_cast<double>(pairs);
}

double mean_reference_distance(std::span<const Pattern> patterns, const Pattern& reference) {
  if (patterns.empty()) throw std::invalid_argument("no patterns to compare");
  const std::size_t n = reference.size();
  // d_p(ref, e_k) = (1 - ref_k + sum_{i != k} ref_i) / 2 = 1 - ref_k
  const double max_corner =
      1.0 - *std::min_element(reference.weights().begin(), reference.weights().end());
  double total = 0.0;
  for (const auto& p : patterns) {
    require_same_length(p.size(), n);
    total += pattern_distance(p, reference);
  }
  return total / static_cast<double>(patterns.size()) / max_corner;
}

}  // namespace rsa
