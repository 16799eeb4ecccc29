#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rhythmseg/core.hpp"

namespace rsa::quantal {

/// Default near-multiple threshold, as a fraction of the quantum.
inline constexpr double kDefaultTheta = 0.25;

/// Intervals written as multiple * quantum + residual.
struct QuantalAnnotation {
  double quantum = 0.0;
  double theta = kDefaultTheta;
  std::vector<int> multiples;
  std::vector<double> residuals;
  /// Fraction of intervals with |residual| < theta * quantum.
  double score = 0.0;
};

/// Rounds every interval to its nearest quantum multiple (at least 1).
/// Intervals below quantum / 2 are clamped to one quantum; their residual
/// then falls at or below -quantum / 2 and never counts as near-multiple.
QuantalAnnotation annotate(std::span<const double> intervals, double quantum,
                           double theta = kDefaultTheta);
QuantalAnnotation annotate(const IntervalSequence& seq, double quantum,
                           double theta = kDefaultTheta);

/// Near-multiple fraction pooled over several sequences.
double quantality_score(std::span<const IntervalSequence> sequences, double quantum,
                        double theta = kDefaultTheta);

/// "m1:m2:...:mn" when every interval lies within theta * quantum of its
/// multiple, otherwise nullopt. Labels are not reduced (2:4 stays 2:4).
std::optional<std::string> integer_ratio_label(std::span<const double> values, double quantum,
                                               double theta = kDefaultTheta);
std::optional<std::string> integer_ratio_label(const Segment& seg, double quantum,
                                               double theta = kDefaultTheta);

/// Parses "3:2:4" back into multiples. Throws on malformed labels.
std::vector<int> parse_ratio_label(const std::string& label);

/// Median cycle length divided by the number of subdivisions per cycle.
double quantum_from_cycles(std::span<const double> cycle_onsets, int subdivisions = 16);

/// d / quantum, unrounded.
double duration_in_quanta(double duration, double quantum);

}  // namespace rsa::quantal
