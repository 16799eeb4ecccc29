#include "rhythmseg/quantal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rsa::quantal {

namespace {

void check_quantum(double quantum) {
  if (!(quantum > 0.0) || !std::isfinite(quantum)) {
    throw std::invalid_argument("quantum must be positive");
  }
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta <= 0.5)) throw std::invalid_argument("theta must be in (0, 0.5]");
}

int nearest_multiple(double interval, double quantum) {
  return std::max(1, static_cast<int>(std::lround(interval / quantum)));
}

}  // namespace

QuantalAnnotation annotate(std::span<const double> intervals, double quantum, double theta) {
  check_quantum(quantum);
  check_theta(theta);
  QuantalAnnotation out;
  out.quantum = quantum;
  out.theta = theta;
  out.multiples.reserve(intervals.size());
  out.residuals.reserve(intervals.size());
  std::size_t near = 0;
  for (double x : intervals) {
    const int m = nearest_multiple(x, quantum);
    const double residual = x - m * quantum;
    out.multiples.push_back(m);
    out.residuals.push_back(residual);
    if (std::abs(residual) < theta * quantum) ++near;
  }
  out.score = intervals.empty() ? 0.0
                                : static_cast<double>(near) / static_cast<double>(intervals.size());
  return out;
}

QuantalAnnotation annotate(const IntervalSequence& seq, double quantum, double theta) {
  return annotate(seq.intervals(), quantum, theta);
}

double quantality_score(std::span<const IntervalSequence> sequences, double quantum,
                        double theta) {
  std::size_t near = 0;
  std::size_t total = 0;
  for (const auto& seq : sequences) {
    const auto a = annotate(seq, quantum, theta);
    near += static_cast<std::size_t>(
        std::count_if(a.residuals.begin(), a.residuals.end(),
                      [&](double r) { return std::abs(r) < theta * quantum; }));
    total += seq.size();
  }
  return total == 0 ? 0.0 : static_cast<double>(near) / static_cast<double>(total);
}

std::optional<std::string> integer_ratio_label(std::span<const double> values, double quantum,
                                               double theta) {
  check_quantum(quantum);
  check_theta(theta);
  std::string label;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int m = nearest_multiple(values[i], quantum);
    if (!(std::abs(values[i] - m * quantum) < theta * quantum)) return std::nullopt;
    if (i > 0) label += ':';
    label += std::to_string(m);
  }
  return label;
}

std::optional<std::string> integer_ratio_label(const Segment& seg, double quantum, double theta) {
  return integer_ratio_label(seg.values(), quantum, theta);
}

std::vector<int> parse_ratio_label(const std::string& label) {
  std::vector<int> out;
  std::stringstream ss(label);
  std::string part;
  while (std::getline(ss, part, ':')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || value < 1) {
      throw std::invalid_argument("malformed integer-ratio label '" + label + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw std::invalid_argument("empty integer-ratio label");
  return out;
}

double quantum_from_cycles(std::span<const double> cycle_onsets, int subdivisions) {
  if (cycle_onsets.size() < 2) throw std::invalid_argument("need at least 2 cycle onsets");
  if (subdivisions < 1) throw std::invalid_argument("subdivisions must be >= 1");
  std::vector<double> lengths;
  lengths.reserve(cycle_onsets.size() - 1);
  for (std::size_t i = 1; i < cycle_onsets.size(); ++i) {
    const double len = cycle_onsets[i] - cycle_onsets[i - 1];
    if (!(len > 0.0)) throw std::invalid_argument("cycle onsets must be strictly increasing");
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end());
  const std::size_t mid = lengths.size() / 2;
  const double median =
      lengths.size() % 2 == 1 ? lengths[mid] : 0.5 * (lengths[mid - 1] + lengths[mid]);
  return median / subdivisions;
}

double duration_in_quanta(double duration, double quantum) {
  check_quantum(quantum);
  return duration / quantum;
}

}  // namespace rsa::quantal
