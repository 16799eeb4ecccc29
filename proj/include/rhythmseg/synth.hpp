#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rhythmseg/core.hpp"

/// Seeded synthetic interval generators.
///
/// All generators draw from std::mt19937_64, whose output sequence is fixed
/// by the standard. Uniform and normal variates are derived from the raw
/// engine output here (not through <random> distributions, whose algorithms
/// are implementation-defined), so a seed reproduces the same data on every
/// platform.
namespace rsa::synth {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi].
  double uniform(double lo, double hi);
  /// Standard normal (Box-Muller, one variate cached).
  double normal();
  /// Geometric on {1, 2, ...}: number of trials up to the first success.
  std::uint64_t geometric(double success_p);
  /// Uniform integer on {lo, ..., hi}.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  bool bernoulli(double p) { return uniform() < p; }

private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

struct RepeatTemplate {
  std::vector<int> multiples;
  double quantum = 0.5;
  double noise_sigma = 0.025;
  int repeats = 100;

  /// Throws std::invalid_argument when the template is unusable.
  void validate() const;
};

/// Repeated-rhythm default: the deterministic 3:3:2:4:1 section of the
/// cluster-network example, with quantum 0.5 s and sigma = quantum / 20.
RepeatTemplate default_template();

IntervalSequence gen_uniform(std::size_t count, double lo, double hi, std::uint64_t seed,
                             std::string id = "uniform");

/// m * quantum + noise with m ~ Geometric(success_p) on {1, 2, ...}.
IntervalSequence gen_quantal_geometric(std::size_t count, double quantum, double success_p,
                                       double noise_sigma, std::uint64_t seed,
                                       std::string id = "geometric");

/// m * quantum + noise with m uniform on {1, ..., max_multiple}.
IntervalSequence gen_quantal_uniform(std::size_t count, double quantum, int max_multiple,
                                     double noise_sigma, std::uint64_t seed,
                                     std::string id = "quantal-uniform");

/// Tiles the template `repeats` times, scales by the quantum and adds noise.
IntervalSequence gen_repeated(const RepeatTemplate& tmpl, std::uint64_t seed,
                              std::string id = "repeated");

/// Intervals between events on a jittered grid. Each grid slot is occupied
/// independently with probability `occupancy`; returns `count` intervals.
IntervalSequence gen_grid_events(std::size_t count, double grid, double jitter_sigma,
                                 std::uint64_t seed, double occupancy = 0.5,
                                 std::string id = "grid");

}  // namespace rsa::synth
