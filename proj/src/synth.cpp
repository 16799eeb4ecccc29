#include "rhythmseg/synth.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rsa::synth {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::geometric(double success_p) {
  if (success_p >= 1.0) return 1;
  const double u = 1.0 - uniform();  // (0, 1]
  return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-success_p)));
}

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t range = hi - lo + 1;
  if (range == 0) return engine_();
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw = 0;
  do {
    draw = engine_();
  } while (draw >= limit);
  return lo + draw % range;
}

namespace {

void check_quantal_params(double quantum, double noise_sigma) {
  if (!(quantum > 0.0) || !std::isfinite(quantum)) {
    throw std::invalid_argument("quantum must be positive");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw std::invalid_argument("noise sigma must be non-negative");
  }
}

// Redraws the noise until the interval is positive.
double noisy_multiple(Rng& rng, double base, double sigma) {
  if (sigma == 0.0) return base;
  double value = 0.0;
  do {
    value = base + sigma * rng.normal();
  } while (!(value > 0.0));
  return value;
}

}  // namespace

void RepeatTemplate::validate() const {
  if (multiples.empty()) throw std::invalid_argument("template has no multiples");
  for (int m : multiples) {
    if (m < 1) throw std::invalid_argument("template multiples must be >= 1");
  }
  check_quantal_params(quantum, noise_sigma);
  if (!(noise_sigma < quantum / 2.0)) {
    throw std::invalid_argument("template noise sigma must be below quantum / 2");
  }
  if (repeats < 1) throw std::invalid_argument("template repeats must be >= 1");
}

RepeatTemplate default_template() { return {{3, 3, 2, 4, 1}, 0.5, 0.5 / 20.0, 200}; }

IntervalSequence gen_uniform(std::size_t count, double lo, double hi, std::uint64_t seed,
                             std::string id) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("uniform bounds need 0 < lo < hi");
  }
  Rng rng(seed);
  std::vector<double> out(count);
  for (double& x : out) x = rng.uniform(lo, hi);
  return IntervalSequence(std::move(out), std::move(id));
}

IntervalSequence gen_quantal_geometric(std::size_t count, double quantum, double success_p,
                                       double noise_sigma, std::uint64_t seed, std::string id) {
  check_quantal_params(quantum, noise_sigma);
  if (!(success_p > 0.0 && success_p < 1.0)) {
    throw std::invalid_argument("geometric success probability must be in (0, 1)");
  }
  Rng rng(seed);
  std::vector<double> out(count);
  for (double& x : out) {
    const auto m = static_cast<double>(rng.geometric(success_p));
    x = noisy_multiple(rng, m * quantum, noise_sigma);
  }
  return IntervalSequence(std::move(out), std::move(id));
}

IntervalSequence gen_quantal_uniform(std::size_t count, double quantum, int max_multiple,
                                     double noise_sigma, std::uint64_t seed, std::string id) {
  check_quantal_params(quantum, noise_sigma);
  if (max_multiple < 1) throw std::invalid_argument("max multiple must be >= 1");
  Rng rng(seed);
  std::vector<double> out(count);
  for (double& x : out) {
    const auto m = static_cast<double>(rng.uniform_int(1, static_cast<std::uint64_t>(max_multiple)));
    x = noisy_multiple(rng, m * quantum, noise_sigma);
  }
  return IntervalSequence(std::move(out), std::move(id));
}

IntervalSequence gen_repeated(const RepeatTemplate& tmpl, std::uint64_t seed, std::string id) {
  tmpl.validate();
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(tmpl.multiples.size() * static_cast<std::size_t>(tmpl.repeats));
  for (int r = 0; r < tmpl.repeats; ++r) {
    for (int m : tmpl.multiples) {
      out.push_back(noisy_multiple(rng, m * tmpl.quantum, tmpl.noise_sigma));
    }
  }
  return IntervalSequence(std::move(out), std::move(id));
}

IntervalSequence gen_grid_events(std::size_t count, double grid, double jitter_sigma,
                                 std::uint64_t seed, double occupancy, std::string id) {
  if (!(grid > 0.0) || !std::isfinite(grid)) throw std::invalid_argument("grid must be positive");
  if (!(jitter_sigma >= 0.0) || !std::isfinite(jitter_sigma)) {
    throw std::invalid_argument("jitter sigma must be non-negative");
  }
  if (!(occupancy > 0.0 && occupancy <= 1.0)) {
    throw std::invalid_argument("occupancy must be in (0, 1]");
  }
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(count);
  std::uint64_t prev_slot = 0;
  double prev_jitter = jitter_sigma * rng.normal();
  std::uint64_t slot = 0;
  while (out.size() < count) {
    ++slot;
    if (!rng.bernoulli(occupancy)) continue;
    // Interval = whole slots between events plus the jitter difference, so
    // zero jitter gives exact grid multiples.
    const double base = static_cast<double>(slot - prev_slot) * grid;
    double jitter = 0.0;
    double interval = base;
    if (jitter_sigma > 0.0) {
      do {
        jitter = jitter_sigma * rng.normal();
        interval = base + (jitter - prev_jitter);
      } while (!(interval > 0.0));
    }
    out.push_back(interval);
    prev_slot = slot;
    prev_jitter = jitter;
  }
  return IntervalSequence(std::move(out), std::move(id));
}

}  // namespace rsa::synth
