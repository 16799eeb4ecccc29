#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rhythmseg/core.hpp"

using namespace rsa;
using doctest::Approx;

namespace {

std::vector<double> random_positive(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> d(0.05, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(gen);
  return v;
}

}  // namespace

TEST_CASE("worked examples") {
  CHECK(segment_distance(Segment({1, 2, 3}), Segment({4, 5, 6})) == 9.0);
  const auto pd = normalize(Segment({0.1, 0.1, 0.2}));
  CHECK(pd.duration == Approx(0.4).epsilon(1e-12));
  CHECK(pd.pattern[0] == Approx(0.25).epsilon(1e-12));
  CHECK(pd.pattern[2] == Approx(0.5).epsilon(1e-12));
  CHECK(pattern_distance(Pattern({0.25, 0.75}), Pattern({0.75, 0.25})) == 0.5);
  CHECK(rhythm_ratio(3, 2) == Approx(0.6).epsilon(1e-15));
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(IntervalSequence({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalSequence({1.0, -2.0}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalSequence({1.0, NAN}), std::invalid_argument);
  CHECK_THROWS_AS(Segment({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Pattern({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Pattern({1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(rhythm_ratio(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(taxicab(std::vector<double>{1, 2}, std::vector<double>{1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(denormalize({Pattern({0.5, 0.5}), 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Pattern::corner(3, 3), std::invalid_argument);
}

TEST_CASE("pattern renormalizes within tolerance") {
  const Pattern p({0.5 + 1e-10, 0.5});
  CHECK(p[0] + p[1] == Approx(1.0).epsilon(1e-15));
  CHECK(p.ratio() == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("extract_segments slides with hop one within a sequence") {
  const IntervalSequence a({1, 2, 3, 4}, "a");
  const auto segs = extract_segments(a, 2);
  REQUIRE(segs.size() == 3);
  CHECK(segs[1][0] == 2.0);
  CHECK(segs[1][1] == 3.0);
  CHECK(segs[2].origin() == SegmentOrigin{"a", 2});
  CHECK(extract_segments(a, 5).empty());
  CHECK_THROWS_AS(extract_segments(a, 1), std::invalid_argument);

  const std::vector<IntervalSequence> both{a, IntervalSequence({5, 6, 7}, "b")};
  const auto all = extract_segments(both, 3);
  REQUIRE(all.size() == 3);
  // no segment spans the boundary between "a" and "b"
  CHECK(all[1].origin() == SegmentOrigin{"a", 1});
  CHECK(all[2].origin() == SegmentOrigin{"b", 0});
  CHECK(all[2][0] == 5.0);
}

TEST_CASE("anisochrony anchors") {
  CHECK(anisochrony(Pattern::isochronous(4)) == Approx(0.0).epsilon(1e-15));
  CHECK(anisochrony(Pattern({0.25, 0.75})) == Approx(0.5).epsilon(1e-15));
  for (std::size_t n = 2; n <= 7; ++n) {
    for (std::size_t k = 0; k < n; ++k) CHECK(anisochrony(Pattern::corner(n, k)) == Approx(1.0));
  }
  CHECK(segment_anisochrony(Segment({2.0, 2.0, 2.0})) == Approx(0.0));
}

TEST_CASE("anisochrony is the pattern distance to the centre over the corner distance") {
  std::mt19937_64 gen(1);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 5);
    const auto p = normalize(Segment(random_positive(gen, n))).pattern;
    const double corner = pattern_distance(Pattern::corner(n, 0), Pattern::isochronous(n));
    const double a = anisochrony(p);
    CHECK(a == Approx(pattern_distance(p, Pattern::isochronous(n)) / corner).epsilon(1e-12));
    CHECK(a >= 0.0);
    CHECK(a <= 1.0 + 1e-12);
  }
}

TEST_CASE("nPVI of a single sequence") {
  // |1-3|/(1+3) = 0.5, |3-1|/4 = 0.5 -> 200 * 0.5 = 100
  CHECK(npvi(IntervalSequence({1, 3, 1})) == Approx(100.0));
  CHECK(npvi(IntervalSequence({2, 2, 2, 2})) == 0.0);
  CHECK_THROWS_AS(npvi(IntervalSequence({1.0})), std::invalid_argument);
}

TEST_CASE("pooled nPVI averages every within-sequence pair") {
  const std::vector<IntervalSequence> seqs{IntervalSequence({1, 3}, "a"),
                                           IntervalSequence({2, 2, 2}, "b")};
  // pairs: 0.5, 0, 0 -> 200 * 0.5 / 3
  CHECK(npvi(seqs) == Approx(200.0 * 0.5 / 3.0));
  CHECK(npvi(seqs) == Approx(200.0 * mean_anisochrony(seqs, 2)));
  const std::vector<IntervalSequence> lonely{IntervalSequence({1.0}, "x")};
  CHECK_THROWS_AS(npvi(lonely), std::invalid_argument);
  CHECK_THROWS_AS(mean_anisochrony(lonely, 2), std::invalid_argument);
}

TEST_CASE("mean reference distance against a brute-force corner oracle") {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 4);
    const auto ref = normalize(Segment(random_positive(gen, n))).pattern;
    std::vector<Pattern> pats;
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) {
      pats.push_back(normalize(Segment(random_positive(gen, n))).pattern);
      double l1 = 0.0;
      for (std::size_t k = 0; k < n; ++k) l1 += std::abs(pats.back()[k] - ref[k]);
      sum += 0.5 * l1;
    }
    double max_corner = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double l1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) l1 += std::abs((j == k ? 1.0 : 0.0) - ref[j]);
      max_corner = std::max(max_corner, 0.5 * l1);
    }
    const double got = mean_reference_distance(pats, ref);
    CHECK(got == Approx(sum / 5.0 / max_corner).epsilon(1e-12));
    CHECK(got <= 1.0 + 1e-12);
  }
  CHECK(mean_reference_distance(std::vector<Pattern>{Pattern::corner(3, 1)},
                                Pattern::isochronous(3)) == Approx(1.0));
  CHECK_THROWS_AS(mean_reference_distance({}, Pattern::isochronous(2)), std::invalid_argument);
}

TEST_CASE("normalize and denormalize are inverse; pattern is scale invariant") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> scale(0.01, 50.0);
  for (int t = 0; t < 5000; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 6);
    const auto v = random_positive(gen, n);
    const auto pd = normalize(Segment(v));
    double l1 = 0.0;
    for (double x : v) l1 += x;
    CHECK(pd.duration == Approx(l1).epsilon(1e-13));
    const auto back = denormalize(pd);
    for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == Approx(v[i]).epsilon(1e-12));
    const double c = scale(gen);
    std::vector<double> w(v);
    for (double& x : w) x *= c;
    const auto scaled = normalize(Segment(w));
    CHECK(pattern_distance(scaled.pattern, pd.pattern) < 1e-12);
    CHECK(segment_distance(Segment(w), Segment(v)) == Approx((c > 1 ? c - 1 : 1 - c) * l1));
  }
}

TEST_CASE("segment and pattern distances are metrics") {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 5000; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 4);
    const Segment x(random_positive(gen, n)), y(random_positive(gen, n)),
        z(random_positive(gen, n));
    CHECK(segment_distance(x, y) == segment_distance(y, x));
    CHECK(segment_distance(x, z) <= segment_distance(x, y) + segment_distance(y, z) + 1e-12);
    const auto p = normalize(x).pattern, q = normalize(y).pattern, r = normalize(z).pattern;
    CHECK(pattern_distance(p, p) == 0.0);
    CHECK(pattern_distance(p, q) <= 1.0 + 1e-12);
    CHECK(pattern_distance(p, r) <= pattern_distance(p, q) + pattern_distance(q, r) + 1e-12);
  }
  CHECK(pattern_distance(Pattern::corner(4, 0), Pattern::corner(4, 3)) == 1.0);
}

TEST_CASE("segment windows of a worked sequence") {
  const IntervalSequence seq({.1, .1, .2, .2, .2, .4, .3});
  const auto segs = extract_segments(seq, 3);
  const std::vector<std::vector<double>> want{
      {.1, .1, .2}, {.1, .2, .2}, {.2, .2, .2}, {.2, .2, .4}, {.2, .4, .3}};
  REQUIRE(segs.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(std::vector<double>(segs[i].values().begin(), segs[i].values().end()) == want[i]);
  }
  CHECK(extract_segments(IntervalSequence({.5}), 2).empty());
  const auto pairs = extract_segments(IntervalSequence({1, 2, 3}), 2);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[1][0] == 2.0);
  CHECK(pairs[1][1] == 3.0);
}

TEST_CASE("normalize, denormalize and ratio examples") {
  const auto unit = normalize(Segment({0.5, 0.5}));
  CHECK(unit.pattern[0] == 0.5);
  CHECK(unit.duration == 1.0);
  const auto e = normalize(Segment({3, 2}));
  CHECK(e.pattern[0] == Approx(0.6));
  CHECK(e.pattern[1] == Approx(0.4));
  CHECK(e.duration == 5.0);

  const auto f = denormalize({Pattern({.25, .25, .5}), 0.4});
  CHECK(f[0] == Approx(.1));
  CHECK(f[1] == Approx(.1));
  CHECK(f[2] == Approx(.2));
  const auto g = denormalize({Pattern({0.5, 0.5}), 2.0});
  CHECK(g[0] == 1.0);
  const auto h = denormalize({Pattern({0.6, 0.4}), 5.0});
  CHECK(h[0] == Approx(3.0));
  CHECK(h[1] == Approx(2.0));

  CHECK(rhythm_ratio(1, 1) == 0.5);
  CHECK(rhythm_ratio(1, 3) == 0.25);
  CHECK(Pattern({0.6, 0.4}).ratio() == 0.6);
}

TEST_CASE("distance examples") {
  const Segment x({0.25, 0.75}), y({0.75, 0.25});
  CHECK(segment_distance(x, y) == 1.0);
  CHECK(segment_distance(x, x) == 0.0);
  CHECK(pattern_distance(Pattern({1, 0, 0}), Pattern({0, 1, 0})) == 1.0);
  CHECK(anisochrony(Pattern({1.0 / 3, 1.0 / 3, 1.0 / 3})) == Approx(0.0));
  CHECK(anisochrony(Pattern({1, 0, 0})) == Approx(1.0));
  CHECK(segment_anisochrony(Segment({2, 2})) == 0.0);
  CHECK(segment_anisochrony(Segment({1, 3})) == Approx(0.5));
  CHECK(segment_anisochrony(Segment({5, 15})) == Approx(0.5));
  CHECK(npvi(IntervalSequence({1, 1, 1, 1})) == 0.0);
  CHECK(npvi(IntervalSequence({1, 3})) == Approx(100.0));
}

TEST_CASE("mean reference distance examples") {
  const Pattern ref({7.0 / 12, 2.0 / 12, 3.0 / 12});
  CHECK(mean_reference_distance(std::vector<Pattern>(3, ref), ref) == 0.0);
  const std::vector<Pattern> corners{Pattern::corner(3, 0), Pattern::corner(3, 1),
                                     Pattern::corner(3, 2)};
  CHECK(mean_reference_distance(corners, Pattern::isochronous(3)) == Approx(1.0));
  // |1/3 - 7/12| + |1/3 - 2/12| + |1/3 - 3/12| = 1/2, halved = 1/4; the
  // farthest corner is e_2 at 1 - 2/12 = 5/6
  const std::vector<Pattern> center{Pattern::isochronous(3)};
  CHECK(mean_reference_distance(center, ref) == Approx(0.25 / (5.0 / 6.0)));
}
