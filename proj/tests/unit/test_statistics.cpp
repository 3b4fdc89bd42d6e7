// Copyright 2026 The rssrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rssrisk/errors.hpp"
#include "rssrisk/statistics.hpp"

using namespace rssrisk;

TEST_CASE("point_biserial: perfect separation and the textbook fixture")
{
  const std::vector<double> separated{1.0, 1.0, 0.0, 0.0};
  const std::vector<std::uint8_t> labels{1, 1, 0, 0};
  CHECK(*stats::point_biserial(separated, labels) == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> fixture{0.9, 0.8, 0.2, 0.1};
  const auto got = stats::point_biserial(fixture, labels);
  REQUIRE(got.has_value());
  CHECK(*got == doctest::Approx(0.9899494936611665).epsilon(1e-12));
  CHECK(*got == doctest::Approx(oracles::point_biserial_groups(fixture, labels)).epsilon(1e-12));
}

TEST_CASE("point_biserial degenerate cases")
{
  const std::vector<double> constant{0.5, 0.5, 0.5, 0.5};
  const std::vector<std::uint8_t> labels{1, 0, 1, 0};
  CHECK_FALSE(stats::point_biserial(constant, labels).has_value());

  const std::vector<double> scores{0.1, 0.9, 0.4, 0.6};
  const std::vector<std::uint8_t> all_one{1, 1, 1, 1};
  CHECK_FALSE(stats::point_biserial(scores, all_one).has_value());
}

TEST_CASE("point_biserial matches the textbook oracle on random draws")
{
  std::mt19937_64 rng(123ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const size_t n = 5 + static_cast<size_t>(u(rng) * 50);
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    bool mixed = false;
    for (size_t i = 0; i < n; ++i) {
      scores[i] = u(rng);
      labels[i] = u(rng) < 0.4 ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    mixed = true;
    REQUIRE(mixed);
    const auto got = stats::point_biserial(scores, labels);
    REQUIRE(got.has_value());
    REQUIRE(*got == doctest::Approx(oracles::point_biserial_groups(scores, labels)).epsilon(1e-10));
    REQUIRE(*got >= -1.0);
    REQUIRE(*got <= 1.0);
  }
}

TEST_CASE("auc fixtures")
{
  const std::vector<double> sep{1.0, 1.0, 0.0, 0.0};
  const std::vector<std::uint8_t> labels{1, 1, 0, 0};
  CHECK(*stats::auc(sep, labels) == 1.0);

  const std::vector<double> ties{0.3, 0.3, 0.3, 0.3};
  CHECK(*stats::auc(ties, labels) == 0.5);

  const std::vector<double> mixed{0.9, 0.2, 0.5, 0.5};
  const std::vector<std::uint8_t> mixed_labels{1, 0, 1, 0};
  CHECK(*stats::auc(mixed, mixed_labels) == doctest::Approx(0.875).epsilon(1e-15));
  CHECK(
    *stats::auc(mixed, mixed_labels) ==
    doctest::Approx(oracles::auc_bruteforce(mixed, mixed_labels)).epsilon(1e-15));

  const std::vector<std::uint8_t> empty_group{0, 0, 0, 0};
  CHECK_FALSE(stats::auc(mixed, empty_group).has_value());
}

TEST_CASE("auc matches brute force on random draws and detects clean separation")
{
  std::mt19937_64 rng(321ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const size_t n = 4 + static_cast<size_t>(u(rng) * 60);
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    for (size_t i = 0; i < n; ++i) {
      // coarse grid so ties actually occur
      scores[i] = std::floor(u(rng) * 8.0) / 8.0;
      labels[i] = u(rng) < 0.5 ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    const auto got = stats::auc(scores, labels);
    REQUIRE(got.has_value());
    REQUIRE(*got == doctest::Approx(oracles::auc_bruteforce(scores, labels)).epsilon(1e-12));

    double min_pos = 2.0;
    double max_neg = -1.0;
    for (size_t i = 0; i < n; ++i) {
      if (labels[i]) {
        min_pos = std::min(min_pos, scores[i]);
      } else {
        max_neg = std::max(max_neg, scores[i]);
      }
    }
    if (min_pos > max_neg) {
      REQUIRE(*got == 1.0);
    }
  }
}

TEST_CASE("permutation_p: perfect separation on 20 records gives the floor p-value")
{
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  for (int i = 0; i < 10; ++i) {
    scores.push_back(0.9 + 0.005 * i);
    labels.push_back(1);
    scores.push_back(0.1 + 0.005 * i);
    labels.push_back(0);
  }
  std::mt19937_64 rng(7ULL);
  const auto p = stats::permutation_p(scores, labels, 999, rng);
  REQUIRE(p.has_value());
  CHECK(*p == doctest::Approx(0.001).epsilon(1e-15));
}

TEST_CASE("permutation_p approximates the exact exceedance probability on a small case")
{
  // 6 records, 3 collisions; exact null distribution enumerable by hand over
  // all C(6,3)=20 label arrangements.
  const std::vector<double> scores{0.9, 0.8, 0.7, 0.3, 0.2, 0.1};
  const std::vector<std::uint8_t> labels{1, 1, 0, 1, 0, 0};
  const auto observed = stats::point_biserial(scores, labels);
  REQUIRE(observed.has_value());

  // brute-force exceedance over all arrangements
  std::vector<std::uint8_t> arrangement{1, 1, 1, 0, 0, 0};
  std::sort(arrangement.begin(), arrangement.end());
  int total = 0;
  int exceed = 0;
  do {
    ++total;
    const auto stat = stats::point_biserial(scores, arrangement);
    if (stat && *stat >= *observed - 1e-12) {
      ++exceed;
    }
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));
  REQUIRE(total == 20);
  const double exact = static_cast<double>(exceed) / 20.0;

  std::mt19937_64 rng(99ULL);
  const auto p = stats::permutation_p(scores, labels, 20000, rng);
  REQUIRE(p.has_value());
  const double tolerance = 4.0 * std::sqrt(exact * (1.0 - exact) / 20000.0) + 1e-4;
  CHECK(std::abs(*p - exact) <= tolerance);
}

TEST_CASE("permutation_p is near one half for symmetric data with zero observed statistic")
{
  const std::vector<double> scores{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  const std::vector<std::uint8_t> labels{1, 0, 0, 1, 1, 0, 0, 1};
  const auto observed = stats::point_biserial(scores, labels);
  REQUIRE(observed.has_value());
  REQUIRE(std::abs(*observed) < 1e-12);

  std::mt19937_64 rng(5ULL);
  const auto p = stats::permutation_p(scores, labels, 999, rng);
  REQUIRE(p.has_value());
  CHECK(*p > 0.3);
  CHECK(*p < 0.7);
}

TEST_CASE("permutation_p rejects zero permutations and degenerate inputs")
{
  const std::vector<double> scores{0.1, 0.9};
  const std::vector<std::uint8_t> labels{0, 1};
  std::mt19937_64 rng(1ULL);
  CHECK_THROWS_AS(stats::permutation_p(scores, labels, 0, rng), ParameterError);

  const std::vector<double> constant{0.5, 0.5};
  CHECK_FALSE(stats::permutation_p(constant, labels, 99, rng).has_value());
}

TEST_CASE("statistic ranges hold on random inputs")
{
  std::mt19937_64 rng(246ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const size_t n = 6 + static_cast<size_t>(u(rng) * 40);
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    for (size_t i = 0; i < n; ++i) {
      scores[i] = u(rng);
      labels[i] = u(rng) < 0.5 ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    scores[0] = 0.99;
    const auto pb = stats::point_biserial(scores, labels);
    const auto a = stats::auc(scores, labels);
    std::mt19937_64 perm_rng(rep);
    const auto p = stats::permutation_p(scores, labels, 99, perm_rng);
    if (pb) {
      REQUIRE(*pb >= -1.0);
      REQUIRE(*pb <= 1.0);
    }
    REQUIRE(a.has_value());
    REQUIRE(*a >= 0.0);
    REQUIRE(*a <= 1.0);
    if (p) {
      REQUIRE(*p > 0.0);
      REQUIRE(*p <= 1.0);
      REQUIRE(*p >= 1.0 / 100.0);
    }
  }
}
