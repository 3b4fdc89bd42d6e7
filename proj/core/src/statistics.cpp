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

#include "rssrisk/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rssrisk/errors.hpp"

namespace rssrisk::stats
{

namespace
{

// Pearson correlation with the label treated as 0/1. Returns nullopt when a
// variance vanishes.
std::optional<double> pearson(
  std::span<const double> scores, std::span<const std::uint8_t> labels)
{
  const size_t n = scores.size();
  if (n < 2) {
    return std::nullopt;
  }
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_x += scores[i];
    mean_y += labels[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = scores[i] - mean_x;
    const double dy = labels[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    return std::nullopt;
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::optional<double> point_biserial(
  std::span<const double> scores, std::span<const std::uint8_t> labels)
{
  if (scores.size() != labels.size()) {
    throw ParameterError("scores and labels must have equal length");
  }
  return pearson(scores, labels);
}

std::optional<double> auc(std::span<const double> scores, std::span<const std::uint8_t> labels)
{
  if (scores.size() != labels.size()) {
    throw ParameterError("scores and labels must have equal length");
  }
  const size_t n = scores.size();
  size_t n_pos = 0;
  for (auto l : labels) {
    n_pos += l ? 1 : 0;
  }
  const size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    return std::nullopt;
  }

  // Rank-based Mann-Whitney with midranks for ties.
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scores[a] < scores[b];
  });

  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) {
      ++j;
    }
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (size_t k = i; k <= j; ++k) {
      if (labels[order[k]]) {
        rank_sum_pos += midrank;
      }
    }
    i = j + 1;
  }

  const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * (n_pos + 1.0);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::optional<double> permutation_p(
  std::span<const double> scores, std::span<const std::uint8_t> labels, int n_perms,
  std::mt19937_64 & rng)
{
  if (scores.size() != labels.size()) {
    throw ParameterError("scores and labels must have equal length");
  }
  if (n_perms < 1) {
    throw ParameterError("n_perms must be >= 1");
  }
  const auto observed = point_biserial(scores, labels);
  if (!observed) {
    return std::nullopt;
  }

  std::vector<std::uint8_t> shuffled(labels.begin(), labels.end());
  long at_least = 1;  // identity permutation
  for (int k = 0; k < n_perms; ++k) {
    for (size_t i = shuffled.size() - 1; i > 0; --i) {
      std::uniform_int_distribution<size_t> pick(0, i);
      std::swap(shuffled[i], shuffled[pick(rng)]);
    }
    const auto stat = point_biserial(scores, shuffled);
    // Variances are permutation-invariant, so stat is always defined here.
    if (stat && *stat >= *observed) {
      ++at_least;
    }
  }
  return static_cast<double>(at_least) / static_cast<double>(n_perms + 1);
}

}  // namespace rssrisk::stats
