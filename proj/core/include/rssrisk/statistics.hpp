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

#ifndef RSSRISK_STATISTICS_HPP_
#define RSSRISK_STATISTICS_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace rssrisk::stats
{

/// Point-biserial correlation between a continuous score and a binary label
/// (Pearson form). Empty when either variable has zero variance.
std::optional<double> point_biserial(
  std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Mann-Whitney AUC: probability that a random positive outranks a random
/// negative, ties counted one half. Empty when either group is empty.
std::optional<double> auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// One-sided permutation p-value for point_biserial > 0, identity
/// permutation included (so p >= 1/(n_perms+1)). Empty when the observed
/// statistic is degenerate. Throws ParameterError when n_perms < 1.
std::optional<double> permutation_p(
  std::span<const double> scores, std::span<const std::uint8_t> labels, int n_perms,
  std::mt19937_64 & rng);

}  // namespace rssrisk::stats

#endif  // RSSRISK_STATISTICS_HPP_
