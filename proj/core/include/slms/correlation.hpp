// Copyright 2026 The slms Authors. All Rights Reserved.
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

#pragma once

#include <span>
#include <vector>

namespace slms {

/// A correlation coefficient. Constant inputs leave the coefficient undefined:
/// value is NaN and degenerate is set.
struct Coefficient {
  double value = 0.0;
  bool degenerate = false;
};

/// Sample Pearson r with n-denominators. Throws DegenerateInput when n < 2 and
/// InvalidArgument on length mismatch.
Coefficient pearson(std::span<const double> x, std::span<const double> y);

/// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson on average ranks.
Coefficient spearman(std::span<const double> x, std::span<const double> y);

/// Tie-corrected Kendall tau-b via Knight's O(n log n) merge-sort count.
Coefficient kendall_tau_b(std::span<const double> x, std::span<const double> y);

}  // namespace slms
