// Copyright 2026 The gaugesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAUGESIM_SRC_BLOCKED_SUM_H_
#define GAUGESIM_SRC_BLOCKED_SUM_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gaugesim::detail {

// Sums `width` accumulators over [0, n). The split into blocks depends on n
// only, so the rounding is the same for every thread count.
template <typename Fn>
std::vector<double> blocked_sum(std::int64_t n, std::size_t width, Fn&& fn) {
  constexpr std::int64_t kBlocks = 64;
  const std::int64_t blocks = n < kBlocks * 1024 ? 1 : kBlocks;
  std::vector<double> part(static_cast<std::size_t>(blocks) * width, 0.0);
#pragma omp parallel for schedule(static) if (blocks > 1)
  for (std::int64_t b = 0; b < blocks; ++b) {
    double* acc = part.data() + static_cast<std::size_t>(b) * width;
    const std::int64_t hi = n * (b + 1) / blocks;
    for (std::int64_t i = n * b / blocks; i < hi; ++i) fn(i, acc);
  }
  std::vector<double> out(width, 0.0);
  for (std::int64_t b = 0; b < blocks; ++b) {
    for (std::size_t w = 0; w < width; ++w) out[w] += part[static_cast<std::size_t>(b) * width + w];
  }
  return out;
}

}  // namespace gaugesim::detail

#endif  // GAUGESIM_SRC_BLOCKED_SUM_H_
