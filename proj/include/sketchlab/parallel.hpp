// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sketchlab/errors.hpp"

namespace sketchlab {

/// Worker count used when a kernel is called with threads <= 0:
/// SKETCHLAB_THREADS if set, otherwise the available parallelism.
inline int default_threads() {
  if (const char* env = std::getenv("SKETCHLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
#ifdef _OPENMP
  return std::max(1, omp_get_max_threads());
#else
  return std::max(1u, std::thread::hardware_concurrency());
#endif
}

inline int resolve_threads(int requested) { return requested > 0 ? requested : default_threads(); }

inline int worker_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

inline int team_size() {
#ifdef _OPENMP
  return omp_get_num_threads();
#else
  return 1;
#endif
}

/// Half-open range [begin, end) owned by worker t when `total` items are split
/// into stripes of width ceil(total / p).
struct Stripe {
  std::int64_t begin;
  std::int64_t end;
};

inline Stripe stripe(std::int64_t total, std::int64_t p, std::int64_t t) {
  const std::int64_t width = (total + p - 1) / p;
  const std::int64_t b = std::min(total, t * width);
  return {b, std::min(total, b + width)};
}

/// Instrumentation counters. Kernels fill them only when handed a non-null
/// pointer; counts are loop trip counts, not analytic formulas.
struct KernelStats {
  std::int64_t flops = 0;
  /// Multiply-accumulate flops in the innermost accumulation loop.
  std::int64_t accumulate_flops = 0;
  /// Number of (sketch nonzero, input nonzero) contributions in S*A.
  std::int64_t row_contributions = 0;
  std::int64_t randb = 0;
  std::int64_t randi = 0;
  std::int64_t randn = 0;
  std::int64_t aux_bytes = 0;
  /// Per row-block work of S*A, indexed by row block.
  std::vector<std::int64_t> block_work;

  void reset() { *this = KernelStats{}; }
};

}  // namespace sketchlab
