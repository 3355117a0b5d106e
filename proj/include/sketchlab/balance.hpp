// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sketchlab/countsketch.hpp"
#include "sketchlab/matrix.hpp"
#include "sketchlab/parallel.hpp"
#include "sketchlab/random.hpp"

namespace sketchlab {

/// Per-worker work of one S*A multiplication where worker t owns rows
/// [t*B, (t+1)*B) of S, B = r/p. Y_t sums w_k over the columns k whose
/// nonzero falls in those rows.
struct WorkloadSample {
  index_t n = 0;
  index_t r = 0;
  index_t p = 0;
  double q = 0.0;
  std::shared_ptr<const std::vector<index_t>> w;  // shared by every sample of a run
  std::vector<index_t> per_worker;
  std::uint64_t trial = 0;

  index_t nnz() const {
    index_t s = 0;
    for (index_t x : *w) s += x;
    return s;
  }
  index_t nnz2() const {
    index_t s = 0;
    for (index_t x : *w) s += x * x;
    return s;
  }
  double mean() const { return q * static_cast<double>(nnz()); }
  double variance() const { return q * (1.0 - q) * static_cast<double>(nnz2()); }
};

/// Seed of trial t in a run seeded by `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t t) { return derive_seed(seed, t); }

namespace detail {

inline void check_partition(index_t r, index_t p) {
  require(r >= 1 && p >= 1, "balance: r and p must be >= 1");
  require(r % p == 0, "balance: p = " + std::to_string(p) + " does not divide r = " + std::to_string(r));
}

}  // namespace detail

/// Draws the CountSketch row of every column (same stream as
/// build_countsketch with seed trial_seed(seed, t)) and tallies Y_t.
/// Trials run in parallel; the result is ordered by trial and independent of
/// the worker count.
inline std::vector<WorkloadSample> simulate_workload(std::span<const index_t> w, index_t r, index_t p, int trials,
                                                     std::uint64_t seed, int threads = 0) {
  detail::check_partition(r, p);
  detail::require(trials >= 1, "simulate_workload: trials must be >= 1");
  detail::require(!w.empty(), "simulate_workload: empty workload profile");
  auto profile = std::make_shared<const std::vector<index_t>>(w.begin(), w.end());
  const auto n = static_cast<index_t>(w.size());
  const index_t rows_per_worker = r / p;
  std::vector<WorkloadSample> out(static_cast<std::size_t>(trials));
  const int nt = resolve_threads(threads);
#pragma omp parallel for num_threads(nt) schedule(dynamic, 1)
  for (int t = 0; t < trials; ++t) {
    WorkloadSample s{n, r, p, 1.0 / static_cast<double>(p), profile, std::vector<index_t>(static_cast<std::size_t>(p), 0),
                     static_cast<std::uint64_t>(t)};
    const std::uint64_t ts = trial_seed(seed, static_cast<std::uint64_t>(t));
    for (index_t k = 0; k < n; ++k) s.per_worker[draw_countsketch_column(ts, r, k).row / rows_per_worker] += w[k];
    out[static_cast<std::size_t>(t)] = std::move(s);
  }
  return out;
}

/// Runs the real S*A kernel with one row block per worker (n_r = r/p) and
/// reads Y_t from its per-block counters.
inline std::vector<WorkloadSample> instrumented_workload(const CsrView& a, index_t r, index_t p, int trials,
                                                         std::uint64_t seed, int threads = 0) {
  detail::check_partition(r, p);
  detail::require(trials >= 1, "instrumented_workload: trials must be >= 1");
  std::vector<index_t> w(static_cast<std::size_t>(a.nrows));
  for (index_t i = 0; i < a.nrows; ++i) w[i] = a.row_nnz(i);
  auto profile = std::make_shared<const std::vector<index_t>>(std::move(w));
  std::vector<WorkloadSample> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    BuildOptions bopt;
    bopt.n_r = r / p;
    bopt.threads = threads;
    const auto s = build_countsketch(r, a.nrows, trial_seed(seed, static_cast<std::uint64_t>(t)), bopt);
    KernelStats stats;
    multiply_sa(s, a, threads, &stats);
    stats.block_work.resize(static_cast<std::size_t>(p), 0);
    out.push_back({a.nrows, r, p, 1.0 / static_cast<double>(p), profile, std::move(stats.block_work),
                   static_cast<std::uint64_t>(t)});
  }
  return out;
}

enum class TailKind { Chebyshev, HoeffdingAbsolute, HoeffdingRelative };

inline const char* to_string(TailKind k) {
  switch (k) {
    case TailKind::Chebyshev: return "chebyshev";
    case TailKind::HoeffdingAbsolute: return "hoeffding-absolute";
    case TailKind::HoeffdingRelative: return "hoeffding-relative";
  }
  return "?";
}

inline std::optional<TailKind> parse_tail_kind(std::string_view s) {
  if (s == "chebyshev") return TailKind::Chebyshev;
  if (s == "hoeffding-absolute") return TailKind::HoeffdingAbsolute;
  if (s == "hoeffding-relative") return TailKind::HoeffdingRelative;
  return std::nullopt;
}

/// Deviation threshold t for one worker's workload.
///   Chebyshev:          sqrt(n q (1-q) nnz2),            P[|Y - mu| >= t] <= 1/n
///   Hoeffding absolute: (1-q) sqrt(2 nnz2 ln n),          P[|Y - mu| >  t] <= 2/n
///   Hoeffding relative: mu ((1-q)/q) sqrt(2 ln n),        P[|Y - mu| >  t] <= 2/n
/// The Hoeffding forms need q <= 1/2.
inline double tail_threshold(const WorkloadSample& s, TailKind kind) {
  const double n = static_cast<double>(s.n);
  const double q = s.q;
  const double nnz2 = static_cast<double>(s.nnz2());
  switch (kind) {
    case TailKind::Chebyshev: return std::sqrt(n * q * (1.0 - q) * nnz2);
    case TailKind::HoeffdingAbsolute:
      detail::require(q <= 0.5, "hoeffding-absolute bound assumes q <= 1/2");
      return (1.0 - q) * std::sqrt(2.0 * nnz2 * std::log(n));
    case TailKind::HoeffdingRelative:
      detail::require(q <= 0.5, "hoeffding-relative bound assumes q <= 1/2");
      return s.mean() * ((1.0 - q) / q) * std::sqrt(2.0 * std::log(n));
  }
  return 0.0;
}

inline bool tail_violated(double y, double mu, double t, TailKind kind) {
  const double dev = std::abs(y - mu);
  return kind == TailKind::Chebyshev ? dev >= t : dev > t;
}

struct TailReport {
  TailKind kind{};
  double threshold = 0.0;
  index_t events = 0;  // (trial, worker) pairs
  index_t violations = 0;
  double rate = 0.0;
  double allowed = 0.0;  // 1/n or 2/n
  double slack = 0.0;    // 3 * sqrt(allowed / trials)
  bool within_bound = false;
  double simultaneous_success = 0.0;  // fraction of trials with no violating worker
  double union_bound = 0.0;           // (1 - allowed)^p
  std::vector<double> worker_means;
};

/// Empirical violation rates of one tail bound over all (trial, worker)
/// events. `scale` multiplies the threshold.
inline TailReport check_tail_bounds(std::span<const WorkloadSample> samples, TailKind kind, double scale = 1.0) {
  detail::require(!samples.empty(), "check_tail_bounds: no samples");
  const WorkloadSample& s0 = samples.front();
  TailReport rep;
  rep.kind = kind;
  rep.threshold = tail_threshold(s0, kind) * scale;
  const double mu = s0.mean();
  const double n = static_cast<double>(s0.n);
  rep.allowed = kind == TailKind::Chebyshev ? 1.0 / n : 2.0 / n;
  rep.worker_means.assign(static_cast<std::size_t>(s0.p), 0.0);
  index_t clean_trials = 0;
  for (const auto& s : samples) {
    detail::require(s.p == s0.p && s.n == s0.n && s.r == s0.r, "check_tail_bounds: samples from different runs");
    bool clean = true;
    for (index_t t = 0; t < s.p; ++t) {
      const double y = static_cast<double>(s.per_worker[t]);
      rep.worker_means[t] += y;
      ++rep.events;
      if (tail_violated(y, mu, rep.threshold, kind)) {
        ++rep.violations;
        clean = false;
      }
    }
    clean_trials += clean;
  }
  for (double& m : rep.worker_means) m /= static_cast<double>(samples.size());
  rep.rate = static_cast<double>(rep.violations) / static_cast<double>(rep.events);
  rep.slack = 3.0 * std::sqrt(rep.allowed / static_cast<double>(samples.size()));
  rep.within_bound = rep.rate <= rep.allowed + rep.slack;
  rep.simultaneous_success = static_cast<double>(clean_trials) / static_cast<double>(samples.size());
  rep.union_bound = std::pow(1.0 - rep.allowed, static_cast<double>(s0.p));
  return rep;
}

}  // namespace sketchlab
