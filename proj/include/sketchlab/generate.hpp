// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sketchlab/matrix.hpp"
#include "sketchlab/parallel.hpp"
#include "sketchlab/random.hpp"

namespace sketchlab {

/// n x d CSR matrix, each entry nonzero with probability `density`, values
/// standard normal. Row i depends only on (seed, i).
inline CsrMatrix generate_sparse(index_t n, index_t d, double density, std::uint64_t seed, int threads = 0) {
  detail::require(n >= 0 && d >= 0, "generate_sparse: negative dimension");
  detail::require(density >= 0.0 && density <= 1.0, "generate_sparse: density must lie in [0, 1]");
  const int p = resolve_threads(threads);
  const auto cut = static_cast<std::uint64_t>(std::ldexp(density, 32));
  std::vector<index_t> rowptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::vector<index_t>> cols(static_cast<std::size_t>(p));
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(p));
#pragma omp parallel for num_threads(p) schedule(static, 1)
  for (int t = 0; t < p; ++t) {
    const auto [i0, i1] = stripe(n, p, t);
    auto& c = cols[t];
    auto& v = vals[t];
    for (index_t i = i0; i < i1; ++i) {
      RandomStream s(seed, {StreamKind::Data, 0, static_cast<std::uint64_t>(i)});
      const auto before = static_cast<index_t>(c.size());
      for (index_t j = 0; j < d; ++j)
        if (s.next_u32() < cut) c.push_back(j);
      for (auto k = static_cast<std::size_t>(before); k < c.size(); ++k) v.push_back(s.randn());
      rowptr[i + 1] = static_cast<index_t>(c.size()) - before;
    }
  }
  for (index_t i = 0; i < n; ++i) rowptr[i + 1] += rowptr[i];
  std::vector<index_t> colidx;
  std::vector<double> values;
  colidx.reserve(static_cast<std::size_t>(rowptr[n]));
  values.reserve(static_cast<std::size_t>(rowptr[n]));
  for (int t = 0; t < p; ++t) {
    colidx.insert(colidx.end(), cols[t].begin(), cols[t].end());
    values.insert(values.end(), vals[t].begin(), vals[t].end());
  }
  return CsrMatrix(n, d, std::move(rowptr), std::move(colidx), std::move(values));
}

/// n x d row-major matrix of standard normals; row i depends only on (seed, i).
inline DenseMatrix generate_dense(index_t n, index_t d, std::uint64_t seed, int threads = 0) {
  DenseMatrix a(n, d, Layout::RowMajor);
  double* out = a.data().data();
  const int p = resolve_threads(threads);
#pragma omp parallel for num_threads(p) schedule(static)
  for (index_t i = 0; i < n; ++i) {
    RandomStream s(seed, {StreamKind::Data, 0, static_cast<std::uint64_t>(i)});
    for (index_t j = 0; j < d; ++j) out[i * d + j] = s.randn();
  }
  return a;
}

/// Benchmark shapes: full row count divided by `scale`. `k` is the target
/// subspace dimension used by "k"-relative sketch sizes.
struct Preset {
  std::string name;
  index_t n = 0;
  index_t d = 0;
  double density = 1.0;  // 1: dense storage
  index_t k = 0;
  bool sparse() const { return density < 1.0; }
};

inline std::optional<Preset> find_preset(std::string_view name, index_t scale = 1) {
  if (scale < 1) return std::nullopt;
  const auto make = [&](index_t n, index_t d, double density, index_t k) {
    return Preset{std::string(name), std::max<index_t>(1, n / scale), d, density, k};
  };
  if (name == "tall-sparse") return make(2097152, 512, 0.05, 512);
  if (name == "short-sparse") return make(131072, 8192, 0.025, 100);
  if (name == "tall-dense") return make(2097152, 512, 1.0, 512);
  if (name == "short-dense") return make(131072, 8192, 1.0, 100);
  return std::nullopt;
}

}  // namespace sketchlab
