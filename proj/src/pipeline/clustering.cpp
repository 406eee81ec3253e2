// Copyright 2026 The terratwin Authors
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

#include "terratwin/pipeline/clustering.hpp"

#include <algorithm>
#include <limits>

#include "terratwin/common/error.hpp"
#include "terratwin/simd/kernels.hpp"

namespace terratwin::pipeline {

std::vector<std::vector<double>> normalize_columns(
    const std::vector<std::vector<double>>& vectors) {
  const std::size_t n = vectors.size();
  const std::size_t dims = n == 0 ? 0 : vectors[0].size();
  std::vector<std::vector<double>> cols(dims, std::vector<double>(n));
  for (std::size_t d = 0; d < dims; ++d) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& v : vectors) {
      lo = std::min(lo, v[d]);
      hi = std::max(hi, v[d]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      cols[d][i] = hi > lo ? (vectors[i][d] - lo) / (hi - lo) : 0.0;
    }
  }
  return cols;
}

namespace {

class Distances {
 public:
  explicit Distances(const std::vector<std::vector<double>>& cols)
      : n_(cols.empty() ? 0 : cols[0].size()) {
    for (const auto& c : cols) ptrs_.push_back(c.data());
  }
  // Squared distance of every vector to `centroid`.
  void to(const std::vector<double>& centroid, std::vector<double>& out) const {
    out.resize(n_);
    simd::kernels().sq_dist_to_centroid(ptrs_.data(), ptrs_.size(), n_,
                                        centroid.data(), out.data());
  }

 private:
  std::size_t n_;
  std::vector<const double*> ptrs_;
};

std::vector<double> vector_at(const std::vector<std::vector<double>>& cols,
                              std::size_t i) {
  std::vector<double> v(cols.size());
  for (std::size_t d = 0; d < cols.size(); ++d) v[d] = cols[d][i];
  return v;
}

}  // namespace

ScenarioCluster cluster_scenarios(const std::vector<std::vector<double>>& vectors,
                                  std::size_t k, std::uint64_t seed) {
  if (vectors.empty()) throw InvalidArgument("no vectors to cluster");
  const std::size_t n = vectors.size();
  const std::size_t dims = vectors[0].size();
  for (const auto& v : vectors) {
    if (v.size() != dims) throw InvalidArgument("vectors differ in length");
  }
  if (k < 1 || k > n) {
    throw InvalidArgument("k must be in 1.." + std::to_string(n));
  }
  ScenarioCluster out;
  out.dims = dims;
  out.normalized = normalize_columns(vectors);
  const Distances dist(out.normalized);

  // Farthest-point initialization.
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<double> scratch;
  std::size_t next = static_cast<std::size_t>(seed % n);
  for (std::size_t c = 0; c < k; ++c) {
    out.centroids.push_back(vector_at(out.normalized, next));
    dist.to(out.centroids.back(), scratch);
    std::size_t far = 0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], scratch[i]);
      if (nearest[i] > nearest[far]) far = i;
    }
    next = far;
  }

  std::vector<std::size_t> assign(n, k);
  std::vector<double> best(n);
  auto assign_all = [&]() {
    std::vector<std::size_t> fresh(n, 0);
    std::fill(best.begin(), best.end(), std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < k; ++c) {
      dist.to(out.centroids[c], scratch);
      for (std::size_t i = 0; i < n; ++i) {
        if (scratch[i] < best[i]) {
          best[i] = scratch[i];
          fresh[i] = c;
        }
      }
    }
    const bool changed = fresh != assign;
    assign.swap(fresh);
    return changed;
  };

  while (assign_all() && out.iterations < kMaxClusterIterations) {
    ++out.iterations;
    std::vector<std::vector<double>> sums(k, std::vector<double>(dims, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[assign[i]];
      for (std::size_t d = 0; d < dims; ++d) sums[assign[i]][d] += out.normalized[d][i];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t d = 0; d < dims; ++d) {
        out.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
      }
    }
  }
  out.assignment = assign;

  out.representatives.assign(k, n);
  std::vector<double> rep_dist(k, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = assign[i];
    if (best[i] < rep_dist[c]) {
      rep_dist[c] = best[i];
      out.representatives[c] = i;
    }
  }
  return out;
}

SuiteReport run_representative_suite(const std::vector<std::size_t>& items,
                                     const std::vector<ServiceCheck>& checks) {
  SuiteReport report;
  for (std::size_t item : items) {
    for (const auto& check : checks) {
      ++report.executed;
      bool ok = false;
      try {
        ok = check.run(item);
      } catch (const std::exception&) {
        ok = false;
      }
      if (ok) {
        ++report.passed;
      } else {
        report.failures.push_back({check.name, item});
      }
    }
  }
  return report;
}

}  // namespace terratwin::pipeline
