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

#ifndef TERRATWIN_PIPELINE_CLUSTERING_HPP_
#define TERRATWIN_PIPELINE_CLUSTERING_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace terratwin::pipeline {

struct ScenarioCluster {
  std::size_t dims = 0;
  // Min-max normalized vectors, column-major: normalized[d][i].
  std::vector<std::vector<double>> normalized;
  std::vector<std::vector<double>> centroids;  // [cluster][d]
  std::vector<std::size_t> assignment;         // vector -> cluster
  // cluster -> member nearest its centroid (ties by index); n for a
  // cluster left without members.
  std::vector<std::size_t> representatives;
  int iterations = 0;
};

// Per-dimension min-max scaling to [0,1]; constant dimensions become 0.
std::vector<std::vector<double>> normalize_columns(
    const std::vector<std::vector<double>>& vectors);

// k-means on min-max normalized vectors. Initial centers: vector seed % n,
// then repeatedly the vector farthest from all chosen centers (ties to the
// smallest index). Stops when assignments repeat or after 100 rounds.
// Throws InvalidArgument for empty input, ragged vectors or k outside
// 1..n.
ScenarioCluster cluster_scenarios(const std::vector<std::vector<double>>& vectors,
                                  std::size_t k, std::uint64_t seed = 0);

inline constexpr int kMaxClusterIterations = 100;

struct ServiceCheck {
  std::string name;
  // Returns true when the service behaves correctly at the given item.
  std::function<bool(std::size_t item)> run;
};

struct SuiteReport {
  std::size_t executed = 0;
  std::size_t passed = 0;
  struct Failure {
    std::string check;
    std::size_t item;
  };
  std::vector<Failure> failures;
  bool all_passed() const { return failures.empty(); }
};

// Runs every check on every listed item. A check that throws counts as a
// failure.
SuiteReport run_representative_suite(const std::vector<std::size_t>& items,
                                     const std::vector<ServiceCheck>& checks);

}  // namespace terratwin::pipeline

#endif  // TERRATWIN_PIPELINE_CLUSTERING_HPP_
