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

#ifndef TERRATWIN_ENGINE_VALIDATION_HPP_
#define TERRATWIN_ENGINE_VALIDATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "terratwin/engine/twin.hpp"
#include "terratwin/pipeline/clustering.hpp"

namespace terratwin::engine {

// One vector per cell where every factor and baseline risk is defined:
// the factor values, the five peril risks and a land-cover one-hot.
struct CellVectors {
  std::vector<std::size_t> cells;  // flat indices, ascending
  std::vector<std::vector<double>> vectors;
};
CellVectors cell_vectors(const Twin& twin);

// Checks a service at one flat cell index; each compares the service
// answer with an independent recomputation.
std::vector<pipeline::ServiceCheck> default_service_checks(const Twin& twin);

struct ValidationReport {
  std::size_t population = 0;   // eligible cells
  std::size_t k = 0;
  std::vector<std::size_t> representative_cells;
  std::vector<std::size_t> cluster_sizes;
  int iterations = 0;
  std::size_t full_grid_executions = 0;  // population * checks
  pipeline::SuiteReport suite;
  double reduction() const;
};

// Clusters the cell vectors and runs every check on each representative.
ValidationReport validate_representatives(const Twin& twin, std::size_t k,
                                          std::uint64_t seed = 0);
std::string format_validation(const ValidationReport& r);

}  // namespace terratwin::engine

#endif  // TERRATWIN_ENGINE_VALIDATION_HPP_
