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

#ifndef TERRATWIN_SCENARIO_PLACEMENT_HPP_
#define TERRATWIN_SCENARIO_PLACEMENT_HPP_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "terratwin/proximity/road_network.hpp"

namespace terratwin::scenario {

using proximity::NodeId;

struct Demand {
  NodeId node;
  double weight;  // >= 0, typically population
};

enum class Objective { kMean, kMax };
std::string_view objective_name(Objective o);

inline constexpr double kDefaultCoverMinutes = 7.5;

struct PlacementProblem {
  const proximity::RoadNetwork* net = nullptr;
  std::vector<NodeId> candidates;
  std::vector<Demand> demand;
  int k = 0;                                // k-median mode
  double t_cover = kDefaultCoverMinutes;    // cover mode
  std::optional<double> t_mean;             // k-median feasibility bound
  Objective objective = Objective::kMean;
  proximity::SpeedTable speeds;
};

struct Assignment {
  NodeId node;                  // demand node or cover target
  std::optional<NodeId> site;   // nearest chosen site, if reachable
  double minutes;               // kUnreachable when no chosen site reaches it
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Placement {
  std::vector<NodeId> chosen;  // ascending
  double objective = 0.0;      // minutes (k-median) or station count (cover)
  bool feasible = false;
  std::vector<Assignment> assignment;
  std::vector<NodeId> uncoverable;  // cover mode only
};

// Driving minutes from every candidate (rows) to every listed node
// (columns), computed once per problem and shared read-only.
class TravelMatrix {
 public:
  TravelMatrix(const proximity::RoadNetwork& net,
               std::span<const NodeId> candidates,
               std::span<const NodeId> targets,
               const proximity::SpeedTable& speeds, double limit);
  double at(std::size_t candidate, std::size_t target) const {
    return times_[candidate * n_targets_ + target];
  }
  std::size_t candidates() const { return n_candidates_; }
  std::size_t targets() const { return n_targets_; }

 private:
  std::size_t n_candidates_ = 0;
  std::size_t n_targets_ = 0;
  std::vector<double> times_;
};

// Objective of a candidate subset (indices into p.candidates); infinite when
// some positive-weight demand is unreachable.
double kmedian_objective(const PlacementProblem& p, const TravelMatrix& m,
                         std::span<const std::size_t> chosen);

// Greedy forward selection followed by first-improvement swap search in
// (chosen id, candidate id) order. Throws InvalidArgument for k outside
// 1..|candidates|, an empty candidate list or negative weights.
Placement solve_kmedian(const PlacementProblem& p);
// Greedy forward selection only.
Placement solve_kmedian_greedy(const PlacementProblem& p);

// Greedy set cover over T_cover isochrones (most newly covered, ties by
// smallest id) followed by reverse-order pruning of redundant sites.
// Throws InvalidArgument for an empty target set.
Placement solve_cover(const PlacementProblem& p, std::span<const NodeId> targets);

// Exhaustive optima over all candidate subsets; |candidates| <= 16.
Placement brute_force_kmedian(const PlacementProblem& p);
Placement brute_force_cover(const PlacementProblem& p,
                            std::span<const NodeId> targets);

double harmonic(std::size_t n);

}  // namespace terratwin::scenario

#endif  // TERRATWIN_SCENARIO_PLACEMENT_HPP_
