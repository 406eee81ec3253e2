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

#include "terratwin/scenario/placement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>

#include "terratwin/common/error.hpp"
#include "terratwin/proximity/routing.hpp"

namespace terratwin::scenario {

namespace {

using proximity::kUnreachable;

// Relative margin a swap must beat to count as an improvement.
constexpr double kImprovementEps = 1e-12;

bool improves(double candidate, double current) {
  if (std::isinf(current)) return candidate < current;
  return candidate < current - kImprovementEps * std::max(1.0, std::abs(current));
}

std::vector<NodeId> sorted_unique(std::span<const NodeId> ids) {
  std::vector<NodeId> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_common(const PlacementProblem& p) {
  if (p.net == nullptr) throw InvalidArgument("placement problem has no road network");
  if (p.candidates.empty()) throw InvalidArgument("candidate list is empty");
  for (NodeId c : p.candidates) p.net->require_index(c);
  if (sorted_unique(p.candidates).size() != p.candidates.size()) {
    throw InvalidArgument("candidate list has duplicates");
  }
}

// Candidates sorted by id so every "ties by smallest id" rule is a plain
// first-wins scan.
PlacementProblem normalized(const PlacementProblem& p) {
  PlacementProblem q = p;
  std::sort(q.candidates.begin(), q.candidates.end());
  return q;
}

void check_kmedian(const PlacementProblem& p) {
  check_common(p);
  if (p.k < 1 || static_cast<std::size_t>(p.k) > p.candidates.size()) {
    throw InvalidArgument("k must be in 1..|candidates| (" +
                          std::to_string(p.candidates.size()) + "), got " +
                          std::to_string(p.k));
  }
  if (p.demand.empty()) throw InvalidArgument("demand list is empty");
  for (const auto& d : p.demand) {
    if (!(d.weight >= 0.0) || !std::isfinite(d.weight)) {
      throw InvalidArgument("demand weight must be finite and >= 0");
    }
    p.net->require_index(d.node);
  }
  if (p.t_mean && !(*p.t_mean >= 0.0)) throw InvalidArgument("T_mean must be >= 0");
}

std::vector<NodeId> demand_nodes(const PlacementProblem& p) {
  std::vector<NodeId> out;
  for (const auto& d : p.demand) out.push_back(d.node);
  return out;
}

Placement finish_kmedian(const PlacementProblem& p, const TravelMatrix& m,
                         std::vector<std::size_t> chosen) {
  std::sort(chosen.begin(), chosen.end());
  Placement out;
  for (std::size_t c : chosen) out.chosen.push_back(p.candidates[c]);
  out.objective = kmedian_objective(p, m, chosen);
  for (std::size_t d = 0; d < p.demand.size(); ++d) {
    Assignment a{p.demand[d].node, std::nullopt, kUnreachable};
    for (std::size_t c : chosen) {
      if (m.at(c, d) < a.minutes) {
        a.minutes = m.at(c, d);
        a.site = p.candidates[c];
      }
    }
    out.assignment.push_back(a);
  }
  out.feasible = std::isfinite(out.objective) &&
                 (!p.t_mean || out.objective <= *p.t_mean);
  return out;
}

std::vector<std::size_t> greedy(const PlacementProblem& p, const TravelMatrix& m) {
  std::vector<std::size_t> chosen;
  std::vector<bool> used(p.candidates.size(), false);
  for (int step = 0; step < p.k; ++step) {
    std::size_t best = p.candidates.size();
    double best_obj = kUnreachable;
    for (std::size_t c = 0; c < p.candidates.size(); ++c) {
      if (used[c]) continue;
      chosen.push_back(c);
      const double obj = kmedian_objective(p, m, chosen);
      chosen.pop_back();
      if (best == p.candidates.size() || obj < best_obj) {
        best = c;
        best_obj = obj;
      }
    }
    used[best] = true;
    chosen.push_back(best);
  }
  return chosen;
}

void swap_search(const PlacementProblem& p, const TravelMatrix& m,
                 std::vector<std::size_t>& chosen) {
  double current = kmedian_objective(p, m, chosen);
  bool improved = true;
  while (improved) {
    improved = false;
    std::sort(chosen.begin(), chosen.end());
    std::vector<bool> used(p.candidates.size(), false);
    for (std::size_t c : chosen) used[c] = true;
    for (std::size_t i = 0; i < chosen.size() && !improved; ++i) {
      for (std::size_t c = 0; c < p.candidates.size() && !improved; ++c) {
        if (used[c]) continue;
        const std::size_t out = chosen[i];
        chosen[i] = c;
        const double obj = kmedian_objective(p, m, chosen);
        if (improves(obj, current)) {
          current = obj;
          improved = true;
        } else {
          chosen[i] = out;
        }
      }
    }
  }
}

}  // namespace

std::string_view objective_name(Objective o) {
  return o == Objective::kMax ? "max" : "mean";
}

TravelMatrix::TravelMatrix(const proximity::RoadNetwork& net,
                           std::span<const NodeId> candidates,
                           std::span<const NodeId> targets,
                           const proximity::SpeedTable& speeds, double limit)
    : n_candidates_(candidates.size()), n_targets_(targets.size()) {
  std::vector<std::size_t> target_index;
  for (NodeId t : targets) target_index.push_back(net.require_index(t));
  times_.resize(n_candidates_ * n_targets_);
  const auto cost = proximity::driving_cost(speeds);
  for (std::size_t c = 0; c < n_candidates_; ++c) {
    const NodeId src[] = {candidates[c]};
    const auto t = proximity::shortest_times(net, src, cost, limit);
    for (std::size_t j = 0; j < n_targets_; ++j) {
      const double v = t[target_index[j]];
      times_[c * n_targets_ + j] = v <= limit ? v : kUnreachable;
    }
  }
}

double kmedian_objective(const PlacementProblem& p, const TravelMatrix& m,
                         std::span<const std::size_t> chosen) {
  double weighted = 0.0, total = 0.0, worst = 0.0;
  for (std::size_t d = 0; d < p.demand.size(); ++d) {
    const double w = p.demand[d].weight;
    if (w == 0.0) continue;
    double best = kUnreachable;
    for (std::size_t c : chosen) best = std::min(best, m.at(c, d));
    if (std::isinf(best)) return kUnreachable;
    weighted += w * best;
    total += w;
    worst = std::max(worst, best);
  }
  if (p.objective == Objective::kMax) return worst;
  return total > 0.0 ? weighted / total : 0.0;
}

Placement solve_kmedian_greedy(const PlacementProblem& problem) {
  check_kmedian(problem);
  const PlacementProblem p = normalized(problem);
  const auto nodes = demand_nodes(p);
  const TravelMatrix m(*p.net, p.candidates, nodes, p.speeds, kUnreachable);
  return finish_kmedian(p, m, greedy(p, m));
}

Placement solve_kmedian(const PlacementProblem& problem) {
  check_kmedian(problem);
  const PlacementProblem p = normalized(problem);
  const auto nodes = demand_nodes(p);
  const TravelMatrix m(*p.net, p.candidates, nodes, p.speeds, kUnreachable);
  auto chosen = greedy(p, m);
  swap_search(p, m, chosen);
  return finish_kmedian(p, m, std::move(chosen));
}

namespace {

struct CoverSetup {
  std::vector<NodeId> targets;               // sorted unique
  std::vector<std::vector<std::size_t>> covers;  // candidate -> target idx
  std::vector<bool> coverable;
  std::unique_ptr<TravelMatrix> matrix;
};

CoverSetup prepare_cover(const PlacementProblem& p, std::span<const NodeId> targets) {
  check_common(p);
  if (targets.empty()) throw InvalidArgument("cover target set is empty");
  if (!(p.t_cover >= 0.0)) throw InvalidArgument("T_cover must be >= 0");
  CoverSetup s;
  s.targets = sorted_unique(targets);
  s.matrix = std::make_unique<TravelMatrix>(*p.net, p.candidates, s.targets,
                                            p.speeds, p.t_cover);
  s.covers.resize(p.candidates.size());
  s.coverable.assign(s.targets.size(), false);
  for (std::size_t c = 0; c < p.candidates.size(); ++c) {
    for (std::size_t t = 0; t < s.targets.size(); ++t) {
      if (s.matrix->at(c, t) <= p.t_cover) {
        s.covers[c].push_back(t);
        s.coverable[t] = true;
      }
    }
  }
  return s;
}

bool covers_all(const CoverSetup& s, std::span<const std::size_t> chosen) {
  std::vector<bool> hit(s.targets.size(), false);
  for (std::size_t c : chosen) {
    for (std::size_t t : s.covers[c]) hit[t] = true;
  }
  for (std::size_t t = 0; t < hit.size(); ++t) {
    if (s.coverable[t] && !hit[t]) return false;
  }
  return true;
}

Placement finish_cover(const PlacementProblem& p, const CoverSetup& s,
                       std::vector<std::size_t> chosen) {
  std::sort(chosen.begin(), chosen.end());
  Placement out;
  for (std::size_t c : chosen) out.chosen.push_back(p.candidates[c]);
  out.objective = static_cast<double>(chosen.size());
  for (std::size_t t = 0; t < s.targets.size(); ++t) {
    Assignment a{s.targets[t], std::nullopt, kUnreachable};
    for (std::size_t c : chosen) {
      if (s.matrix->at(c, t) < a.minutes) {
        a.minutes = s.matrix->at(c, t);
        a.site = p.candidates[c];
      }
    }
    out.assignment.push_back(a);
    if (!s.coverable[t]) out.uncoverable.push_back(s.targets[t]);
  }
  out.feasible = out.uncoverable.empty();
  return out;
}

}  // namespace

Placement solve_cover(const PlacementProblem& problem,
                      std::span<const NodeId> targets) {
  const PlacementProblem p = normalized(problem);
  const CoverSetup s = prepare_cover(p, targets);
  std::vector<bool> covered(s.targets.size(), false);
  std::size_t remaining = static_cast<std::size_t>(
      std::count(s.coverable.begin(), s.coverable.end(), true));
  std::vector<std::size_t> picked;
  std::vector<bool> used(p.candidates.size(), false);
  while (remaining > 0) {
    std::size_t best = p.candidates.size(), best_gain = 0;
    for (std::size_t c = 0; c < p.candidates.size(); ++c) {
      if (used[c]) continue;
      std::size_t gain = 0;
      for (std::size_t t : s.covers[c]) gain += covered[t] ? 0 : 1;
      if (gain > best_gain) {
        best = c;
        best_gain = gain;
      }
    }
    used[best] = true;
    picked.push_back(best);
    for (std::size_t t : s.covers[best]) {
      if (!covered[t]) {
        covered[t] = true;
        --remaining;
      }
    }
  }
  // Drop sites whose targets the others already cover, latest pick first.
  for (std::size_t i = picked.size(); i-- > 0;) {
    std::vector<std::size_t> without = picked;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (covers_all(s, without)) picked = std::move(without);
  }
  return finish_cover(p, s, std::move(picked));
}

namespace {

constexpr std::size_t kBruteForceLimit = 16;

void check_brute_force(const PlacementProblem& p) {
  if (p.candidates.size() > kBruteForceLimit) {
    throw InvalidArgument("brute force supports at most 16 candidates");
  }
}

}  // namespace

Placement brute_force_kmedian(const PlacementProblem& problem) {
  check_kmedian(problem);
  check_brute_force(problem);
  const PlacementProblem p = normalized(problem);
  const auto nodes = demand_nodes(p);
  const TravelMatrix m(*p.net, p.candidates, nodes, p.speeds, kUnreachable);
  const std::size_t n = p.candidates.size();
  std::vector<std::size_t> best;
  double best_obj = kUnreachable;
  std::vector<std::size_t> subset;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != p.k) continue;
    subset.clear();
    for (std::size_t c = 0; c < n; ++c) {
      if (mask & (1u << c)) subset.push_back(c);
    }
    const double obj = kmedian_objective(p, m, subset);
    if (best.empty() || obj < best_obj ||
        (obj == best_obj && subset < best)) {
      best = subset;
      best_obj = obj;
    }
  }
  return finish_kmedian(p, m, best);
}

Placement brute_force_cover(const PlacementProblem& problem,
                            std::span<const NodeId> targets) {
  check_brute_force(problem);
  const PlacementProblem p = normalized(problem);
  const CoverSetup s = prepare_cover(p, targets);
  const std::size_t n = p.candidates.size();
  std::vector<std::size_t> best;
  bool found = false;
  std::vector<std::size_t> subset;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    subset.clear();
    for (std::size_t c = 0; c < n; ++c) {
      if (mask & (1u << c)) subset.push_back(c);
    }
    if (found && subset.size() >= best.size()) continue;
    if (covers_all(s, subset)) {
      best = subset;
      found = true;
    }
  }
  return finish_cover(p, s, best);
}

double harmonic(std::size_t n) {
  double h = 0.0;
  for (std::size_t i = 1; i <= n; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

}  // namespace terratwin::scenario
