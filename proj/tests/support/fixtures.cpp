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

#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <unistd.h>

namespace fixture {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("terratwin_" + tag + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

proximity::RoadNetwork random_network(Rng& rng, int nodes, int extra_edges, bool connected,
                                      double extent) {
  using proximity::RoadClass;
  std::vector<proximity::RoadNode> ns;
  std::vector<proximity::NodeId> ids;
  for (int i = 0; i < nodes; ++i) ids.push_back(7 * static_cast<proximity::NodeId>(i) + 3);
  for (int i = nodes - 1; i > 0; --i) {
    std::swap(ids[i], ids[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  for (int i = 0; i < nodes; ++i) {
    ns.push_back({ids[i], {rng.uniform(0.0, extent), rng.uniform(0.0, extent)}});
  }
  const RoadClass classes[] = {RoadClass::kHighway, RoadClass::kPrimary, RoadClass::kSecondary,
                               RoadClass::kDirt};
  std::vector<proximity::RoadEdge> es;
  std::set<std::pair<int, int>> used;
  auto add = [&](int a, int b) {
    if (a == b || !used.insert({std::min(a, b), std::max(a, b)}).second) return;
    const double euclid = std::hypot(ns[a].pos.x - ns[b].pos.x, ns[a].pos.y - ns[b].pos.y);
    es.push_back({ns[a].id, ns[b].id, classes[rng.below(4)],
                  euclid * rng.uniform(1.0, 1.5) + 1.0});
  };
  for (int i = 1; i < nodes; ++i) {
    if (!connected && rng.uniform() < 0.2) continue;
    add(i, static_cast<int>(rng.below(static_cast<std::uint64_t>(i))));
  }
  for (int i = 0; i < extra_edges && nodes > 1; ++i) {
    add(static_cast<int>(rng.below(nodes)), static_cast<int>(rng.below(nodes)));
  }
  return proximity::RoadNetwork(std::move(ns), std::move(es));
}

}  // namespace fixture
