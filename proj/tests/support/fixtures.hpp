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

#ifndef TERRATWIN_TESTS_FIXTURES_HPP_
#define TERRATWIN_TESTS_FIXTURES_HPP_

#include <filesystem>
#include <string>

#include "terratwin/common/rng.hpp"
#include "terratwin/proximity/road_network.hpp"

namespace fixture {

using namespace terratwin;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

// Random undirected road graph with `nodes` nodes in a square of side `extent`.
// Ids are sparse and not in insertion order. With `connected` false, about a
// fifth of the nodes are left out of the spanning tree. Edge lengths are at
// least the euclidean distance between endpoints.
proximity::RoadNetwork random_network(Rng& rng, int nodes, int extra_edges, bool connected,
                                      double extent = 5000.0);

}  // namespace fixture

#endif  // TERRATWIN_TESTS_FIXTURES_HPP_
