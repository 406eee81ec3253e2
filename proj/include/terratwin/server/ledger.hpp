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

#ifndef TERRATWIN_SERVER_LEDGER_HPP_
#define TERRATWIN_SERVER_LEDGER_HPP_

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "terratwin/pipeline/catalog.hpp"

namespace terratwin::server {

using pipeline::Category;

enum class Role {
  kBankInsurance,
  kRealEstate,
  kPropertyOwner,
  kMunicipality,
  kFarmer,
  kForestry,
  kOther,
};

inline constexpr std::size_t kNamedRoles = 6;
inline constexpr std::size_t kCategories = 5;

std::string_view role_name(Role r);
// Unknown or empty names map to kOther.
Role parse_role(std::string_view name);

using CountMatrix = std::array<std::array<std::uint64_t, kCategories>, kNamedRoles>;
using Heatmap = std::array<std::array<double, kCategories>, kNamedRoles>;

// Each row divided by its maximum; an all-zero row stays zero.
Heatmap usage_heatmap(const CountMatrix& counts);

// Service calls per (role, category). Lock-free; counts only grow.
class UsageLedger {
 public:
  void record(Role role, Category category);
  std::uint64_t count(Role role, Category category) const;
  // Named roles only; "other" is kept but not part of the heatmap.
  CountMatrix counts() const;
  Heatmap heatmap() const { return usage_heatmap(counts()); }

 private:
  std::array<std::array<std::atomic<std::uint64_t>, kCategories>, kNamedRoles + 1> cells_{};
};

struct ServiceDescriptor {
  std::string id;
  std::string name;
  Category category;
  std::string method;
  std::string endpoint;
  bool implemented;
};

// The 27 environmental services; entries without an engine behind them are
// listed with implemented = false.
const std::vector<ServiceDescriptor>& service_catalog();

}  // namespace terratwin::server

#endif  // TERRATWIN_SERVER_LEDGER_HPP_
