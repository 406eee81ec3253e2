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

#ifndef TERRATWIN_SERVER_ROUTER_HPP_
#define TERRATWIN_SERVER_ROUTER_HPP_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "terratwin/engine/twin.hpp"
#include "terratwin/server/ledger.hpp"

namespace terratwin::server {

struct Request {
  std::string method;  // "GET" or "POST"
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  std::string role;    // X-Role header
};

struct Response {
  int status = 200;
  std::string body;
  std::string catalog_version;
};

// Transport-independent request handling. Each request pins the twin
// snapshot current when it arrives; refresh() swaps in a newer catalog
// version for later requests.
class Router {
 public:
  // Serves the model directory, following its CURRENT pointer on refresh().
  explicit Router(std::filesystem::path model_root);
  // Serves a fixed snapshot; refresh() is a no-op.
  explicit Router(std::shared_ptr<const engine::Twin> twin);
  ~Router();
  Router(const Router&) = delete;
  Router& operator=(const Router&) = delete;

  Response handle(const Request& request);

  // Reloads when CURRENT names another version; true if swapped.
  bool refresh();
  std::shared_ptr<const engine::Twin> snapshot() const;
  const UsageLedger& ledger() const { return ledger_; }

  // Requests whose estimated runtime exceeds this run as background jobs.
  void set_job_threshold_seconds(double s) { job_threshold_ = s; }

 private:
  struct Job {
    std::string status = "running";  // running | done | failed
    Response response;
  };

  Response dispatch(const Request& r, const std::shared_ptr<const engine::Twin>& twin);
  Response start_job(const Request& r, const std::shared_ptr<const engine::Twin>& twin,
                     Category category);
  Response job_status(const std::string& id) const;

  std::optional<std::filesystem::path> root_;
  mutable std::mutex twin_mu_;
  std::shared_ptr<const engine::Twin> twin_;
  UsageLedger ledger_;
  double job_threshold_ = 2.0;

  mutable std::mutex jobs_mu_;
  std::map<std::string, Job> jobs_;
  std::vector<std::thread> workers_;
  std::atomic<std::uint64_t> next_job_{1};
};

}  // namespace terratwin::server

#endif  // TERRATWIN_SERVER_ROUTER_HPP_
