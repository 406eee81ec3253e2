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

#ifndef TERRATWIN_SERVER_HTTP_HPP_
#define TERRATWIN_SERVER_HTTP_HPP_

#include <filesystem>
#include <functional>
#include <string>

#include "terratwin/server/router.hpp"

namespace terratwin::server {

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path static_dir;  // served under "/" when set
  double refresh_seconds = 5.0;      // CURRENT polling period, 0 = off
};

// Blocks until stop() is called or the listener fails.
class HttpServer {
 public:
  HttpServer(Router& router, ServeOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and serves; returns false if the port could not be bound.
  bool run();
  // Binds to an ephemeral port; returns it, or -1 on failure. Call run()
  // afterwards to serve.
  int bind_any_port();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace terratwin::server

#endif  // TERRATWIN_SERVER_HTTP_HPP_
