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

#include "terratwin/server/http.hpp"

#include <chrono>
#include <condition_variable>
#include <iostream>
#include <mutex>
#include <thread>

#include <httplib.h>

namespace terratwin::server {

namespace {

constexpr const char* kIndexPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>terratwin</title></head>
<body><h1>terratwin</h1>
<p>JSON API under <a href="/api/v1/services">/api/v1/services</a>.
Start the server with --static DIR to serve a dashboard build here.</p>
</body></html>
)";

}  // namespace

struct HttpServer::Impl {
  Router& router;
  ServeOptions options;
  httplib::Server svr;
  bool bound = false;

  std::mutex mu;
  std::condition_variable cv;
  bool stopping = false;
  std::thread refresher;

  Impl(Router& r, ServeOptions o) : router(r), options(std::move(o)) {}

  void handle(const httplib::Request& req, httplib::Response& res) {
    Request r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    r.body = req.body;
    r.role = req.get_header_value("X-Role");
    const Response out = router.handle(r);
    res.status = out.status;
    res.set_header("X-Catalog-Version", out.catalog_version);
    res.set_content(out.body, "application/json; charset=utf-8");
  }

  void refresh_loop() {
    const auto period = std::chrono::duration<double>(options.refresh_seconds);
    std::unique_lock<std::mutex> lock(mu);
    while (!cv.wait_for(lock, period, [this] { return stopping; })) {
      lock.unlock();
      try {
        if (router.refresh()) {
          std::cerr << "serving catalog version " << router.snapshot()->version() << "\n";
        }
      } catch (const std::exception& e) {
        std::cerr << "refresh failed: " << e.what() << "\n";
      }
      lock.lock();
    }
  }
};

HttpServer::HttpServer(Router& router, ServeOptions options)
    : impl_(std::make_unique<Impl>(router, std::move(options))) {
  auto& svr = impl_->svr;
  Impl* impl = impl_.get();
  const auto api = [impl](const httplib::Request& req, httplib::Response& res) {
    impl->handle(req, res);
  };
  svr.Get("/api/.*", api);
  svr.Post("/api/.*", api);
  if (!impl_->options.static_dir.empty()) {
    svr.set_mount_point("/", impl_->options.static_dir.string());
  } else {
    svr.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kIndexPage, "text/html; charset=utf-8");
    });
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind_any_port() {
  const int port = impl_->svr.bind_to_any_port(impl_->options.host);
  impl_->bound = port > 0;
  return impl_->bound ? port : -1;
}

bool HttpServer::run() {
  if (impl_->options.refresh_seconds > 0) {
    impl_->refresher = std::thread([this] { impl_->refresh_loop(); });
  }
  bool ok = impl_->bound ? impl_->svr.listen_after_bind()
                         : impl_->svr.listen(impl_->options.host, impl_->options.port);
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    impl_->stopping = true;
  }
  impl_->cv.notify_all();
  if (impl_->refresher.joinable()) impl_->refresher.join();
  return ok;
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->svr.stop();
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    impl_->stopping = true;
  }
  impl_->cv.notify_all();
}

bool HttpServer::running() const { return impl_->svr.is_running(); }

}  // namespace terratwin::server
