// Copyright 2026 The Plumber Authors.
//
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

#include "plumber/http_server.h"

#include <atomic>
#include <chrono>
#include <thread>

#include <httplib.h>

#include "plumber/error.h"

namespace plumber {

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}

  Service& service;
  httplib::Server server;
  std::thread thread;
  std::atomic<std::size_t> in_flight{0};
  int port = -1;
};

namespace {

void AddCors(const Config& config, const httplib::Request& req,
             httplib::Response& res) {
  if (config.ui_origin.empty()) return;
  if (config.ui_origin == "*") {
    res.set_header("Access-Control-Allow-Origin", "*");
  } else if (req.get_header_value("Origin") == config.ui_origin) {
    res.set_header("Access-Control-Allow-Origin", config.ui_origin);
    res.set_header("Vary", "Origin");
  } else {
    return;
  }
  res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
  res.set_header("Access-Control-Allow-Headers", "Content-Type");
}

}  // namespace

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  Impl* impl = impl_.get();
  // SO_REUSEADDR only.
  impl->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes),
               sizeof(yes));
  });
  auto handler = [impl](const httplib::Request& req, httplib::Response& res) {
    ++impl->in_flight;
    ApiRequest api;
    api.method = req.method;
    api.path = req.path;
    for (const auto& [k, v] : req.params) api.query.emplace(k, v);
    api.body = req.body;
    ApiResponse out = impl->service.handle(api);
    res.status = out.status;
    res.set_content(out.body.dump(-1, ' ', false, Json::error_handler_t::replace),
                    "application/json");
    AddCors(impl->service.config(), req, res);
    --impl->in_flight;
  };
  impl->server.Get(".*", handler);
  impl->server.Post(".*", handler);
  impl->server.Put(".*", handler);
  impl->server.Delete(".*", handler);
  impl->server.Options(".*", [impl](const httplib::Request& req,
                                    httplib::Response& res) {
    res.status = 204;
    AddCors(impl->service.config(), req, res);
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = 0;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else {
    bound = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kPortInUse,
                "cannot bind " + host + ":" + std::to_string(port),
                std::to_string(port));
  }
  impl_->port = bound;
  return bound;
}

void HttpServer::start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (!impl_) return;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(impl_->service.config().drain_timeout_ms);
  while (impl_->in_flight.load() > 0 &&
         std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpServer::port() const { return impl_->port; }

std::size_t HttpServer::in_flight() const { return impl_->in_flight.load(); }

}  // namespace plumber
