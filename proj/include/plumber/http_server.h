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

#ifndef PLUMBER_HTTP_SERVER_H_
#define PLUMBER_HTTP_SERVER_H_

#include <cstdint>
#include <memory>
#include <string>

#include "plumber/service.h"

namespace plumber {

// HTTP front end for a Service. Requests are served concurrently; responses
// carry CORS headers for the configured UI origin.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds host:port; port 0 picks a free port. Returns the bound port.
  // Throws kPortInUse.
  int bind(const std::string& host, int port);
  // Serves on a background thread.
  void start();
  // Blocks until stop() is called from elsewhere.
  void run();
  // Stops accepting requests and waits for in-flight ones up to the
  // drain timeout.
  void stop();

  int port() const;
  std::size_t in_flight() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace plumber

#endif  // PLUMBER_HTTP_SERVER_H_
