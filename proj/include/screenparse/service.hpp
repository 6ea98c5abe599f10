// Copyright 2026 The screenparse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Local HTTP service: GET /healthz, POST /parse, POST /ground, POST /refer.

#include <memory>
#include <string>

#include "screenparse/app.hpp"

namespace screenparse {

struct HttpReply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

class Service {
 public:
  /// The transport must outlive the service and be safe to call from
  /// several request threads at once.
  Service(AppConfig config, Transport& transport);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Request handling without a socket. `query_task` is the ?task= value.
  HttpReply handle_parse(const std::string& body, const std::string& query_task) const;
  HttpReply handle_ground(const std::string& body) const;
  HttpReply handle_refer(const std::string& body) const;

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace screenparse
