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

#include "screenparse/service.hpp"

#include <httplib.h>

#include <chrono>

#include "screenparse/candidates.hpp"
#include "screenparse/errors.hpp"

namespace screenparse {

using nlohmann::json;

namespace {

HttpReply error_reply(int status, std::string_view kind, const std::string& message) {
  return {status, "application/json", to_json_text({{"error", {{"kind", kind}, {"message", message}}}})};
}

HttpReply error_reply(const Error& e) {
  return error_reply(http_status_for(e.kind()), error_kind_name(e.kind()), e.what());
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kMalformedInput, std::string("request body is not JSON: ") + e.what());
  }
}

cv::Mat image_from(const json& j) {
  if (!j.contains("image") || !j.at("image").is_string()) {
    throw Error(ErrorKind::kMalformedInput, "\"image\" must be a base64 PNG string");
  }
  std::string_view text = j.at("image").get_ref<const std::string&>();
  if (text.starts_with("data:")) {
    const auto comma = text.find(',');
    if (comma != std::string_view::npos) text.remove_prefix(comma + 1);
  }
  const auto bytes = base64_decode(text);
  return decode_image(bytes);
}

ScreenHierarchy hierarchy_from(const json& j, const AppConfig& cfg, Task task) {
  if (j.contains("hierarchy")) return hierarchy_from_json(j.at("hierarchy"));
  if (j.contains("candidates")) return parse_screen(candidates_from_json(j.at("candidates")), cfg.hsp_for(task));
  throw Error(ErrorKind::kMalformedInput, "request needs \"hierarchy\" or \"candidates\"");
}

template <typename Fn>
HttpReply guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return error_reply(e);
  } catch (const json::exception& e) {
    return error_reply(400, error_kind_name(ErrorKind::kMalformedInput), e.what());
  }
}

}  // namespace

struct Service::Impl {
  AppConfig config;
  Transport& transport;
  PromptSet prompts;
  httplib::Server server;

  AgentContext context() const { return AgentContext{transport, prompts, config.style, config.lvlm}; }
};

Service::Service(AppConfig config, Transport& transport)
    : impl_(new Impl{std::move(config), transport, {}, {}}) {
  impl_->prompts = impl_->config.prompts();
  httplib::Server& server = impl_->server;
  const std::string origin = impl_->config.cors_origin;

  server.set_default_headers({{"Access-Control-Allow-Origin", origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };
  // multipart/form-data carries a "request" JSON field and an "image" file
  auto body_of = [](const httplib::Request& req) -> std::string {
    if (!req.is_multipart_form_data()) return req.body;
    json j = req.has_file("request") ? parse_body(req.get_file_value("request").content) : json::object();
    if (req.has_file("image")) {
      const std::string& raw = req.get_file_value("image").content;
      j["image"] = base64_encode({reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()});
    }
    return j.dump();
  };
  auto timed = [this](std::string_view route, const httplib::Request& req, httplib::Response& res,
                      const std::function<HttpReply()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    HttpReply reply = guarded(fn);
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    log_event(reply.status < 400 ? "info" : "warn", "request",
              {{"route", route}, {"status", reply.status}, {"bytes_in", req.body.size()}, {"latency_ms", ms}});
  };

  server.Get("/healthz", [send](const httplib::Request&, httplib::Response& res) {
    send(res, {200, "text/plain", "ok"});
  });
  server.Post("/parse", [this, timed](const httplib::Request& req, httplib::Response& res) {
    timed("/parse", req, res, [&] {
      return handle_parse(req.body, req.has_param("task") ? req.get_param_value("task") : "");
    });
  });
  server.Post("/ground", [this, timed, body_of](const httplib::Request& req, httplib::Response& res) {
    timed("/ground", req, res, [&] { return handle_ground(body_of(req)); });
  });
  server.Post("/refer", [this, timed, body_of](const httplib::Request& req, httplib::Response& res) {
    timed("/refer", req, res, [&] { return handle_refer(body_of(req)); });
  });
}

Service::~Service() { stop(); }

HttpReply Service::handle_parse(const std::string& body, const std::string& query_task) const {
  return guarded([&] {
    const Task task = query_task.empty() ? Task::kGrounding : task_from_name(query_task);
    const HspConfig cfg = impl_->config.hsp_for(task);
    return HttpReply{200, "application/json", to_json_text(run_parse(candidates_from_json(parse_body(body)), cfg))};
  });
}

HttpReply Service::handle_ground(const std::string& body) const {
  return guarded([&] {
    const json j = parse_body(body);
    if (!j.is_object()) throw Error(ErrorKind::kMalformedInput, "request body must be an object");
    GroundRequest req;
    req.hierarchy = hierarchy_from(j, impl_->config, Task::kGrounding);
    req.image = image_from(j);
    if (!j.contains("instruction") || !j.at("instruction").is_string()) {
      throw Error(ErrorKind::kMalformedInput, "\"instruction\" must be a string");
    }
    req.instruction = j.at("instruction").get<std::string>();
    req.k = j.value("k", 1);
    if (req.k < 1) throw Error(ErrorKind::kMalformedInput, "k must be >= 1");
    if (j.contains("gt_box")) req.gt_box = box_from_json(j.at("gt_box"), "gt_box");
    AgentContext ctx = impl_->context();
    return HttpReply{200, "application/json", to_json_text(run_ground(req, ctx))};
  });
}

HttpReply Service::handle_refer(const std::string& body) const {
  return guarded([&] {
    const json j = parse_body(body);
    if (!j.is_object()) throw Error(ErrorKind::kMalformedInput, "request body must be an object");
    ReferRequest req;
    req.hierarchy = hierarchy_from(j, impl_->config, Task::kReferring);
    req.image = image_from(j);
    if (!j.contains("point")) throw Error(ErrorKind::kMalformedInput, "\"point\" is required");
    const auto xy = j.at("point").get<std::vector<double>>();
    if (xy.size() != 2) throw Error(ErrorKind::kMalformedInput, "\"point\" must be [x, y]");
    req.point = {xy[0], xy[1]};
    AgentContext ctx = impl_->context();
    if (!j.value("include_lenses", false)) return HttpReply{200, "application/json", to_json_text(run_refer(req, ctx))};
    LensPair lenses;
    json out = run_refer(req, ctx, &lenses);
    out["lenses"] = {{"lens1", base64_encode(encode_png(lenses.lens1))},
                     {"lens2", base64_encode(encode_png(lenses.lens2))}};
    return HttpReply{200, "application/json", to_json_text(out)};
  });
}

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::listen() { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace screenparse
