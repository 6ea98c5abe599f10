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

#include "screenparse/lvlm.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>

#include <httplib.h>

#include "screenparse/annotate.hpp"
#include "screenparse/errors.hpp"

namespace screenparse {

using nlohmann::json;

LvlmRequest& LvlmRequest::add_text(std::string text) {
  user_parts.emplace_back(TextPart{std::move(text)});
  return *this;
}

LvlmRequest& LvlmRequest::add_image(cv::Mat image) {
  user_parts.emplace_back(ImagePart{std::move(image)});
  return *this;
}

namespace {

struct DigestContext {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  DigestContext() {
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 unavailable");
    }
  }
  ~DigestContext() { EVP_MD_CTX_free(ctx); }
  DigestContext(const DigestContext&) = delete;
  DigestContext& operator=(const DigestContext&) = delete;

  void update(const void* data, std::size_t size) { EVP_DigestUpdate(ctx, data, size); }

  std::string hex() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int size = 0;
    EVP_DigestFinal_ex(ctx, digest, &size);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(size * 2);
    for (unsigned int i = 0; i < size; ++i) {
      out.push_back(kHex[digest[i] >> 4]);
      out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
  }
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  DigestContext d;
  d.update(data.data(), data.size());
  return d.hex();
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::string clean;
  clean.reserve(text.size());
  for (char ch : text) {
    if (ch != '\n' && ch != '\r' && ch != ' ') clean.push_back(ch);
  }
  if (clean.size() % 4 != 0) throw Error(ErrorKind::kMalformedInput, "invalid base64 length");
  std::vector<std::uint8_t> out(3 * clean.size() / 4);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(clean.data()),
                                static_cast<int>(clean.size()));
  if (n < 0) throw Error(ErrorKind::kMalformedInput, "invalid base64 data");
  std::size_t size = static_cast<std::size_t>(n);
  // EVP_DecodeBlock keeps the zero bytes produced by '=' padding.
  if (!clean.empty() && clean.back() == '=') --size;
  if (clean.size() >= 2 && clean[clean.size() - 2] == '=') --size;
  out.resize(size);
  return out;
}

std::string image_digest(const cv::Mat& image) {
  DigestContext d;
  const std::string shape = std::to_string(image.cols) + "x" + std::to_string(image.rows) + "x" +
                            std::to_string(image.channels()) + ":";
  d.update(shape.data(), shape.size());
  const std::size_t row_bytes = static_cast<std::size_t>(image.cols) * image.elemSize();
  for (int y = 0; y < image.rows; ++y) d.update(image.ptr(y), row_bytes);
  return d.hex();
}

json canonical_request(const LvlmRequest& req) {
  json parts = json::array();
  for (const UserPart& part : req.user_parts) {
    if (const auto* text = std::get_if<TextPart>(&part)) {
      parts.push_back({{"text", text->text}});
    } else {
      parts.push_back({{"image", image_digest(std::get<ImagePart>(part).image)}});
    }
  }
  return {{"model", req.model_id},
          {"system", req.system_prompt},
          {"temperature", req.temperature},
          {"max_tokens", req.max_tokens},
          {"parts", std::move(parts)}};
}

std::string request_digest(const LvlmRequest& req) {
  if (req.user_parts.empty()) throw Error(ErrorKind::kMalformedInput, "request has no user parts");
  if (!(req.temperature >= 0.0)) throw Error(ErrorKind::kMalformedInput, "temperature must be >= 0");
  return sha256_hex(canonical_request(req).dump());
}

ReplayTransport::ReplayTransport(std::unordered_map<std::string, std::string> table)
    : table_(std::move(table)) {}

ReplayTransport ReplayTransport::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kMalformedInput, "cannot open replay file: " + path.string());
  std::unordered_map<std::string, std::string> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      table[j.at("digest").get<std::string>()] = j.at("response").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kMalformedInput,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return ReplayTransport(std::move(table));
}

std::string ReplayTransport::send(const LvlmRequest& req) {
  const std::string digest = request_digest(req);
  const auto it = table_.find(digest);
  if (it == table_.end()) throw Error(ErrorKind::kReplayMiss, "no recorded response for digest " + digest);
  return it->second;
}

RecordingTransport::RecordingTransport(Transport& inner, std::filesystem::path path)
    : inner_(inner), path_(std::move(path)) {}

std::string RecordingTransport::send(const LvlmRequest& req) {
  const std::string digest = request_digest(req);
  const auto start = std::chrono::steady_clock::now();
  std::string response = inner_.send(req);
  const double latency =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const json line = {{"digest", digest}, {"response", response}, {"latency_ms", latency}};
  std::lock_guard lock(mutex_);
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(ErrorKind::kTransport, "cannot append to recording: " + path_.string());
  out << line.dump() << '\n';
  return response;
}

std::string BudgetTransport::send(const LvlmRequest& req) {
  if (calls_.fetch_add(1) >= max_calls_) {
    throw Error(ErrorKind::kBudgetExceeded,
                "call budget of " + std::to_string(max_calls_) + " exhausted");
  }
  return inner_.send(req);
}

LiveConfig LiveConfig::from_env() {
  LiveConfig cfg;
  if (const char* endpoint = std::getenv("SCREENPARSE_LVLM_ENDPOINT"); endpoint && *endpoint) {
    cfg.endpoint = endpoint;
  }
  const char* key = std::getenv("SCREENPARSE_LVLM_API_KEY");
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorKind::kConfig, "live transport needs SCREENPARSE_LVLM_API_KEY");
  }
  cfg.api_key = key;
  if (const char* cap = std::getenv("SCREENPARSE_LVLM_MAX_IN_FLIGHT"); cap && *cap) {
    cfg.max_in_flight = std::max(1, std::atoi(cap));
  }
  return cfg;
}

json chat_completions_body(const LvlmRequest& req) {
  json content = json::array();
  for (const UserPart& part : req.user_parts) {
    if (const auto* text = std::get_if<TextPart>(&part)) {
      content.push_back({{"type", "text"}, {"text", text->text}});
    } else {
      const auto png = encode_png(std::get<ImagePart>(part).image);
      content.push_back({{"type", "image_url"},
                         {"image_url", {{"url", "data:image/png;base64," + base64_encode(png)}}}});
    }
  }
  json messages = json::array();
  if (!req.system_prompt.empty()) {
    messages.push_back({{"role", "system"}, {"content", req.system_prompt}});
  }
  messages.push_back({{"role", "user"}, {"content", std::move(content)}});
  return {{"model", req.model_id},
          {"temperature", req.temperature},
          {"max_tokens", req.max_tokens},
          {"messages", std::move(messages)}};
}

std::string chat_completions_text(const json& response) {
  try {
    const json& content = response.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    std::string text;
    for (const json& part : content) {
      if (part.value("type", "") == "text") text += part.at("text").get<std::string>();
    }
    return text;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kTransport, std::string("unexpected completion payload: ") + e.what());
  }
}

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorKind::kConfig, "endpoint must be a URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

LiveTransport::LiveTransport(LiveConfig config)
    : config_(std::move(config)), in_flight_(std::max(1, config_.max_in_flight)) {
  std::tie(scheme_host_port_, path_) = split_url(config_.endpoint);
}

std::string LiveTransport::send(const LvlmRequest& req) {
  request_digest(req);  // validates
  const std::string body = chat_completions_body(req).dump();
  in_flight_.acquire();
  httplib::Result result = [&] {
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);
    const httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};
    return client.Post(path_, headers, body, "application/json");
  }();
  in_flight_.release();
  if (!result) {
    throw Error(ErrorKind::kTransport, "request to " + config_.endpoint + " failed: " +
                                           httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw Error(ErrorKind::kTransport,
                "endpoint returned HTTP " + std::to_string(result->status) + ": " + result->body);
  }
  try {
    return chat_completions_text(json::parse(result->body));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kTransport, std::string("endpoint returned invalid JSON: ") + e.what());
  }
}

namespace {

class OwningRecorder final : public Transport {
 public:
  OwningRecorder(std::unique_ptr<Transport> inner, std::filesystem::path path)
      : inner_(std::move(inner)), recorder_(*inner_, std::move(path)) {}
  std::string send(const LvlmRequest& req) override { return recorder_.send(req); }

 private:
  std::unique_ptr<Transport> inner_;
  RecordingTransport recorder_;
};

}  // namespace

std::unique_ptr<Transport> make_transport(std::string_view target) {
  if (target.starts_with("replay:")) {
    return std::make_unique<ReplayTransport>(ReplayTransport::from_file(std::string(target.substr(7))));
  }
  if (target == "live") return std::make_unique<LiveTransport>(LiveConfig::from_env());
  if (target.starts_with("record:")) {
    return std::make_unique<OwningRecorder>(std::make_unique<LiveTransport>(LiveConfig::from_env()),
                                            std::string(target.substr(7)));
  }
  throw Error(ErrorKind::kConfig, "transport must be replay:FILE, live or record:FILE");
}

}  // namespace screenparse
