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

// Vision-language model transports. Workflows only see Transport::send; the
// replay transport makes them pure functions of their inputs plus a recording.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>

namespace screenparse {

inline constexpr std::string_view kDefaultModelId = "gpt-4o-2024-08-06";

struct TextPart {
  std::string text;
};

struct ImagePart {
  cv::Mat image;  // 8-bit BGR
};

using UserPart = std::variant<TextPart, ImagePart>;

struct LvlmRequest {
  std::string model_id{kDefaultModelId};
  std::string system_prompt;
  std::vector<UserPart> user_parts;
  double temperature = 0.0;
  int max_tokens = 1024;

  LvlmRequest& add_text(std::string text);
  LvlmRequest& add_image(cv::Mat image);
};

/// Model settings shared by every workflow request.
struct LvlmSettings {
  std::string model_id{kDefaultModelId};
  double temperature = 0.0;
  int max_tokens = 1024;
};

struct LvlmExchange {
  std::string request_digest;
  std::string response_text;
  std::optional<double> latency_ms;
};

std::string sha256_hex(std::string_view data);
std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// SHA-256 over the image shape and raw pixel bytes.
std::string image_digest(const cv::Mat& image);

/// Canonical form hashed by request_digest: exact prompt text, image digests,
/// part order and sampling settings.
nlohmann::json canonical_request(const LvlmRequest& req);

/// Throws Error(kMalformedInput) if the request has no user parts or a
/// negative temperature.
std::string request_digest(const LvlmRequest& req);

class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string send(const LvlmRequest& req) = 0;
};

/// Read-only digest -> response table. Misses throw Error(kReplayMiss) naming
/// the digest; there is no fallback to a live model.
class ReplayTransport final : public Transport {
 public:
  explicit ReplayTransport(std::unordered_map<std::string, std::string> table);
  static ReplayTransport from_file(const std::filesystem::path& path);

  std::string send(const LvlmRequest& req) override;
  std::size_t size() const { return table_.size(); }

 private:
  std::unordered_map<std::string, std::string> table_;
};

/// Forwards to an inner transport and appends each exchange to a JSON-lines file.
class RecordingTransport final : public Transport {
 public:
  RecordingTransport(Transport& inner, std::filesystem::path path);
  std::string send(const LvlmRequest& req) override;

 private:
  Transport& inner_;
  std::filesystem::path path_;
  std::mutex mutex_;
};

/// Answers with a callback. Used to author fixtures and in tests.
class ScriptedTransport final : public Transport {
 public:
  using Responder = std::function<std::string(const LvlmRequest&)>;
  explicit ScriptedTransport(Responder responder) : responder_(std::move(responder)) {}
  std::string send(const LvlmRequest& req) override { return responder_(req); }

 private:
  Responder responder_;
};

/// Caps the number of calls per run; the call past the cap throws kBudgetExceeded.
class BudgetTransport final : public Transport {
 public:
  BudgetTransport(Transport& inner, std::size_t max_calls) : inner_(inner), max_calls_(max_calls) {}
  std::string send(const LvlmRequest& req) override;
  std::size_t calls() const { return calls_.load(); }

 private:
  Transport& inner_;
  std::size_t max_calls_;
  std::atomic<std::size_t> calls_{0};
};

struct LiveConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string api_key;
  int max_in_flight = 4;
  int timeout_seconds = 120;

  /// Reads SCREENPARSE_LVLM_ENDPOINT and SCREENPARSE_LVLM_API_KEY. Throws
  /// Error(kConfig) when the key is missing.
  static LiveConfig from_env();
};

/// Chat-completions request body with base64 PNG image parts.
nlohmann::json chat_completions_body(const LvlmRequest& req);

/// Extracts choices[0].message.content. Throws Error(kTransport) otherwise.
std::string chat_completions_text(const nlohmann::json& response);

class LiveTransport final : public Transport {
 public:
  explicit LiveTransport(LiveConfig config);
  std::string send(const LvlmRequest& req) override;

 private:
  LiveConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::counting_semaphore<> in_flight_;
};

/// Builds a transport from "replay:FILE", "live" or "record:FILE" (live with
/// every exchange appended to FILE).
std::unique_ptr<Transport> make_transport(std::string_view target);

}  // namespace screenparse
