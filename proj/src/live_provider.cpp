// Copyright 2026 The Rulegraph Authors
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

#include "httplib.h"

#include <cmath>
#include <thread>

#include "rulegraph/error.hpp"
#include "rulegraph/provider.hpp"

namespace rulegraph {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

SplitUrl split_url(const std::string& base_url) {
  const std::size_t scheme = base_url.find("://");
  const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  const std::size_t slash = base_url.find('/', host_start);
  SplitUrl out;
  out.origin = base_url.substr(0, slash);
  if (slash != std::string::npos) out.prefix = base_url.substr(slash);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

class HttplibTransport final : public HttpTransport {
 public:
  HttpReply post(const std::string& base_url, const std::string& path,
                 const std::string& body,
                 const std::map<std::string, std::string>& headers,
                 std::chrono::seconds timeout) override {
    const SplitUrl url = split_url(base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto result = client.Post(url.prefix + path, h, body, "application/json");
    if (!result) {
      const httplib::Error err = result.error();
      const ErrorKind kind = err == httplib::Error::ConnectionTimeout
                                 ? ErrorKind::kTimeout
                                 : ErrorKind::kTransportError;
      throw Error(kind, "HTTP request to " + url.origin + " failed: " +
                            httplib::to_string(err));
    }
    return {result->status, result->body};
  }
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport() {
  return std::make_unique<HttplibTransport>();
}

LiveProvider::LiveProvider(LiveProviderOptions options,
                           std::unique_ptr<HttpTransport> transport,
                           Sleeper sleeper)
    : options_(std::move(options)),
      transport_(transport ? std::move(transport) : make_http_transport()),
      sleeper_(sleeper ? std::move(sleeper) : [](std::chrono::milliseconds d) {
        std::this_thread::sleep_for(d);
      }) {}

json LiveProvider::request_body(const ProviderRequest& request) const {
  json messages = json::array();
  if (!request.system_prompt.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
  }
  messages.push_back({{"role", "user"}, {"content", request.rendered_prompt}});
  return {{"model", options_.model},
          {"messages", std::move(messages)},
          {"temperature", request.temperature}};
}

ProviderResponse LiveProvider::complete(const ProviderRequest& request) {
  const std::string body = request_body(request).dump();
  std::map<std::string, std::string> headers{{"Content-Type", "application/json"}};
  if (!options_.api_key.empty()) {
    headers["Authorization"] = "Bearer " + options_.api_key;
  }

  const int max_attempts = std::max(1, options_.retry.max_attempts);
  for (int attempt = 1;; ++attempt) {
    ErrorKind failure = ErrorKind::kTransportError;
    std::string detail;
    try {
      const HttpReply reply = transport_->post(options_.base_url, "/chat/completions",
                                               body, headers, options_.timeout);
      if (reply.status >= 200 && reply.status < 300) {
        json doc = json::parse(reply.body, nullptr, /*allow_exceptions=*/false);
        if (doc.is_discarded() || !doc.contains("choices") ||
            !doc["choices"].is_array() || doc["choices"].empty()) {
          throw Error(ErrorKind::kProviderFailure,
                      "chat-completions reply has no choices");
        }
        const json& message = doc["choices"][0].value("message", json::object());
        ProviderResponse response;
        response.raw_text = message.value("content", std::string());
        if (doc.contains("usage") && doc["usage"].is_object()) {
          response.token_usage.prompt_tokens =
              doc["usage"].value("prompt_tokens", std::int64_t{0});
          response.token_usage.completion_tokens =
              doc["usage"].value("completion_tokens", std::int64_t{0});
        }
        response.transport_attempts = attempt;
        attach_parsed(response, request);
        return response;
      }
      if (reply.status == 429) {
        failure = ErrorKind::kRateLimited;
      } else if (reply.status == 408 || reply.status == 504) {
        failure = ErrorKind::kTimeout;
      } else if (reply.status >= 500) {
        failure = ErrorKind::kTransportError;
      } else {
        throw Error(ErrorKind::kProviderFailure,
                    "provider returned HTTP " + std::to_string(reply.status));
      }
      detail = "HTTP " + std::to_string(reply.status);
    } catch (const Error& e) {
      if (!is_retryable(e.kind())) throw;
      failure = e.kind();
      detail = e.what();
    }
    if (attempt >= max_attempts) {
      throw Error(failure, "giving up after " + std::to_string(attempt) +
                               " attempts: " + detail);
    }
    const double scale = std::pow(options_.retry.backoff_multiplier, attempt - 1);
    sleeper_(std::chrono::milliseconds(static_cast<std::int64_t>(
        static_cast<double>(options_.retry.initial_backoff.count()) * scale)));
  }
}

}  // namespace rulegraph
