#pragma once

// Chat-completion backends: an OpenAI-compatible HTTP client and an
// in-process deterministic mock for offline runs.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ontolearn/fewshot.hpp"
#include "ontolearn/http.hpp"

namespace ontolearn {

struct DecodeParams {
  std::string model = "default";
  double temperature = 0.0;
};

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string complete(const Prompt& prompt, const DecodeParams& params) = 0;
};

// Replies with `canned` when set; otherwise echoes the union of the
// demonstrations' answers in the prompt's schema. Either way the reply is a
// pure function of the prompt.
class MockBackend : public CompletionBackend {
 public:
  MockBackend() = default;
  explicit MockBackend(std::string canned) : canned_(std::move(canned)) {}

  std::string complete(const Prompt& prompt, const DecodeParams&) override {
    ++calls_;
    if (canned_) return *canned_;
    std::vector<ExtractionResult> parts;
    for (const auto& demo : prompt.demonstrations) {
      if (const auto* pair = std::get_if<InstructionPair>(&demo)) {
        parts.push_back(parse_structured_output(pair->output));
      } else {
        parts.push_back({{}, std::get<TypingExemplar>(demo).types});
      }
    }
    const auto merged = aggregate_results(parts);
    nlohmann::ordered_json j;
    if (prompt.schema == OutputSchema::terms_and_types) j["terms"] = merged.terms;
    j["types"] = merged.types;
    return j.dump();
  }

  std::size_t calls() const { return calls_; }

 private:
  std::optional<std::string> canned_;
  std::size_t calls_ = 0;
};

//   POST {"model","messages":[{"role","content"}],"temperature"}
//   ->   {"choices":[{"message":{"content": "..."}}]}
class HttpChatBackend : public CompletionBackend {
 public:
  HttpChatBackend(std::string endpoint, std::string api_key = {},
                  http::RetryPolicy retry = {},
                  http::Transport transport = http::httplib_transport)
      : endpoint_(std::move(endpoint)),
        api_key_(std::move(api_key)),
        retry_(retry),
        transport_(std::move(transport)) {}

  static nlohmann::ordered_json request_body(const Prompt& prompt, const DecodeParams& params) {
    nlohmann::ordered_json body;
    body["model"] = params.model;
    body["messages"] = nlohmann::ordered_json::array();
    for (const auto& m : render_messages(prompt)) {
      body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    }
    body["temperature"] = params.temperature;
    return body;
  }

  std::string complete(const Prompt& prompt, const DecodeParams& params) override {
    http::Request req{endpoint_, request_body(prompt, params).dump(), api_key_};
    const auto resp = http::post_with_retry(transport_, req, retry_);
    if (text::trim(resp.body).empty()) throw ServiceError("empty completion", false, 1);
    std::string content;
    try {
      const auto j = nlohmann::json::parse(resp.body);
      const auto& msg = j.at("choices").at(0).at("message").at("content");
      if (!msg.is_null()) content = msg.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ServiceError(std::string("malformed chat response: ") + e.what(), false, 1);
    }
    if (text::trim(content).empty()) throw ServiceError("empty completion", false, 1);
    return content;
  }

 private:
  std::string endpoint_;
  std::string api_key_;
  http::RetryPolicy retry_;
  http::Transport transport_;
};

inline std::string complete(const Prompt& prompt, CompletionBackend& backend,
                            const DecodeParams& params = {}) {
  return backend.complete(prompt, params);
}

}  // namespace ontolearn
