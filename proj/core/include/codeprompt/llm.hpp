#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "codeprompt/prompts.hpp"

namespace codeprompt::llm {

struct LlmRequest {
  std::string model_id;
  prompts::PromptBundle bundle;  // messages + decoding (temperature defaults to 0)
};

// Stable key over (model, messages, decoding); unrelated configuration never
// feeds into it.
std::string cache_key(const LlmRequest& request);
std::string request_digest(const LlmRequest& request);

enum class Source { Live, Cache, Replay, Stub };
std::string to_string(Source source);

struct LlmExchange {
  LlmRequest request;
  std::string response_text;
  long prompt_tokens = 0;
  long completion_tokens = 0;
  long latency_ms = 0;
  Source source = Source::Stub;
  std::string timestamp;  // empty unless the exchange actually went live
  std::string key;
};

// ---------------------------------------------------------------------------
// Pricing
// ---------------------------------------------------------------------------

struct PriceTable {
  struct Rate {
    double prompt_per_1k = 0.0;
    double completion_per_1k = 0.0;
  };
  std::map<std::string, Rate> rates;

  static PriceTable load(const std::filesystem::path& path);
};

// Token counts x configured rates, summed; zero for an empty list. Throws if
// a model is missing from the table.
double estimate_cost(std::span<const LlmExchange> exchanges, const PriceTable& prices);

// ---------------------------------------------------------------------------
// Fixture / cache store: line-delimited UTF-8 records, one file per
// (model, scope). Each line: {"key", "request_digest", "response",
// "prompt_tokens", "completion_tokens"}. Persisted via write-then-rename;
// identical keys carry identical responses under temperature 0, so
// last-writer-wins across processes is benign.
// ---------------------------------------------------------------------------

class CacheStore {
 public:
  explicit CacheStore(std::filesystem::path dir);

  struct Record {
    std::string key;
    std::string request_digest;
    std::string response;
    long prompt_tokens = 0;
    long completion_tokens = 0;
  };

  std::optional<Record> lookup(const std::string& model, const std::string& scope,
                               const std::string& key);
  void append(const std::string& model, const std::string& scope, const Record& record);

  // Digest over every shard's sorted records (manifest provenance).
  std::string digest();

  const std::filesystem::path& dir() const { return dir_; }

 private:
  struct Shard {
    std::map<std::string, Record> records;
    bool loaded = false;
  };
  Shard& shard_for(const std::string& model, const std::string& scope);
  std::filesystem::path shard_path(const std::string& model, const std::string& scope) const;
  void persist(const std::string& model, const std::string& scope);

  std::filesystem::path dir_;
  std::map<std::string, Shard> shards_;
  std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

class Backend {
 public:
  virtual ~Backend() = default;
  virtual LlmExchange complete_raw(const LlmRequest& request) = 0;
};

// Transport seam so retry/backoff is testable without sockets.
struct HttpResponse {
  int status = 0;
  std::string body;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  // Throws Error on connection-level failure.
  virtual HttpResponse post_json(const std::string& path, const std::string& body,
                                 const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

std::unique_ptr<HttpTransport> make_httplib_transport(const std::string& base_url);

struct EndpointOptions {
  std::string base_url;                 // e.g. https://api.example.com
  std::string path = "/v1/chat/completions";
  std::string credential;               // bearer token, resolved from the env
  int max_retries = 4;
  int backoff_base_ms = 500;            // doubled per attempt, capped
  int backoff_cap_ms = 8000;
  int max_in_flight = 4;
  int requests_per_minute = 60;
};

// Chat-completions endpoint with capped exponential backoff on transient
// failures (connection errors, 429, 5xx). Auth, quota and content errors are
// surfaced with their category and never retried past the cap.
class LiveBackend : public Backend {
 public:
  LiveBackend(std::unique_ptr<HttpTransport> transport, EndpointOptions options);
  ~LiveBackend() override;
  LlmExchange complete_raw(const LlmRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Scripted stub: first rule whose substrings all occur in the last user
// message (and whose optional system filter matches) wins. Token counts are
// deterministic size estimates.
class StubBackend : public Backend {
 public:
  static std::unique_ptr<StubBackend> load(const std::filesystem::path& script_path);
  LlmExchange complete_raw(const LlmRequest& request) override;

  struct Rule {
    std::vector<std::string> contains;
    std::string system_contains;  // empty = any system prompt
    std::string response;
  };
  StubBackend(std::vector<Rule> rules, std::string default_response);

 private:
  std::vector<Rule> rules_;
  std::string default_response_;
};

// ---------------------------------------------------------------------------
// Completer
// ---------------------------------------------------------------------------

enum class Policy { CacheFirst, LiveOnly, ReplayOnly };
std::string to_string(Policy policy);

// Uniform completion front end. Under CacheFirst, live results are persisted
// and replays are served from the store; under ReplayOnly a miss is a
// FixtureMissingError rather than a silent live call.
class Completer {
 public:
  Completer(std::shared_ptr<Backend> backend, Policy policy, std::shared_ptr<CacheStore> store);

  LlmExchange complete(const LlmRequest& request, const std::string& scope);

  Policy policy() const { return policy_; }
  CacheStore* store() const { return store_.get(); }

 private:
  std::shared_ptr<Backend> backend_;
  Policy policy_;
  std::shared_ptr<CacheStore> store_;
};

}  // namespace codeprompt::llm
