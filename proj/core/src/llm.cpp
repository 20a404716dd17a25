#include "codeprompt/llm.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <deque>
#include <thread>

#include <json.hpp>

#include "codeprompt/util.hpp"

// cpp-httplib is pulled in only here; keep it out of public headers.
#include <httplib.h>

namespace codeprompt::llm {

using nlohmann::json;

namespace {

std::string canonical_request(const LlmRequest& request) {
  std::string acc = request.model_id;
  acc += '\x1f';
  for (const auto& message : request.bundle.messages) {
    acc += prompts::to_string(message.role);
    acc += '\x1e';
    acc += message.content;
    acc += '\x1f';
  }
  const auto& d = request.bundle.decoding;
  acc += "temperature=" + util::canonical_double(d.temperature);
  acc += ";max_tokens=" + std::to_string(d.max_tokens);
  acc += ";stop=";
  for (const auto& s : d.stop) {
    acc += s;
    acc += '\x1e';
  }
  return acc;
}

long estimate_tokens(std::size_t chars) { return long((chars + 3) / 4); }

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string sanitize_component(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

}  // namespace

std::string cache_key(const LlmRequest& request) {
  return util::sha256_hex(canonical_request(request));
}

std::string request_digest(const LlmRequest& request) {
  json j;
  j["model"] = request.model_id;
  j["messages"] = json::array();
  for (const auto& m : request.bundle.messages) {
    j["messages"].push_back({{"role", prompts::to_string(m.role)}, {"content", m.content}});
  }
  j["temperature"] = request.bundle.decoding.temperature;
  j["max_tokens"] = request.bundle.decoding.max_tokens;
  return util::sha256_hex(j.dump());
}

std::string to_string(Source source) {
  switch (source) {
    case Source::Live: return "live";
    case Source::Cache: return "cache";
    case Source::Replay: return "replay";
    case Source::Stub: return "stub";
  }
  return "stub";
}

std::string to_string(Policy policy) {
  switch (policy) {
    case Policy::CacheFirst: return "cache-first";
    case Policy::LiveOnly: return "live-only";
    case Policy::ReplayOnly: return "replay-only";
  }
  return "cache-first";
}

// ---------------------------------------------------------------------------
// PriceTable
// ---------------------------------------------------------------------------

PriceTable PriceTable::load(const std::filesystem::path& path) {
  json j = json::parse(util::read_file(path));
  PriceTable table;
  for (const auto& [model, rates] : j.at("models").items()) {
    Rate rate{rates.at("prompt_per_1k").get<double>(), rates.at("completion_per_1k").get<double>()};
    if (rate.prompt_per_1k < 0 || rate.completion_per_1k < 0) {
      throw Error("price table: negative rate for model " + model);
    }
    table.rates[model] = rate;
  }
  return table;
}

double estimate_cost(std::span<const LlmExchange> exchanges, const PriceTable& prices) {
  double total = 0.0;
  for (const auto& exchange : exchanges) {
    auto it = prices.rates.find(exchange.request.model_id);
    if (it == prices.rates.end()) {
      throw Error("price table has no entry for model '" + exchange.request.model_id + "'");
    }
    total += double(exchange.prompt_tokens) / 1000.0 * it->second.prompt_per_1k;
    total += double(exchange.completion_tokens) / 1000.0 * it->second.completion_per_1k;
  }
  return total;
}

// ---------------------------------------------------------------------------
// CacheStore
// ---------------------------------------------------------------------------

CacheStore::CacheStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path CacheStore::shard_path(const std::string& model,
                                             const std::string& scope) const {
  return dir_ / (sanitize_component(model) + "__" + sanitize_component(scope) + ".jsonl");
}

CacheStore::Shard& CacheStore::shard_for(const std::string& model, const std::string& scope) {
  std::string id = model + "\x1f" + scope;
  Shard& shard = shards_[id];
  if (!shard.loaded) {
    shard.loaded = true;
    auto content = util::read_file_if_exists(shard_path(model, scope));
    if (content) {
      for (const auto& line : util::split_lines(*content)) {
        if (util::trim(line).empty()) continue;
        json j = json::parse(line);
        Record record{j.at("key").get<std::string>(),
                      j.value("request_digest", ""),
                      j.at("response").get<std::string>(),
                      j.value("prompt_tokens", 0L),
                      j.value("completion_tokens", 0L)};
        shard.records[record.key] = std::move(record);
      }
    }
  }
  return shard;
}

std::optional<CacheStore::Record> CacheStore::lookup(const std::string& model,
                                                     const std::string& scope,
                                                     const std::string& key) {
  std::lock_guard<std::mutex> lock(mutex_);
  Shard& shard = shard_for(model, scope);
  auto it = shard.records.find(key);
  if (it == shard.records.end()) return std::nullopt;
  return it->second;
}

void CacheStore::append(const std::string& model, const std::string& scope, const Record& record) {
  std::lock_guard<std::mutex> lock(mutex_);
  Shard& shard = shard_for(model, scope);
  shard.records[record.key] = record;
  persist(model, scope);
}

void CacheStore::persist(const std::string& model, const std::string& scope) {
  Shard& shard = shards_[model + "\x1f" + scope];
  std::string out;
  for (const auto& [key, record] : shard.records) {
    json j;
    j["key"] = record.key;
    j["request_digest"] = record.request_digest;
    j["response"] = record.response;
    j["prompt_tokens"] = record.prompt_tokens;
    j["completion_tokens"] = record.completion_tokens;
    out += j.dump();
    out += '\n';
  }
  util::write_file_atomic(shard_path(model, scope), out);
}

std::string CacheStore::digest() {
  std::lock_guard<std::mutex> lock(mutex_);
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(dir_)) {
    for (const auto& entry : fs::directory_iterator(dir_)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::string acc;
  for (const auto& file : files) {
    acc += file.filename().string();
    acc += '\0';
    acc += util::sha256_hex(util::read_file(file));
    acc += '\0';
  }
  return util::sha256_hex(acc);
}

// ---------------------------------------------------------------------------
// LiveBackend
// ---------------------------------------------------------------------------

namespace {

class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(std::string base_url) : base_url_(std::move(base_url)) {}

  HttpResponse post_json(const std::string& path, const std::string& body,
                         const std::vector<std::pair<std::string, std::string>>& headers) override {
    httplib::Client client(base_url_);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);
    httplib::Headers hl;
    for (const auto& [k, v] : headers) hl.emplace(k, v);
    auto res = client.Post(path, hl, body, "application/json");
    if (!res) throw Error("[transport] connection to " + base_url_ + " failed");
    return {res->status, res->body};
  }

 private:
  std::string base_url_;
};

// Bounds concurrent requests and requests per minute.
class Throttle {
 public:
  Throttle(int max_in_flight, int requests_per_minute)
      : max_in_flight_(std::max(max_in_flight, 1)), rpm_(std::max(requests_per_minute, 1)) {}

  void acquire() {
    std::unique_lock<std::mutex> lock(mutex_);
    cv_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
    ++in_flight_;
    auto now = std::chrono::steady_clock::now();
    auto minute_ago = now - std::chrono::minutes(1);
    while (!recent_.empty() && recent_.front() < minute_ago) recent_.pop_front();
    if (int(recent_.size()) >= rpm_) {
      auto wait_until = recent_.front() + std::chrono::minutes(1);
      lock.unlock();
      std::this_thread::sleep_until(wait_until);
      lock.lock();
    }
    recent_.push_back(std::chrono::steady_clock::now());
  }

  void release() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      --in_flight_;
    }
    cv_.notify_one();
  }

 private:
  int max_in_flight_;
  int rpm_;
  int in_flight_ = 0;
  std::deque<std::chrono::steady_clock::time_point> recent_;
  std::mutex mutex_;
  std::condition_variable cv_;
};

bool transient_status(int status) { return status == 429 || (status >= 500 && status < 600); }

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport(const std::string& base_url) {
  return std::make_unique<HttplibTransport>(base_url);
}

struct LiveBackend::Impl {
  std::unique_ptr<HttpTransport> transport;
  EndpointOptions options;
  Throttle throttle;

  Impl(std::unique_ptr<HttpTransport> t, EndpointOptions o)
      : transport(std::move(t)), options(std::move(o)),
        throttle(options.max_in_flight, options.requests_per_minute) {}
};

LiveBackend::LiveBackend(std::unique_ptr<HttpTransport> transport, EndpointOptions options)
    : impl_(std::make_unique<Impl>(std::move(transport), std::move(options))) {}

LiveBackend::~LiveBackend() = default;

LlmExchange LiveBackend::complete_raw(const LlmRequest& request) {
  json body;
  body["model"] = request.model_id;
  body["messages"] = json::array();
  for (const auto& m : request.bundle.messages) {
    body["messages"].push_back({{"role", prompts::to_string(m.role)}, {"content", m.content}});
  }
  body["temperature"] = request.bundle.decoding.temperature;
  body["max_tokens"] = request.bundle.decoding.max_tokens;
  if (!request.bundle.decoding.stop.empty()) body["stop"] = request.bundle.decoding.stop;

  std::vector<std::pair<std::string, std::string>> headers;
  if (!impl_->options.credential.empty()) {
    headers.emplace_back("Authorization", "Bearer " + impl_->options.credential);
    headers.emplace_back("api-key", impl_->options.credential);
  }

  const int attempts = std::max(impl_->options.max_retries, 0) + 1;
  std::string last_failure;
  auto started = std::chrono::steady_clock::now();

  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      long delay = std::min<long>(impl_->options.backoff_base_ms << (attempt - 1),
                                  impl_->options.backoff_cap_ms);
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
    impl_->throttle.acquire();
    HttpResponse response;
    try {
      response = impl_->transport->post_json(impl_->options.path, body.dump(), headers);
    } catch (const Error& e) {
      impl_->throttle.release();
      last_failure = e.what();
      continue;  // connection-level failure, retry
    }
    impl_->throttle.release();

    if (response.status == 401 || response.status == 403) {
      throw Error("[auth] endpoint rejected credentials (HTTP " + std::to_string(response.status) + ")");
    }
    if (transient_status(response.status)) {
      last_failure = "HTTP " + std::to_string(response.status);
      if (response.status == 429 && attempt + 1 == attempts) {
        throw Error("[quota] rate limited after " + std::to_string(attempts) + " attempts");
      }
      continue;
    }
    if (response.status < 200 || response.status >= 300) {
      // Content errors are never retried.
      throw Error("[content] HTTP " + std::to_string(response.status) + ": " + response.body);
    }

    json parsed;
    try {
      parsed = json::parse(response.body);
    } catch (const json::exception& e) {
      throw Error(std::string("[content] malformed response body: ") + e.what());
    }
    try {
      LlmExchange exchange;
      exchange.request = request;
      exchange.response_text =
          parsed.at("choices").at(0).at("message").at("content").get<std::string>();
      if (parsed.contains("usage")) {
        exchange.prompt_tokens = parsed["usage"].value("prompt_tokens", 0L);
        exchange.completion_tokens = parsed["usage"].value("completion_tokens", 0L);
      }
      exchange.source = Source::Live;
      exchange.timestamp = utc_now();
      exchange.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - started)
                                .count();
      exchange.key = cache_key(request);
      return exchange;
    } catch (const json::exception& e) {
      throw Error(std::string("[content] response missing choices/message: ") + e.what());
    }
  }
  throw Error("[transport] giving up after " + std::to_string(attempts) +
              " attempts; last failure: " + last_failure);
}

// ---------------------------------------------------------------------------
// StubBackend
// ---------------------------------------------------------------------------

StubBackend::StubBackend(std::vector<Rule> rules, std::string default_response)
    : rules_(std::move(rules)), default_response_(std::move(default_response)) {}

std::unique_ptr<StubBackend> StubBackend::load(const std::filesystem::path& script_path) {
  json j = json::parse(util::read_file(script_path));
  std::vector<Rule> rules;
  for (const auto& rule : j.value("rules", json::array())) {
    Rule r;
    for (const auto& c : rule.at("contains")) r.contains.push_back(c.get<std::string>());
    r.system_contains = rule.value("system_contains", "");
    r.response = rule.at("response").get<std::string>();
    rules.push_back(std::move(r));
  }
  return std::make_unique<StubBackend>(std::move(rules),
                                       j.value("default_response", std::string("unknown")));
}

LlmExchange StubBackend::complete_raw(const LlmRequest& request) {
  std::string last_user;
  std::string system;
  for (const auto& m : request.bundle.messages) {
    if (m.role == prompts::Role::User) last_user = m.content;
    if (m.role == prompts::Role::System) system = m.content;
  }
  const std::string* response = &default_response_;
  for (const auto& rule : rules_) {
    if (!rule.system_contains.empty() && !util::contains(system, rule.system_contains)) continue;
    bool all = true;
    for (const auto& needle : rule.contains) {
      if (!util::contains(last_user, needle)) {
        all = false;
        break;
      }
    }
    if (all) {
      response = &rule.response;
      break;
    }
  }
  LlmExchange exchange;
  exchange.request = request;
  exchange.response_text = *response;
  std::size_t prompt_chars = 0;
  for (const auto& m : request.bundle.messages) prompt_chars += m.content.size();
  exchange.prompt_tokens = estimate_tokens(prompt_chars);
  exchange.completion_tokens = estimate_tokens(response->size());
  exchange.source = Source::Stub;
  exchange.key = cache_key(request);
  return exchange;
}

// ---------------------------------------------------------------------------
// Completer
// ---------------------------------------------------------------------------

Completer::Completer(std::shared_ptr<Backend> backend, Policy policy,
                     std::shared_ptr<CacheStore> store)
    : backend_(std::move(backend)), policy_(policy), store_(std::move(store)) {
  if (policy_ == Policy::ReplayOnly && !store_) {
    throw Error("replay-only policy requires a fixture store");
  }
  if (policy_ != Policy::ReplayOnly && !backend_) {
    throw Error("live/cache policies require a backend");
  }
}

LlmExchange Completer::complete(const LlmRequest& request, const std::string& scope) {
  std::string key = cache_key(request);

  if (policy_ == Policy::ReplayOnly) {
    auto record = store_->lookup(request.model_id, scope, key);
    if (!record) {
      throw FixtureMissingError("fixture missing for key " + key + " (model " + request.model_id +
                                ", scope " + scope + ")");
    }
    LlmExchange exchange;
    exchange.request = request;
    exchange.response_text = record->response;
    exchange.prompt_tokens = record->prompt_tokens;
    exchange.completion_tokens = record->completion_tokens;
    exchange.source = Source::Replay;
    exchange.key = key;
    return exchange;
  }

  if (policy_ == Policy::CacheFirst && store_) {
    auto record = store_->lookup(request.model_id, scope, key);
    if (record) {
      LlmExchange exchange;
      exchange.request = request;
      exchange.response_text = record->response;
      exchange.prompt_tokens = record->prompt_tokens;
      exchange.completion_tokens = record->completion_tokens;
      exchange.source = Source::Cache;
      exchange.key = key;
      return exchange;
    }
  }

  LlmExchange exchange = backend_->complete_raw(request);
  exchange.key = key;
  if (policy_ == Policy::CacheFirst && store_) {
    store_->append(request.model_id, scope,
                   {key, request_digest(request), exchange.response_text, exchange.prompt_tokens,
                    exchange.completion_tokens});
  }
  return exchange;
}

}  // namespace codeprompt::llm
