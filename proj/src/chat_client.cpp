#include "pathseeker/chat_client.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace pathseeker {

namespace {

using nlohmann::ordered_json;

ordered_json request_json(const std::vector<ChatMessage>& messages, const Sampling& sampling) {
    ordered_json body;
    body["messages"] = ordered_json::array();
    for (const ChatMessage& m : messages) {
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    }
    body["temperature"] = sampling.temperature;
    if (sampling.seed) body["seed"] = *sampling.seed;
    return body;
}

}  // namespace

ScriptedClient::ScriptedClient(std::vector<std::string> responses)
    : responses_(std::move(responses)) {}

std::string ScriptedClient::complete(const std::vector<ChatMessage>& messages,
                                     const Sampling&) {
    std::lock_guard<std::mutex> lock(mutex_);
    requests_.push_back(messages);
    if (next_ >= responses_.size()) {
        throw ChatError("scripted client exhausted after " + std::to_string(responses_.size()) +
                        " responses");
    }
    return responses_[next_++];
}

std::size_t ScriptedClient::consumed() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return next_;
}

HttpChatClient::HttpChatClient(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    if (endpoint_.base_url.empty()) throw std::invalid_argument("endpoint base_url is empty");
}

std::string HttpChatClient::complete(const std::vector<ChatMessage>& messages,
                                     const Sampling& sampling) {
    ordered_json body = request_json(messages, sampling);
    body["model"] = endpoint_.model;
    const std::string payload = body.dump();

    std::string last_error;
    for (unsigned attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto delay = std::chrono::milliseconds(
                static_cast<std::uint64_t>(endpoint_.backoff_base_ms) << (attempt - 1));
            std::this_thread::sleep_for(delay);
        }

        httplib::Client http(endpoint_.base_url);
        http.set_connection_timeout(10, 0);
        http.set_read_timeout(endpoint_.read_timeout_s, 0);
        httplib::Headers headers;
        if (!endpoint_.api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + endpoint_.api_key);
        }

        auto res = http.Post(endpoint_.path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "upstream status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw ChatError("chat endpoint returned status " + std::to_string(res->status) +
                            ": " + res->body);
        }
        try {
            auto parsed = nlohmann::json::parse(res->body);
            return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ChatError(std::string("malformed chat response: ") + e.what());
        }
    }
    throw ChatError("chat request failed after " + std::to_string(endpoint_.max_retries + 1) +
                    " attempts; last error: " + last_error);
}

std::string CachingClient::request_key(const std::vector<ChatMessage>& messages,
                                       const Sampling& sampling) {
    const std::string canonical = request_json(messages, sampling).dump();
    std::uint64_t hash = 1469598103934665603ull;  // FNV-1a offset basis
    for (unsigned char c : canonical) {
        hash ^= c;
        hash *= 1099511628211ull;  // FNV-1a prime
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

CachingClient::CachingClient(std::shared_ptr<ChatClient> upstream, std::string cache_dir,
                             bool replay_only)
    : upstream_(std::move(upstream)), cache_dir_(std::move(cache_dir)), replay_only_(replay_only) {
    if (!replay_only_ && !upstream_) {
        throw std::invalid_argument("caching client needs an upstream unless replaying");
    }
    std::filesystem::create_directories(cache_dir_);
}

std::string CachingClient::complete(const std::vector<ChatMessage>& messages,
                                    const Sampling& sampling) {
    const std::string key = request_key(messages, sampling);
    const auto entry_path = std::filesystem::path(cache_dir_) / (key + ".json");
    const std::string canonical = request_json(messages, sampling).dump();

    auto read_entry = [&]() -> std::optional<std::string> {
        std::ifstream in(entry_path);
        if (!in) return std::nullopt;
        ordered_json entry;
        try {
            in >> entry;
            // Guard against hash collisions: the stored request must match.
            if (entry.at("request").dump() != canonical) {
                throw ChatError("cache key collision at " + entry_path.string());
            }
            return entry.at("response").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ChatError("corrupt cache entry " + entry_path.string() + ": " + e.what());
        }
    };

    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (auto cached = read_entry()) {
            ++hits_;
            return *cached;
        }
        if (replay_only_) {
            throw ChatError("replay cache miss for key " + key);
        }
        ++misses_;
    }

    const std::string response = upstream_->complete(messages, sampling);

    std::lock_guard<std::mutex> lock(mutex_);
    // Another thread may have stored this key meanwhile; its entry wins so
    // every reader sees one consistent response.
    if (auto cached = read_entry()) return *cached;

    ordered_json entry;
    entry["request"] = ordered_json::parse(canonical);
    entry["response"] = response;

    static std::atomic<std::uint64_t> counter{0};
    const auto tmp_path =
        entry_path.string() + ".tmp" + std::to_string(counter.fetch_add(1)) + "-" +
        std::to_string(std::chrono::steady_clock::now().time_since_epoch().count());
    {
        std::ofstream out(tmp_path);
        if (!out) throw ChatError("cannot write cache entry " + tmp_path);
        out << entry.dump(2) << '\n';
    }
    std::filesystem::rename(tmp_path, entry_path);
    return response;
}

}  // namespace pathseeker
