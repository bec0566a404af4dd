#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathseeker {

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;

    bool operator==(const ChatMessage& other) const = default;
};

struct Sampling {
    double temperature = 0.0;
    std::optional<std::uint64_t> seed;

    bool operator==(const Sampling& other) const = default;
};

/// Transport or protocol failure talking to a model. Callers mark the task
/// as errored instead of guessing an answer.
class ChatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Minimal chat-completion contract: an ordered list of role-tagged
/// messages in, one model text out. Implementations must be safe to call
/// from multiple threads.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual std::string complete(const std::vector<ChatMessage>& messages,
                                 const Sampling& sampling) = 0;
};

/// Replays a fixed list of responses in order, recording every request.
/// Exhausting the script throws ChatError.
class ScriptedClient : public ChatClient {
public:
    explicit ScriptedClient(std::vector<std::string> responses);

    std::string complete(const std::vector<ChatMessage>& messages,
                         const Sampling& sampling) override;

    std::size_t consumed() const;
    const std::vector<std::vector<ChatMessage>>& requests() const { return requests_; }

private:
    std::vector<std::string> responses_;
    std::vector<std::vector<ChatMessage>> requests_;
    std::size_t next_ = 0;
    mutable std::mutex mutex_;
};

/// Adapts a function into a client; handy for tests that need to inspect
/// the prompt before answering.
class CallbackClient : public ChatClient {
public:
    using Fn = std::function<std::string(const std::vector<ChatMessage>&, const Sampling&)>;

    explicit CallbackClient(Fn fn) : fn_(std::move(fn)) {}

    std::string complete(const std::vector<ChatMessage>& messages,
                         const Sampling& sampling) override {
        return fn_(messages, sampling);
    }

private:
    Fn fn_;
};

struct HttpEndpoint {
    std::string base_url;  // e.g. "http://127.0.0.1:8089"
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string api_key;          // empty -> no Authorization header
    unsigned max_retries = 3;     // additional attempts after the first
    unsigned backoff_base_ms = 250;
    unsigned read_timeout_s = 120;
};

/// Talks to any OpenAI-style chat-completion endpoint. Retries transport
/// failures and 429/5xx responses with exponential backoff, then throws
/// ChatError. Each call uses its own connection, so instances are
/// thread-safe.
class HttpChatClient : public ChatClient {
public:
    explicit HttpChatClient(HttpEndpoint endpoint);

    std::string complete(const std::vector<ChatMessage>& messages,
                         const Sampling& sampling) override;

    const HttpEndpoint& endpoint() const { return endpoint_; }

private:
    HttpEndpoint endpoint_;
};

/// Disk-backed response cache keyed by a hash of the full request. Hits
/// never touch the upstream client; misses are fetched and stored with an
/// atomic per-entry write (temp file + rename). In replay mode a miss is a
/// ChatError instead of an upstream call, which makes cached runs exactly
/// reproducible offline.
class CachingClient : public ChatClient {
public:
    CachingClient(std::shared_ptr<ChatClient> upstream, std::string cache_dir,
                  bool replay_only = false);

    std::string complete(const std::vector<ChatMessage>& messages,
                         const Sampling& sampling) override;

    /// Stable cache key: 16 hex digits of a 64-bit FNV-1a over the
    /// canonical request serialization.
    static std::string request_key(const std::vector<ChatMessage>& messages,
                                   const Sampling& sampling);

    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

private:
    std::shared_ptr<ChatClient> upstream_;
    std::string cache_dir_;
    bool replay_only_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
    std::mutex mutex_;
};

}  // namespace pathseeker
