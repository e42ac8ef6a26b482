#pragma once

// Task-scorer backends: a deterministic mock, a distance-field oracle, and a chat-completion
// client for an OpenAI-compatible endpoint.

#include <array>
#include <chrono>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gridllm/grounded.hpp"

namespace gridllm {

/// Softmax-style preference for moves that shrink the Manhattan distance to the goal:
/// score_k = exp(-(d_k - min_j d_j) / tau).
class MockScorer final : public TaskScorer {
public:
    explicit MockScorer(double tau = 0.5);
    std::array<double, 4> score(const TaskScorerQuery& query) override;
    std::string name() const override { return "mock"; }

private:
    double tau_;
};

std::array<double, 4> mock_score(const TaskScorerQuery& query, double tau);

/// 1 for each candidate whose Four-connected cost-to-goal is one less than the current
/// state's, 0 otherwise; all zeros when the state cannot reach the goal.
class OracleScorer final : public TaskScorer {
public:
    std::array<double, 4> score(const TaskScorerQuery& query) override;
    std::string name() const override { return "oracle"; }
};

std::array<double, 4> oracle_score(const TaskScorerQuery& query);

struct ChatEndpointConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string model_name = "gpt-3.5-turbo";
    std::string api_key_env = "API_KEY";
    double timeout_s = 30.0;
    int max_retries = 3;
    double temperature = 0.0;

    void validate() const;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Transport failure that never produced an HTTP status.
class TransportError : public Error {
public:
    TransportError(const std::string& what, bool timed_out) : Error(what), timed_out_(timed_out) {}
    bool timed_out() const noexcept { return timed_out_; }

private:
    bool timed_out_;
};

/// Carries one POST of a JSON body to `{base_url}{path}`.
class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual HttpResponse post(const std::string& path, const std::string& body, const std::string& bearer_token,
                              std::chrono::duration<double> timeout) = 0;
};

/// cpp-httplib backed transport.
class HttpTransport final : public ChatTransport {
public:
    explicit HttpTransport(std::string base_url);
    HttpResponse post(const std::string& path, const std::string& body, const std::string& bearer_token,
                      std::chrono::duration<double> timeout) override;

private:
    std::string base_url_;
};

/// Stable 64-bit FNV-1a of the request body, rendered as 16 hex digits.
std::string request_hash(const std::string& body);

/// Line-delimited cassette: one JSON object per line
///   {"request_hash": "...", "status": 200, "response_body": "..."}
/// Records sharing a hash are replayed in file order, which scripts retry sequences.
class CassetteTransport final : public ChatTransport {
public:
    explicit CassetteTransport(const std::string& path);
    static std::shared_ptr<CassetteTransport> from_text(const std::string& text);

    HttpResponse post(const std::string& path, const std::string& body, const std::string& bearer_token,
                      std::chrono::duration<double> timeout) override;

private:
    CassetteTransport() = default;
    void load(const std::string& text);

    std::mutex mu_;
    std::vector<std::pair<std::string, std::deque<HttpResponse>>> records_;
};

/// Forwards to an inner transport and appends every exchange to a cassette file.
class RecordingTransport final : public ChatTransport {
public:
    RecordingTransport(std::unique_ptr<ChatTransport> inner, std::string path);
    HttpResponse post(const std::string& path, const std::string& body, const std::string& bearer_token,
                      std::chrono::duration<double> timeout) override;

private:
    std::unique_ptr<ChatTransport> inner_;
    std::string path_;
    std::mutex mu_;
};

class RemoteError : public Error {
public:
    enum class Kind { Timeout, AuthMissing, RetriesExhausted, HttpStatus, BadResponse };
    RemoteError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

struct ChatMessage {
    std::string role;
    std::string content;
};

/// Request body for POST {base_url}/chat/completions.
std::string build_chat_request(const ChatEndpointConfig& cfg, const std::vector<ChatMessage>& messages);

/// choices[0].message.content of a chat-completion response body.
std::string extract_chat_content(const std::string& response_body);

/// Issues a chat completion with exponential backoff (1 s, 2 s, 4 s, ...) on transport errors,
/// 429 and 5xx. The API key is read from the environment variable named in the config unless
/// an explicit key is supplied.
class ChatClient {
public:
    ChatClient(ChatEndpointConfig cfg, std::shared_ptr<ChatTransport> transport, Sleeper sleeper = {});

    std::string complete(const std::vector<ChatMessage>& messages);

    void set_api_key(std::string key) { api_key_ = std::move(key); }
    /// Backoff delays actually slept, in order.
    const std::vector<std::chrono::milliseconds>& backoff_log() const noexcept { return backoff_log_; }
    int attempts() const noexcept { return attempts_; }
    const ChatEndpointConfig& config() const noexcept { return cfg_; }

private:
    std::string resolve_key() const;

    ChatEndpointConfig cfg_;
    std::shared_ptr<ChatTransport> transport_;
    Sleeper sleeper_;
    std::optional<std::string> api_key_;
    std::vector<std::chrono::milliseconds> backoff_log_;
    int attempts_ = 0;
};

/// The language-model scorer: renders the step prompt, asks the endpoint, parses `scores:`.
class RemoteScorer final : public TaskScorer {
public:
    explicit RemoteScorer(ChatClient client);
    std::array<double, 4> score(const TaskScorerQuery& query) override;
    std::string name() const override { return "remote"; }
    ChatClient& client() noexcept { return client_; }

private:
    ChatClient client_;
};

/// One-shot full-path source: given the map, start and instruction, returns the raw reply
/// text holding a `path:` line.
class PathReplySource {
public:
    virtual ~PathReplySource() = default;
    virtual std::string propose(const OccupancyGrid& grid, GridPose start, const Instruction& instruction) = 0;
    virtual std::string name() const = 0;
};

/// Ignores obstacles: walks along x first, then along y.
class MockPathSource final : public PathReplySource {
public:
    std::string propose(const OccupancyGrid& grid, GridPose start, const Instruction& instruction) override;
    std::string name() const override { return "mock"; }
};

/// Replies with the Four-connected A* path.
class OraclePathSource final : public PathReplySource {
public:
    std::string propose(const OccupancyGrid& grid, GridPose start, const Instruction& instruction) override;
    std::string name() const override { return "oracle"; }
};

class RemotePathSource final : public PathReplySource {
public:
    explicit RemotePathSource(ChatClient client);
    std::string propose(const OccupancyGrid& grid, GridPose start, const Instruction& instruction) override;
    std::string name() const override { return "remote"; }

private:
    ChatClient client_;
};

}  // namespace gridllm
