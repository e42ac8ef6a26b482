#include "gridllm/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

namespace gridllm {

using json = nlohmann::json;

// ---------------------------------------------------------------------------------------------
// Offline scorers

MockScorer::MockScorer(double tau) : tau_(tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidParams("mock scorer tau must be > 0");
}

std::array<double, 4> MockScorer::score(const TaskScorerQuery& query) {
    return mock_score(query, tau_);
}

std::array<double, 4> mock_score(const TaskScorerQuery& query, double tau) {
    if (!(tau > 0.0)) throw InvalidParams("mock scorer tau must be > 0");
    const GridPose goal = query.instruction->goal;
    std::array<int, 4> d{};
    int nearest = std::numeric_limits<int>::max();
    for (std::size_t k = 0; k < 4; ++k) {
        d[k] = manhattan(query.candidates[k], goal);
        nearest = std::min(nearest, d[k]);
    }
    std::array<double, 4> scores{};
    for (std::size_t k = 0; k < 4; ++k) scores[k] = std::exp(-static_cast<double>(d[k] - nearest) / tau);
    return scores;
}

std::array<double, 4> OracleScorer::score(const TaskScorerQuery& query) {
    return oracle_score(query);
}

std::array<double, 4> oracle_score(const TaskScorerQuery& query) {
    const OccupancyGrid& grid = *query.grid;
    std::array<double, 4> scores{};
    if (!grid.in_bounds(query.state) || !grid.in_bounds(query.instruction->goal)) return scores;
    const auto field = distance_field(grid, query.instruction->goal);
    const int here = field[grid.index(query.state)];
    if (here <= 0) return scores;
    for (std::size_t k = 0; k < 4; ++k) {
        const GridPose c = query.candidates[k];
        if (grid.in_bounds(c) && field[grid.index(c)] == here - 1) scores[k] = 1.0;
    }
    return scores;
}

// ---------------------------------------------------------------------------------------------
// Transport

void ChatEndpointConfig::validate() const {
    if (!(timeout_s > 0.0)) throw InvalidParams("chat endpoint timeout must be > 0");
    if (max_retries < 0) throw InvalidParams("chat endpoint max_retries must be >= 0");
    if (base_url.empty()) throw InvalidParams("chat endpoint base_url must not be empty");
    if (model_name.empty()) throw InvalidParams("chat endpoint model_name must not be empty");
}

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path prefix without trailing slash
};

SplitUrl split_url(const std::string& url) {
    const std::size_t scheme = url.find("://");
    const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
    const std::size_t slash = url.find('/', host_start);
    SplitUrl out{url.substr(0, slash), slash == std::string::npos ? "" : url.substr(slash)};
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    return out;
}

}  // namespace

HttpTransport::HttpTransport(std::string base_url) : base_url_(std::move(base_url)) {}

HttpResponse HttpTransport::post(const std::string& path, const std::string& body, const std::string& bearer_token,
                                 std::chrono::duration<double> timeout) {
    const SplitUrl url = split_url(base_url_);
    httplib::Client cli(url.origin);
    const auto t = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
    const auto sec = static_cast<time_t>(t.count() / 1000000);
    const auto usec = static_cast<time_t>(t.count() % 1000000);
    cli.set_connection_timeout(sec, usec);
    cli.set_read_timeout(sec, usec);
    cli.set_write_timeout(sec, usec);
    httplib::Headers headers{{"Authorization", "Bearer " + bearer_token}};
    auto res = cli.Post(url.prefix + path, headers, body, "application/json");
    if (!res) {
        const auto err = res.error();
        throw TransportError(fmt::format("HTTP transport error: {}", httplib::to_string(err)),
                             err == httplib::Error::Read || err == httplib::Error::Write ||
                                 err == httplib::Error::ConnectionTimeout);
    }
    return {res->status, res->body};
}

std::string request_hash(const std::string& body) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : body) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return fmt::format("{:016x}", h);
}

CassetteTransport::CassetteTransport(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open cassette '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    load(ss.str());
}

std::shared_ptr<CassetteTransport> CassetteTransport::from_text(const std::string& text) {
    std::shared_ptr<CassetteTransport> t(new CassetteTransport());
    t->load(text);
    return t;
}

void CassetteTransport::load(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(fmt::format("cassette line {}: {}", line_no, e.what()));
        }
        if (!rec.contains("request_hash") || !rec.contains("response_body")) {
            throw Error(fmt::format("cassette line {}: needs request_hash and response_body", line_no));
        }
        const std::string hash = rec["request_hash"].get<std::string>();
        HttpResponse resp{rec.value("status", 200), rec["response_body"].get<std::string>()};
        auto it = std::find_if(records_.begin(), records_.end(), [&](const auto& r) { return r.first == hash; });
        if (it == records_.end()) {
            records_.push_back({hash, {}});
            it = std::prev(records_.end());
        }
        it->second.push_back(std::move(resp));
    }
}

HttpResponse CassetteTransport::post(const std::string&, const std::string& body, const std::string&,
                                     std::chrono::duration<double>) {
    const std::string hash = request_hash(body);
    std::lock_guard lock(mu_);
    auto it = std::find_if(records_.begin(), records_.end(), [&](const auto& r) { return r.first == hash; });
    if (it == records_.end() || it->second.empty()) {
        throw TransportError(fmt::format("cassette has no recorded response for request {}", hash), false);
    }
    HttpResponse resp = it->second.front();
    // The last recorded response for a request is sticky so repeated identical queries replay.
    if (it->second.size() > 1) it->second.pop_front();
    return resp;
}

RecordingTransport::RecordingTransport(std::unique_ptr<ChatTransport> inner, std::string path)
    : inner_(std::move(inner)), path_(std::move(path)) {}

HttpResponse RecordingTransport::post(const std::string& path, const std::string& body,
                                      const std::string& bearer_token, std::chrono::duration<double> timeout) {
    HttpResponse resp = inner_->post(path, body, bearer_token, timeout);
    std::lock_guard lock(mu_);
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    out << json{{"request_hash", request_hash(body)}, {"status", resp.status}, {"response_body", resp.body}}.dump()
        << '\n';
    return resp;
}

// ---------------------------------------------------------------------------------------------
// Chat client

std::string build_chat_request(const ChatEndpointConfig& cfg, const std::vector<ChatMessage>& messages) {
    json msgs = json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    // Insertion-ordered keys keep the body, and with it the cassette hash, byte-stable.
    nlohmann::ordered_json body;
    body["model"] = cfg.model_name;
    body["temperature"] = cfg.temperature;
    body["messages"] = nlohmann::ordered_json::parse(msgs.dump());
    return body.dump();
}

std::string extract_chat_content(const std::string& response_body) {
    try {
        const json body = json::parse(response_body);
        return body.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw RemoteError(RemoteError::Kind::BadResponse,
                          fmt::format("unexpected chat-completion response: {}", e.what()));
    }
}

ChatClient::ChatClient(ChatEndpointConfig cfg, std::shared_ptr<ChatTransport> transport, Sleeper sleeper)
    : cfg_(std::move(cfg)), transport_(std::move(transport)), sleeper_(std::move(sleeper)) {
    cfg_.validate();
    if (!transport_) transport_ = std::make_shared<HttpTransport>(cfg_.base_url);
    if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string ChatClient::resolve_key() const {
    if (api_key_) return *api_key_;
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
        throw RemoteError(RemoteError::Kind::AuthMissing,
                          fmt::format("environment variable {} is not set", cfg_.api_key_env));
    }
    return key;
}

std::string ChatClient::complete(const std::vector<ChatMessage>& messages) {
    const std::string key = resolve_key();
    const std::string body = build_chat_request(cfg_, messages);
    const std::chrono::duration<double> timeout(cfg_.timeout_s);

    std::chrono::milliseconds backoff(1000);
    std::string last_error;
    bool last_timed_out = false;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0) {
            backoff_log_.push_back(backoff);
            sleeper_(backoff);
            backoff *= 2;
        }
        ++attempts_;
        try {
            const HttpResponse resp = transport_->post("/chat/completions", body, key, timeout);
            if (resp.status == 200) return extract_chat_content(resp.body);
            if (resp.status == 429 || resp.status >= 500) {
                last_error = fmt::format("HTTP {}", resp.status);
                last_timed_out = false;
                continue;
            }
            throw RemoteError(RemoteError::Kind::HttpStatus,
                              fmt::format("chat endpoint returned HTTP {}: {}", resp.status, resp.body));
        } catch (const TransportError& e) {
            last_error = e.what();
            last_timed_out = e.timed_out();
        }
    }
    if (last_timed_out) {
        throw RemoteError(RemoteError::Kind::Timeout,
                          fmt::format("chat request timed out after {} attempts", cfg_.max_retries + 1));
    }
    throw RemoteError(RemoteError::Kind::RetriesExhausted,
                      fmt::format("chat request failed after {} attempts: {}", cfg_.max_retries + 1, last_error));
}

RemoteScorer::RemoteScorer(ChatClient client) : client_(std::move(client)) {}

std::array<double, 4> RemoteScorer::score(const TaskScorerQuery& query) {
    const StepPrompt prompt = serialize_step_prompt(*query.grid, query.state, *query.instruction, query.candidates);
    const std::string reply = client_.complete({{"system", prompt.system_text}, {"user", prompt.user_text}});
    return parse_action_scores(reply);
}

// ---------------------------------------------------------------------------------------------
// Full-path sources

std::string MockPathSource::propose(const OccupancyGrid&, GridPose start, const Instruction& instruction) {
    std::vector<GridPose> path{start};
    GridPose cur = start;
    const GridPose goal = instruction.goal;
    while (cur.x != goal.x) {
        cur.x += goal.x > cur.x ? 1 : -1;
        path.push_back(cur);
    }
    while (cur.y != goal.y) {
        cur.y += goal.y > cur.y ? 1 : -1;
        path.push_back(cur);
    }
    return format_path(path) + "\n";
}

std::string OraclePathSource::propose(const OccupancyGrid& grid, GridPose start, const Instruction& instruction) {
    const auto path = astar(grid, start, instruction.goal, Connectivity::Four);
    if (!path) return "no path exists\n";
    return format_path(path->waypoints) + "\n";
}

RemotePathSource::RemotePathSource(ChatClient client) : client_(std::move(client)) {}

std::string RemotePathSource::propose(const OccupancyGrid& grid, GridPose start, const Instruction& instruction) {
    const StepPrompt prompt = serialize_fullpath_prompt(grid, start, instruction);
    return client_.complete({{"system", prompt.system_text}, {"user", prompt.user_text}});
}

}  // namespace gridllm
