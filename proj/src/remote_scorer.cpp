#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "toxconv/errors.hpp"
#include "toxconv/toxicity.hpp"

namespace toxconv {

namespace {

std::optional<double> parse_score(const std::string& body) {
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    if (j.is_number()) return j.get<double>();
    if (j.is_object()) {
        for (const char* key : {"score", "toxicity", "probability"}) {
            auto it = j.find(key);
            if (it != j.end() && it->is_number()) return it->get<double>();
        }
    }
    return std::nullopt;
}

}  // namespace

RemoteScorer::RemoteScorer(RemoteScorerConfig config) : config_(std::move(config)) {
    const std::string& url = config_.endpoint;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw InvalidArgument("scorer endpoint must be an http(s) URL: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (config_.max_in_flight == 0) config_.max_in_flight = 1;
}

RemoteScorerConfig RemoteScorer::config_from_env() {
    RemoteScorerConfig c;
    if (const char* e = std::getenv("TOXCONV_SCORER_ENDPOINT")) c.endpoint = e;
    if (const char* k = std::getenv("TOXCONV_SCORER_KEY")) c.api_key = k;
    if (c.endpoint.empty()) throw InvalidConfig("TOXCONV_SCORER_ENDPOINT is not set");
    return c;
}

std::optional<double> RemoteScorer::score_one(const std::string& text) const {
    httplib::Client client(scheme_host_port_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout).count();
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout).count() % 1000000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    const std::string body = nlohmann::json{{"text", text}}.dump();

    auto backoff = config_.base_backoff;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        auto res = client.Post(path_, headers, body, "application/json");
        if (!res) continue;
        if (res->status == 429 || res->status >= 500) continue;
        if (res->status != 200) return std::nullopt;
        auto s = parse_score(res->body);
        if (s && *s >= 0.0 && *s <= 1.0) return s;
        return std::nullopt;
    }
    return std::nullopt;
}

std::vector<std::optional<double>> RemoteScorer::score_batch(std::span<const std::string> texts) {
    std::vector<std::optional<double>> out(texts.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::min<std::size_t>(config_.max_in_flight, texts.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < texts.size(); i = next++) out[i] = score_one(texts[i]);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace toxconv
