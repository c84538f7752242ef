#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "robulink/modelclient/transport.hpp"
#include "robulink/modelclient/exchange.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace robulink {

using nlohmann::json;

Endpoint endpoint_from_json(const json& j) {
    for (const char* banned : {"api_key", "key", "token", "credential", "password"}) {
        if (j.contains(banned)) {
            throw std::invalid_argument(std::string("endpoint config must not embed credentials ('") + banned +
                                        "'); name an environment variable in 'credential_env'");
        }
    }
    Endpoint e;
    e.name = j.at("name").get<std::string>();
    const std::string kind = j.value("kind", "mock");
    if (kind == "mock") {
        e.kind = EndpointKind::Mock;
    } else if (kind == "openai" || kind == "openai-chat") {
        e.kind = EndpointKind::OpenAiChat;
    } else {
        throw std::invalid_argument("endpoint '" + e.name + "': unknown kind '" + kind + "'");
    }
    e.base_url = j.value("base_url", "");
    e.model = j.value("model", e.name);
    e.credential_env = j.value("credential_env", "");
    e.timeout_s = j.value("timeout_s", 60.0);
    e.max_retries = j.value("max_retries", 3);
    e.max_in_flight = j.value("max_in_flight", 4);
    e.backoff_initial_s = j.value("backoff_initial_s", 1.0);
    if (j.contains("temperature") && !j.at("temperature").is_null()) {
        e.temperature = j.at("temperature").get<double>();
    }
    if (j.contains("mock")) {
        e.mock = j.at("mock");
    }
    if (e.max_in_flight < 1 || e.max_retries < 0 || e.timeout_s <= 0) {
        throw std::invalid_argument("endpoint '" + e.name + "': invalid limits");
    }
    if (e.is_network() && e.base_url.empty()) {
        throw std::invalid_argument("endpoint '" + e.name + "': base_url is required");
    }
    return e;
}

json endpoint_to_json(const Endpoint& e) {
    json j = {{"name", e.name},
              {"kind", e.kind == EndpointKind::Mock ? "mock" : "openai"},
              {"model", e.model},
              {"timeout_s", e.timeout_s},
              {"max_retries", e.max_retries},
              {"max_in_flight", e.max_in_flight},
              {"backoff_initial_s", e.backoff_initial_s}};
    if (!e.base_url.empty()) j["base_url"] = e.base_url;
    if (!e.credential_env.empty()) j["credential_env"] = e.credential_env;
    if (e.temperature) j["temperature"] = *e.temperature;
    if (!e.mock.is_null()) j["mock"] = e.mock;
    return j;
}

// --- mock -------------------------------------------------------------------

std::shared_ptr<MockTransport> MockTransport::from_json(const json& j) {
    auto t = std::make_shared<MockTransport>();
    if (j.is_null()) {
        return t;
    }
    if (const auto it = j.find("responses"); it != j.end()) {
        for (const auto& [key, value] : it->items()) {
            if (const auto at = key.find('@'); at != std::string::npos) {
                t->set_override(key.substr(0, at), key.substr(at + 1), value.get<std::string>());
            } else if (value.is_string()) {
                t->set_answer(key, {value.get<std::string>(), value.get<std::string>()});
            } else {
                t->set_answer(key, {value.at("reference").get<std::string>(), value.at("distorted").get<std::string>()});
            }
        }
    }
    if (j.contains("default")) {
        t->set_default(j.at("default").get<std::string>());
    }
    t->set_delay(std::chrono::milliseconds(j.value("delay_ms", 0)));
    return t;
}

void MockTransport::set_answer(const std::string& sample_id, Answer a) {
    std::lock_guard lock(mu_);
    answers_[sample_id] = std::move(a);
}

void MockTransport::set_override(const std::string& sample_id, const std::string& corruption_key, std::string text) {
    std::lock_guard lock(mu_);
    overrides_[sample_id + "@" + corruption_key] = std::move(text);
}

void MockTransport::set_default(std::string text) {
    std::lock_guard lock(mu_);
    default_ = std::move(text);
}

void MockTransport::fail_next(int n, bool auth) {
    std::lock_guard lock(mu_);
    failures_left_ = n;
    fail_auth_ = auth;
}

std::string MockTransport::send(const Endpoint& endpoint, const ChatRequest& request) {
    ++calls_;
    const int now = ++in_flight_;
    for (int seen = max_seen_.load(); now > seen && !max_seen_.compare_exchange_weak(seen, now);) {
    }
    struct Leave {
        std::atomic<int>& n;
        ~Leave() { --n; }
    } leave{in_flight_};
    if (delay_.count() > 0) {
        std::this_thread::sleep_for(delay_);
    }
    std::lock_guard lock(mu_);
    if (failures_left_ > 0) {
        --failures_left_;
        if (fail_auth_) {
            throw AuthError(endpoint.name + ": mock authentication failure");
        }
        throw TransportError(endpoint.name + ": mock transient failure", true, 503);
    }
    if (const auto it = overrides_.find(request.sample_id + "@" + request.corruption_key); it != overrides_.end()) {
        return it->second;
    }
    if (const auto it = answers_.find(request.sample_id); it != answers_.end()) {
        return request.corruption_key == kReferenceKey ? it->second.reference : it->second.distorted;
    }
    if (default_) {
        return *default_;
    }
    throw TransportError(endpoint.name + ": mock has no response for sample '" + request.sample_id + "'", false, 404);
}

// --- http -------------------------------------------------------------------

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

json chat_request_body(const Endpoint& endpoint, const ChatRequest& request) {
    json content = json::array({{{"type", "text"}, {"text", request.prompt}}});
    if (!request.image_png.empty()) {
        content.push_back({{"type", "image_url"},
                           {"image_url", {{"url", "data:image/png;base64," + base64_encode(request.image_png)}}}});
    }
    json body = {{"model", endpoint.model.empty() ? endpoint.name : endpoint.model},
                 {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
    if (endpoint.temperature) {
        body["temperature"] = *endpoint.temperature;
    }
    return body;
}

std::string parse_chat_response(const std::string& body) {
    try {
        const json j = json::parse(body);
        const json& content = j.at("choices").at(0).at("message").at("content");
        if (content.is_string()) {
            return content.get<std::string>();
        }
        std::string text;
        for (const auto& part : content) {
            if (part.value("type", "") == "text") {
                text += part.value("text", "");
            }
        }
        return text;
    } catch (const json::exception& e) {
        throw TransportError(std::string("malformed chat response: ") + e.what(), false);
    }
}

std::string HttpTransport::send(const Endpoint& endpoint, const ChatRequest& request) {
    // Split "scheme://host[:port][/prefix]".
    const std::string& url = endpoint.base_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw TransportError(endpoint.name + ": base_url needs a scheme", false);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') {
        prefix.pop_back();
    }

    httplib::Client client(origin);
    const auto secs = static_cast<time_t>(endpoint.timeout_s);
    const auto usecs = static_cast<time_t>((endpoint.timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (!endpoint.credential_env.empty()) {
        const char* key = std::getenv(endpoint.credential_env.c_str());
        if (!key || !*key) {
            throw AuthError(endpoint.name + ": environment variable " + endpoint.credential_env + " is not set", 0);
        }
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    const auto res = client.Post(prefix + "/chat/completions", headers, chat_request_body(endpoint, request).dump(),
                                 "application/json");
    if (!res) {
        throw TransportError(endpoint.name + ": " + httplib::to_string(res.error()), true);
    }
    if (res->status == 401 || res->status == 403) {
        throw AuthError(endpoint.name + ": HTTP " + std::to_string(res->status), res->status);
    }
    if (res->status == 429 || res->status == 408 || res->status >= 500) {
        throw TransportError(endpoint.name + ": HTTP " + std::to_string(res->status), true, res->status);
    }
    if (res->status < 200 || res->status >= 300) {
        throw TransportError(endpoint.name + ": HTTP " + std::to_string(res->status), false, res->status);
    }
    return parse_chat_response(res->body);
}

std::shared_ptr<Transport> make_transport(const Endpoint& endpoint) {
    if (endpoint.kind == EndpointKind::Mock) {
        return MockTransport::from_json(endpoint.mock);
    }
    return std::make_shared<HttpTransport>();
}

}  // namespace robulink
