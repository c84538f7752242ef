/**
 * @file transport.hpp
 * @brief Endpoint description and the wire layer below ModelClient.
 */
#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace robulink {

enum class EndpointKind { Mock, OpenAiChat };

struct Endpoint {
    std::string name;
    EndpointKind kind = EndpointKind::Mock;
    /// e.g. "https://api.openai.com/v1"; unused for mock endpoints.
    std::string base_url;
    /// Remote model identifier; defaults to `name`.
    std::string model;
    /// Name of the environment variable holding the API key. The key itself
    /// is read at call time and never stored.
    std::string credential_env;
    double timeout_s = 60.0;
    int max_retries = 3;
    int max_in_flight = 4;
    /// Only sent when set.
    std::optional<double> temperature;
    double backoff_initial_s = 1.0;
    /// Mock configuration (see MockTransport::from_json); ignored otherwise.
    nlohmann::json mock;

    bool is_network() const noexcept { return kind != EndpointKind::Mock; }
};

/// Rejects inline credentials ("api_key", "key", "token", "credential").
Endpoint endpoint_from_json(const nlohmann::json& j);
/// Never includes credentials.
nlohmann::json endpoint_to_json(const Endpoint& e);

struct ChatRequest {
    std::string sample_id;
    std::string corruption_key;
    std::string prompt;
    /// PNG bytes; empty for text-only requests.
    std::vector<std::uint8_t> image_png;
};

class TransportError : public std::runtime_error {
public:
    TransportError(const std::string& what, bool transient, int status = 0)
        : std::runtime_error(what), transient_(transient), status_(status) {}
    bool transient() const noexcept { return transient_; }
    int status() const noexcept { return status_; }

private:
    bool transient_;
    int status_;
};

class AuthError : public TransportError {
public:
    explicit AuthError(const std::string& what, int status = 401) : TransportError(what, false, status) {}
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual std::string send(const Endpoint& endpoint, const ChatRequest& request) = 0;
    virtual bool is_network() const = 0;
};

/// Deterministic offline model. Responses are looked up in order:
/// "<sample>@<corruption_key>" override, then the per-sample reference or
/// distorted answer, then the default text.
class MockTransport final : public Transport {
public:
    struct Answer {
        std::string reference;
        std::string distorted;
    };

    MockTransport() = default;

    /// {"responses": {"s1": {"reference": "A", "distorted": "B"}, "s2": "C",
    ///                "s1@9-white_noise@low": "D"},
    ///  "default": "...", "delay_ms": 0}
    static std::shared_ptr<MockTransport> from_json(const nlohmann::json& j);

    void set_answer(const std::string& sample_id, Answer a);
    void set_override(const std::string& sample_id, const std::string& corruption_key, std::string text);
    void set_default(std::string text);
    /// Sleep inside send, to make concurrency observable.
    void set_delay(std::chrono::milliseconds d) { delay_ = d; }
    /// The next `n` calls fail with a transient (or auth) error.
    void fail_next(int n, bool auth = false);

    std::string send(const Endpoint& endpoint, const ChatRequest& request) override;
    bool is_network() const override { return false; }

    std::size_t calls() const noexcept { return calls_.load(); }
    int max_in_flight_seen() const noexcept { return max_seen_.load(); }

private:
    std::mutex mu_;
    std::map<std::string, Answer> answers_;
    std::map<std::string, std::string> overrides_;
    std::optional<std::string> default_;
    std::chrono::milliseconds delay_{0};
    int failures_left_ = 0;
    bool fail_auth_ = false;
    std::atomic<std::size_t> calls_{0};
    std::atomic<int> in_flight_{0};
    std::atomic<int> max_seen_{0};
};

/// OpenAI-style chat/completions over HTTPS. The image travels as a base64
/// PNG data URL next to the prompt in a single user message.
class HttpTransport final : public Transport {
public:
    std::string send(const Endpoint& endpoint, const ChatRequest& request) override;
    bool is_network() const override { return true; }
};

/// Request body as sent by HttpTransport (exposed for tests).
nlohmann::json chat_request_body(const Endpoint& endpoint, const ChatRequest& request);
/// Extracts choices[0].message.content; throws TransportError (non-transient).
std::string parse_chat_response(const std::string& body);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);

/// Transport matching the endpoint kind.
std::shared_ptr<Transport> make_transport(const Endpoint& endpoint);

}  // namespace robulink
