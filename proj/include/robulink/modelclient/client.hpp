/**
 * @file client.hpp
 * @brief Cached, retrying, bounded-concurrency client for one endpoint.
 */
#pragma once

#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>

#include "robulink/imgcore/image.hpp"
#include "robulink/modelclient/exchange.hpp"
#include "robulink/modelclient/transport.hpp"

namespace robulink {

/// Retries exhausted or a non-retryable failure; carries endpoint and sample context.
class InferenceError : public std::runtime_error {
public:
    InferenceError(const std::string& what, bool auth) : std::runtime_error(what), auth_(auth) {}
    bool auth() const noexcept { return auth_; }

private:
    bool auth_;
};

/// A network call was needed while running offline.
class OfflineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ClientOptions {
    /// Cache hits only for network transports.
    bool offline = false;
    /// Backoff sleeper; tests replace it to avoid waiting.
    std::function<void(double seconds)> sleep;
};

class ModelClient {
public:
    ModelClient(Endpoint endpoint, std::shared_ptr<Transport> transport,
                std::shared_ptr<ExchangeCache> cache = std::make_shared<ExchangeCache>(), ClientOptions options = {});

    /// Cache lookup, then a single-flight, retried call. Text-only when
    /// `image` is null.
    Exchange ask(const ImageBuffer* image, const std::string& prompt, const std::string& sample_id,
                 const std::string& corruption_key);

    /// Cache lookup only.
    std::optional<Exchange> cached(const std::string& prompt, const std::string& sample_id,
                                   const std::string& corruption_key) const {
        return cache_->find({endpoint_.name, sample_id, corruption_key, sha256_hex(prompt)});
    }

    std::string ask_text(const ImageBuffer& image, const std::string& prompt, const std::string& sample_id,
                         const std::string& corruption_key) {
        return ask(&image, prompt, sample_id, corruption_key).response;
    }

    const Endpoint& endpoint() const noexcept { return endpoint_; }
    ExchangeCache& cache() noexcept { return *cache_; }
    /// Calls handed to the transport by this client (attempts, not asks).
    std::size_t transport_calls() const noexcept { return calls_.load(); }

private:
    Exchange call(const ImageBuffer* image, const std::string& prompt, const std::string& sample_id,
                  const std::string& corruption_key);

    Endpoint endpoint_;
    std::shared_ptr<Transport> transport_;
    std::shared_ptr<ExchangeCache> cache_;
    ClientOptions options_;
    std::counting_semaphore<1 << 16> slots_;
    std::mutex mu_;
    std::map<std::string, std::shared_future<Exchange>> pending_;
    std::atomic<std::size_t> calls_{0};
};

/// Digest used in Exchange::image_digest.
std::string image_digest(const ImageBuffer& img);

}  // namespace robulink
