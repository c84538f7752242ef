#include "robulink/modelclient/client.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include "robulink/imgcore/image_io.hpp"

namespace robulink {

std::string image_digest(const ImageBuffer& img) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(8 + img.data().size());
    for (int v : {img.width(), img.height()}) {
        for (int s = 0; s < 32; s += 8) {
            bytes.push_back(static_cast<std::uint8_t>(static_cast<unsigned>(v) >> s));
        }
    }
    const auto d = img.data();
    bytes.insert(bytes.end(), d.begin(), d.end());
    return sha256_hex(std::span<const std::uint8_t>(bytes));
}

ModelClient::ModelClient(Endpoint endpoint, std::shared_ptr<Transport> transport, std::shared_ptr<ExchangeCache> cache,
                         ClientOptions options)
    : endpoint_(std::move(endpoint)),
      transport_(std::move(transport)),
      cache_(std::move(cache)),
      options_(std::move(options)),
      slots_(std::max(1, endpoint_.max_in_flight)) {
    if (!transport_) {
        throw std::invalid_argument("model client needs a transport");
    }
    if (!cache_) {
        cache_ = std::make_shared<ExchangeCache>();
    }
    if (!options_.sleep) {
        options_.sleep = [](double s) { std::this_thread::sleep_for(std::chrono::duration<double>(s)); };
    }
}

Exchange ModelClient::ask(const ImageBuffer* image, const std::string& prompt, const std::string& sample_id,
                          const std::string& corruption_key) {
    const ExchangeKey key{endpoint_.name, sample_id, corruption_key, sha256_hex(prompt)};
    if (auto hit = cache_->find(key)) {
        return *hit;
    }
    std::promise<Exchange> promise;
    std::shared_future<Exchange> future;
    bool leader = false;
    {
        std::lock_guard lock(mu_);
        if (const auto it = pending_.find(key.str()); it != pending_.end()) {
            future = it->second;
        } else {
            // A concurrent leader may have finished between the lookup above
            // and taking the lock.
            if (auto hit = cache_->find(key)) {
                return *hit;
            }
            future = promise.get_future().share();
            pending_.emplace(key.str(), future);
            leader = true;
        }
    }
    if (!leader) {
        return future.get();
    }
    try {
        Exchange e = call(image, prompt, sample_id, corruption_key);
        cache_->append(e);
        promise.set_value(e);
    } catch (...) {
        promise.set_exception(std::current_exception());
    }
    {
        std::lock_guard lock(mu_);
        pending_.erase(key.str());
    }
    return future.get();
}

Exchange ModelClient::call(const ImageBuffer* image, const std::string& prompt, const std::string& sample_id,
                           const std::string& corruption_key) {
    const std::string context = "endpoint '" + endpoint_.name + "', sample '" + sample_id + "', " + corruption_key;
    if (options_.offline && transport_->is_network()) {
        throw OfflineError("offline run needs a network call (" + context + ")");
    }
    ChatRequest req{sample_id, corruption_key, prompt, {}};
    Exchange e{endpoint_.name, sample_id, corruption_key, prompt, {}, {}, {}, 0};
    if (image) {
        req.image_png = encode_png(*image);
        e.image_digest = image_digest(*image);
    }
    std::string last_error;
    for (int attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
        if (attempt > 0) {
            options_.sleep(endpoint_.backoff_initial_s * std::ldexp(1.0, attempt - 1));
        }
        e.attempts = attempt + 1;
        slots_.acquire();
        try {
            ++calls_;
            e.response = transport_->send(endpoint_, req);
            slots_.release();
            e.timestamp = utc_timestamp();
            return e;
        } catch (const AuthError& err) {
            slots_.release();
            throw InferenceError("authentication failed (" + context + "): " + err.what(), true);
        } catch (const TransportError& err) {
            slots_.release();
            if (!err.transient()) {
                throw InferenceError(std::string(err.what()) + " (" + context + ")", false);
            }
            last_error = err.what();
        } catch (...) {
            slots_.release();
            throw;
        }
    }
    throw InferenceError("retries exhausted after " + std::to_string(endpoint_.max_retries + 1) + " attempts (" +
                             context + "): " + last_error,
                         false);
}

}  // namespace robulink
