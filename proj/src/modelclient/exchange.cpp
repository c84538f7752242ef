#include "robulink/modelclient/exchange.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <stdexcept>

#include <json.hpp>

namespace robulink {

using nlohmann::json;

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string sha256_hex(std::string_view text) {
    return sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string ExchangeKey::str() const {
    // Unit separator cannot appear in ids produced by this library.
    return model + '\x1f' + sample_id + '\x1f' + corruption_key + '\x1f' + prompt_hash;
}

ExchangeKey key_of(const Exchange& e) { return {e.model, e.sample_id, e.corruption_key, sha256_hex(e.prompt)}; }

std::string exchange_to_json_line(const Exchange& e) {
    return json{{"model", e.model},
                {"sample_id", e.sample_id},
                {"corruption_key", e.corruption_key},
                {"prompt", e.prompt},
                {"prompt_hash", sha256_hex(e.prompt)},
                {"image_digest", e.image_digest},
                {"response", e.response},
                {"timestamp", e.timestamp},
                {"attempts", e.attempts}}
        .dump();
}

Exchange exchange_from_json_line(std::string_view line) {
    const json j = json::parse(line);
    Exchange e;
    e.model = j.at("model").get<std::string>();
    e.sample_id = j.at("sample_id").get<std::string>();
    e.corruption_key = j.at("corruption_key").get<std::string>();
    e.prompt = j.at("prompt").get<std::string>();
    e.image_digest = j.value("image_digest", "");
    e.response = j.at("response").get<std::string>();
    e.timestamp = j.value("timestamp", "");
    e.attempts = j.value("attempts", 1);
    return e;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ExchangeCache::ExchangeCache(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.empty()) {
        return;
    }
    if (std::ifstream in{path_}) {
        std::size_t n = 0;
        for (std::string line; std::getline(in, line);) {
            ++n;
            if (line.empty()) {
                continue;
            }
            try {
                Exchange e = exchange_from_json_line(line);
                index_[key_of(e).str()] = log_.size();
                log_.push_back(std::move(e));
            } catch (const std::exception& ex) {
                throw std::runtime_error(path_.string() + ":" + std::to_string(n) + ": bad exchange record: " +
                                         ex.what());
            }
        }
    }
    if (path_.has_parent_path()) {
        std::filesystem::create_directories(path_.parent_path());
    }
    out_.open(path_, std::ios::app | std::ios::binary);
    if (!out_) {
        throw std::runtime_error("cannot open exchange log " + path_.string());
    }
}

std::optional<Exchange> ExchangeCache::find(const ExchangeKey& key) const {
    std::lock_guard lock(mu_);
    const auto it = index_.find(key.str());
    if (it == index_.end()) {
        return std::nullopt;
    }
    return log_[it->second];
}

void ExchangeCache::append(const Exchange& e) {
    std::lock_guard lock(mu_);
    if (out_.is_open()) {
        out_ << exchange_to_json_line(e) << '\n';
        out_.flush();
    }
    index_[key_of(e).str()] = log_.size();
    log_.push_back(e);
}

std::size_t ExchangeCache::size() const {
    std::lock_guard lock(mu_);
    return log_.size();
}

std::vector<Exchange> ExchangeCache::entries() const {
    std::lock_guard lock(mu_);
    return log_;
}

}  // namespace robulink
