/**
 * @file rng.hpp
 * @brief Counter-based random sub-streams.
 *
 * Every draw is a pure function of (key, draw index), where the key is a
 * SplitMix64 hash of the caller's identifying tuple. Results therefore do
 * not depend on scheduling or on how many other streams exist. Only integer
 * arithmetic and IEEE operations are used, so integer and uniform draws are
 * identical across platforms.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

namespace robulink {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Folds a tuple of integers into one stream key.
constexpr std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (std::uint64_t p : parts) {
        h = splitmix64(h ^ splitmix64(p));
    }
    return h;
}

/// 64-bit FNV-1a, used to turn identifiers into key material.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class SubStream {
public:
    constexpr explicit SubStream(std::uint64_t key) noexcept : key_(key) {}

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t draws() const noexcept { return counter_; }

    /// Draw `index` of this stream without advancing it.
    constexpr std::uint64_t at(std::uint64_t index) const noexcept {
        return splitmix64(key_ ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    }

    constexpr std::uint64_t next_u64() noexcept { return at(counter_++); }

    /// Uniform in [0,1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n) by multiply-shift; n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept {
        const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Standard normal by Box-Muller; consumes two draws.
    double normal() noexcept {
        double u1 = uniform();
        const double u2 = uniform();
        if (u1 <= 0.0) {
            u1 = 0x1.0p-53;
        }
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace robulink
