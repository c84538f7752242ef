/**
 * @file engine.hpp
 * @brief Entry point that maps a (dimension, strength, seed) triple onto the
 *        operator families in ops.hpp.
 */
#pragma once

#include <cstdint>
#include <string>

#include "robulink/corrupt/codec.hpp"
#include "robulink/corrupt/dimensions.hpp"
#include "robulink/corrupt/ops.hpp"

namespace robulink {

struct CorruptionSpec {
    int dimension = 1;
    Strength strength = Strength::None;
    std::uint64_t seed = 0;

    bool operator==(const CorruptionSpec&) const = default;
};

/// Stream key for every random draw made while applying `spec`.
std::uint64_t corruption_key(const CorruptionSpec& spec) noexcept;

/// Short stable label such as "16-jpeg@mid".
std::string corruption_label(const CorruptionSpec& spec);

/// Applies the corruption; output has the input's geometry and is a pure
/// function of (spec, img). Strength::None returns the input unchanged.
ImageBuffer apply(const CorruptionSpec& spec, const ImageBuffer& img,
                  const CodecRegistry& codecs = default_codecs());

/// As apply, plus the touched regions, warnings and fidelity flag.
OpResult apply_detailed(const CorruptionSpec& spec, const ImageBuffer& img,
                        const CodecRegistry& codecs = default_codecs());

/// Scanline timing error: each row is displaced horizontally by a seeded
/// integer in [-max_shift, max_shift], replicate border.
ImageBuffer clock_jitter(const ImageBuffer& img, int max_shift, std::uint64_t key);

}  // namespace robulink
