/**
 * @file codec.hpp
 * @brief Lossy codec adapters used by the source-encoding dimensions.
 *
 * Every adapter has the same contract: take an image and a codec-specific
 * quality parameter, encode, decode, and return the reconstruction. JPEG is
 * always compiled in. JPEG2000 and WEBP come from a linked library when the
 * build found one, or from external encoder/decoder commands registered at
 * runtime.
 */
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "robulink/corrupt/dimensions.hpp"
#include "robulink/imgcore/image.hpp"

namespace robulink {

enum class Codec { Jpeg, Jpeg2000, Webp };

std::string_view to_string(Codec c);

class CodecUnavailable : public CorruptionError {
public:
    explicit CodecUnavailable(const std::string& adapter)
        : CorruptionError("codec unavailable: no '" + adapter + "' adapter is registered"), adapter_(adapter) {}
    const std::string& adapter() const noexcept { return adapter_; }

private:
    std::string adapter_;
};

class CodecFailure : public CorruptionError {
public:
    using CorruptionError::CorruptionError;
};

class CodecAdapter {
public:
    virtual ~CodecAdapter() = default;
    virtual std::string name() const = 0;
    /// Quality semantics: JPEG and WEBP take 1..100 (higher is better);
    /// JPEG2000 takes a compression ratio (higher is worse).
    virtual std::vector<std::uint8_t> encode(const ImageBuffer& img, double quality) const = 0;
    virtual ImageBuffer decode(const std::vector<std::uint8_t>& bytes) const = 0;

    ImageBuffer roundtrip(const ImageBuffer& img, double quality) const;
};

/// Built-in libjpeg adapter (4:2:0, baseline, integer DCT).
std::unique_ptr<CodecAdapter> make_jpeg_adapter();

/// Adapter backed by external commands. `{in}`, `{out}` and `{quality}` in the
/// templates are substituted; encode reads a PNG and writes the codec stream,
/// decode reads the stream and writes a PNG.
std::unique_ptr<CodecAdapter> make_command_adapter(std::string name, std::string encode_template,
                                                   std::string decode_template);

class CodecRegistry {
public:
    /// Registry populated with every adapter compiled into this build.
    static CodecRegistry with_builtin();

    void add(Codec codec, std::shared_ptr<const CodecAdapter> adapter);
    bool has(Codec codec) const;
    /// Throws CodecUnavailable naming the adapter.
    const CodecAdapter& get(Codec codec) const;

private:
    std::map<Codec, std::shared_ptr<const CodecAdapter>> adapters_;
};

/// Process-wide registry used when callers do not supply one.
CodecRegistry& default_codecs();

ImageBuffer codec_roundtrip(const ImageBuffer& img, Codec codec, double quality,
                            const CodecRegistry& registry = default_codecs());

}  // namespace robulink
