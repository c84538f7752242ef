#include "robulink/corrupt/engine.hpp"

#include <algorithm>
#include <cmath>

#include "robulink/rng.hpp"

namespace robulink {

namespace {

OpResult plain(ImageBuffer img) { return OpResult{std::move(img), {}}; }

OpResult blocks(const ImageBuffer& img, BlockFault kind, StrengthParams p, std::uint64_t key) {
    int block = static_cast<int>(std::lround(p.aux));
    std::string warning;
    const int limit = std::min(img.width(), img.height()) / 2;
    if (block > limit) {
        warning = "block size reduced from " + std::to_string(block) + " to " + std::to_string(limit) +
                  " px to fit the image";
        block = limit;
    }
    OpResult r = corrupt_blocks(img, kind, block, static_cast<int>(std::lround(p.value)), key);
    if (!warning.empty()) {
        r.meta.warnings.insert(r.meta.warnings.begin(), warning);
    }
    return r;
}

OpResult dispatch(const CorruptionSpec& spec, const ImageBuffer& img, const CodecRegistry& codecs) {
    const StrengthParams p = strength_params(spec.dimension, spec.strength);
    const std::uint64_t key = corruption_key(spec);
    const OpticsParams op{p.value, p.aux};
    switch (spec.dimension) {
        case 1: return optics_sim(img, OpticsFault::MotionBlur, op, key);
        case 2: return optics_sim(img, OpticsFault::BrightIllumination, op, key);
        case 3: return optics_sim(img, OpticsFault::DarkIllumination, op, key);
        case 4: return optics_sim(img, OpticsFault::BlockingObstacle, op, key);
        case 5: return optics_sim(img, OpticsFault::LensBlur, op, key);
        case 6: return optics_sim(img, OpticsFault::ResolutionLimit, op, key);
        case 7: return optics_sim(img, OpticsFault::LensObstacle, op, key);
        case 8: return optics_sim(img, OpticsFault::LensShaking, op, key);
        case 9: return plain(inject_noise(img, NoiseKind::White, p.value, key));
        case 10: return plain(inject_noise(img, NoiseKind::Color, p.value, key));
        case 11: return plain(inject_noise(img, NoiseKind::Impulse, p.value, key));
        case 12: return plain(inject_noise(img, NoiseKind::Multiplicative, p.value, key));
        case 13: return plain(clock_jitter(img, static_cast<int>(std::lround(p.value)), key));
        case 14: return plain(tone_color_fault(img, ToneFault::ColorQuant, p.value, key));
        case 15: return plain(codec_roundtrip(img, Codec::Jpeg2000, p.value, codecs));
        case 16: return plain(codec_roundtrip(img, Codec::Jpeg, p.value, codecs));
        case 17: return plain(codec_roundtrip(img, Codec::Webp, p.value, codecs));
        case 18: return plain(tone_color_fault(img, ToneFault::GrayQuant, p.value, key));
        case 19: return blocks(img, BlockFault::Exchange, p, key);
        case 20: return blocks(img, BlockFault::Repeat, p, key);
        case 21: return blocks(img, BlockFault::Lost, p, key);
        case 22: return blocks(img, BlockFault::Interpolate, p, key);
        case 23: return plain(tone_color_fault(img, ToneFault::HsvSaturation, p.value, key));
        case 24: return plain(tone_color_fault(img, ToneFault::LabSaturation, p.value, key));
        case 25: return plain(tone_color_fault(img, ToneFault::MaxBrighten, p.value, key));
        case 26: return plain(tone_color_fault(img, ToneFault::MinDarken, p.value, key));
        case 27: return plain(tone_color_fault(img, ToneFault::MeanShift, p.value, key));
        case 28: return plain(enhance_artifact(img, EnhanceArtifact::GaussianFilter, p.value, key));
        case 29: return plain(enhance_artifact(img, EnhanceArtifact::ColorDiffusion, p.value, key));
        case 30: return plain(enhance_artifact(img, EnhanceArtifact::ColorShift, p.value, key));
        case 31: return plain(enhance_artifact(img, EnhanceArtifact::CnnDenoiseProxy, p.value, key));
        case 32: return plain(enhance_artifact(img, EnhanceArtifact::Sharpen, p.value, key));
        case 33: return plain(enhance_artifact(img, EnhanceArtifact::Contrast, p.value, key));
        default: break;
    }
    throw CorruptionError("dimension out of range: " + std::to_string(spec.dimension));
}

}  // namespace

std::uint64_t corruption_key(const CorruptionSpec& spec) noexcept {
    return derive_key({spec.seed, static_cast<std::uint64_t>(spec.dimension),
                       static_cast<std::uint64_t>(spec.strength)});
}

std::string corruption_label(const CorruptionSpec& spec) {
    const auto& info = dimension_info(spec.dimension);
    return std::to_string(info.id) + "-" + std::string(info.slug) + "@" + std::string(to_string(spec.strength));
}

ImageBuffer clock_jitter(const ImageBuffer& img, int max_shift, std::uint64_t key) {
    if (max_shift < 0) {
        throw CorruptionError("clock jitter: negative displacement");
    }
    if (max_shift == 0) {
        return img;
    }
    SubStream rng(key);
    ImageBuffer out(img.width(), img.height());
    const int w = img.width();
    for (int y = 0; y < img.height(); ++y) {
        const int shift = static_cast<int>(rng.between(-max_shift, max_shift));
        for (int x = 0; x < w; ++x) {
            const int sx = std::clamp(x - shift, 0, w - 1);
            for (int c = 0; c < 3; ++c) {
                out.at(x, y, c) = img.at(sx, y, c);
            }
        }
    }
    return out;
}

OpResult apply_detailed(const CorruptionSpec& spec, const ImageBuffer& img, const CodecRegistry& codecs) {
    const DimensionInfo& info = dimension_info(spec.dimension);
    require_corruptible(img);
    OpResult r = spec.strength == Strength::None ? plain(img) : dispatch(spec, img, codecs);
    r.meta.synthetic_wild = info.synthetic_wild;
    return r;
}

ImageBuffer apply(const CorruptionSpec& spec, const ImageBuffer& img, const CodecRegistry& codecs) {
    return apply_detailed(spec, img, codecs).image;
}

}  // namespace robulink
