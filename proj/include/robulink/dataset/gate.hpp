/**
 * @file gate.hpp
 * @brief Quality gating of candidate reference images.
 *
 * A gate maps an image to a score in [0,1]; the image passes the gate when
 * score >= threshold. A configuration passes only when every gate passes.
 * Learned IQA models plug in through CommandGate; the built-in proxy is a
 * blend of a sharpness score and an exposure score.
 */
#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "robulink/imgcore/image.hpp"

namespace robulink {

class GateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QualityGate {
public:
    virtual ~QualityGate() = default;
    virtual std::string name() const = 0;
    /// Score in [0,1]; throws on adapter failure.
    virtual double score(const ImageBuffer& img) const = 0;
};

/// Variance of the 4-neighbour Laplacian of the 8-bit luma, mapped to [0,1)
/// by v / (v + kBlurScale).
double blur_score(const ImageBuffer& img);
inline constexpr double kBlurScale = 100.0;

/// 1 minus the fraction of pixels whose luma lies outside [5, 250].
double exposure_score(const ImageBuffer& img);

class BlurGate final : public QualityGate {
public:
    std::string name() const override { return "blur"; }
    double score(const ImageBuffer& img) const override { return blur_score(img); }
};

class ExposureGate final : public QualityGate {
public:
    std::string name() const override { return "exposure"; }
    double score(const ImageBuffer& img) const override { return exposure_score(img); }
};

class ProxyGate final : public QualityGate {
public:
    explicit ProxyGate(double blur_weight = 0.6, double exposure_weight = 0.4);
    std::string name() const override { return "proxy"; }
    double score(const ImageBuffer& img) const override;

private:
    double blur_weight_;
    double exposure_weight_;
};

/// External scorer: `{in}` in the command is replaced by a PNG path; the
/// command must print one number in [0,1] on stdout.
class CommandGate final : public QualityGate {
public:
    CommandGate(std::string name, std::string command);
    std::string name() const override { return name_; }
    double score(const ImageBuffer& img) const override;

private:
    std::string name_;
    std::string command_;
};

struct GateEntry {
    std::shared_ptr<const QualityGate> gate;
    double threshold = 0.5;
};

struct QualityGateConfig {
    std::vector<GateEntry> gates;
};

/// Single proxy gate at threshold 0.5.
QualityGateConfig default_gate_config();

/// {"gates": [{"type": "proxy"|"blur"|"exposure"|"command", "threshold": t,
///             "name": ..., "command": ..., "blur_weight": ..., "exposure_weight": ...}]}
QualityGateConfig gate_config_from_json(const nlohmann::json& j);

struct GateScore {
    std::string gate;
    double score = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string error;
};

struct GateVerdict {
    bool pass = false;
    /// First failing gate and why; empty on pass.
    std::string failed_gate;
    std::string reason;
    std::vector<GateScore> scores;
};

/// Evaluates every gate (for reporting) and passes only if all pass.
GateVerdict gate_image(const ImageBuffer& img, const QualityGateConfig& config);

}  // namespace robulink
