#include "robulink/dataset/gate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "robulink/imgcore/image_io.hpp"

namespace robulink {

namespace {

std::vector<double> luma_plane(const ImageBuffer& img) {
    std::vector<double> y(img.pixel_count());
    const auto d = img.data();
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = 0.299 * d[3 * i] + 0.587 * d[3 * i + 1] + 0.114 * d[3 * i + 2];
    }
    return y;
}

}  // namespace

double blur_score(const ImageBuffer& img) {
    const int w = img.width();
    const int h = img.height();
    const auto y = luma_plane(img);
    const auto at = [&](int x, int yy) {
        x = std::clamp(x, 0, w - 1);
        yy = std::clamp(yy, 0, h - 1);
        return y[static_cast<std::size_t>(yy) * w + x];
    };
    double sum = 0.0;
    double sq = 0.0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double lap = at(c - 1, r) + at(c + 1, r) + at(c, r - 1) + at(c, r + 1) - 4.0 * at(c, r);
            sum += lap;
            sq += lap * lap;
        }
    }
    const double n = static_cast<double>(w) * h;
    const double mean = sum / n;
    const double var = std::max(0.0, sq / n - mean * mean);
    return var / (var + kBlurScale);
}

double exposure_score(const ImageBuffer& img) {
    const auto y = luma_plane(img);
    std::size_t clipped = 0;
    for (double v : y) {
        if (v < 5.0 || v > 250.0) {
            ++clipped;
        }
    }
    return 1.0 - static_cast<double>(clipped) / static_cast<double>(y.size());
}

ProxyGate::ProxyGate(double blur_weight, double exposure_weight)
    : blur_weight_(blur_weight), exposure_weight_(exposure_weight) {
    if (blur_weight < 0 || exposure_weight < 0 || blur_weight + exposure_weight <= 0) {
        throw GateError("proxy gate: weights must be non-negative and not both zero");
    }
}

double ProxyGate::score(const ImageBuffer& img) const {
    return (blur_weight_ * blur_score(img) + exposure_weight_ * exposure_score(img)) /
           (blur_weight_ + exposure_weight_);
}

CommandGate::CommandGate(std::string name, std::string command) : name_(std::move(name)), command_(std::move(command)) {
    if (command_.find("{in}") == std::string::npos) {
        throw GateError("command gate '" + name_ + "': command must contain {in}");
    }
}

double CommandGate::score(const ImageBuffer& img) const {
    static std::atomic<unsigned> counter{0};
    const auto path = std::filesystem::temp_directory_path() /
                      ("robulink-gate-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".png");
    write_image(img, path);
    std::string cmd = command_;
    const std::string quoted = "'" + path.string() + "'";
    for (std::size_t pos = cmd.find("{in}"); pos != std::string::npos; pos = cmd.find("{in}", pos + quoted.size())) {
        cmd.replace(pos, 4, quoted);
    }
    std::string output;
    int rc = -1;
    if (FILE* pipe = ::popen(cmd.c_str(), "r")) {
        std::array<char, 256> buf{};
        while (std::fgets(buf.data(), buf.size(), pipe)) {
            output += buf.data();
        }
        rc = ::pclose(pipe);
    }
    std::error_code ec;
    std::filesystem::remove(path, ec);
    if (rc != 0) {
        throw GateError(name_ + ": command failed with status " + std::to_string(rc));
    }
    std::istringstream in(output);
    double v = 0.0;
    if (!(in >> v) || !std::isfinite(v)) {
        throw GateError(name_ + ": command printed no score");
    }
    return std::clamp(v, 0.0, 1.0);
}

QualityGateConfig default_gate_config() { return {{{std::make_shared<ProxyGate>(), 0.5}}}; }

QualityGateConfig gate_config_from_json(const nlohmann::json& j) {
    QualityGateConfig cfg;
    const auto& gates = j.contains("gates") ? j.at("gates") : j;
    if (!gates.is_array()) {
        throw GateError("gate config: expected a 'gates' list");
    }
    for (const auto& g : gates) {
        const std::string type = g.value("type", "proxy");
        const double threshold = g.value("threshold", 0.5);
        if (threshold < 0.0 || threshold > 1.0) {
            throw GateError("gate config: threshold must lie in [0,1]");
        }
        std::shared_ptr<const QualityGate> gate;
        if (type == "proxy") {
            gate = std::make_shared<ProxyGate>(g.value("blur_weight", 0.6), g.value("exposure_weight", 0.4));
        } else if (type == "blur") {
            gate = std::make_shared<BlurGate>();
        } else if (type == "exposure") {
            gate = std::make_shared<ExposureGate>();
        } else if (type == "command") {
            gate = std::make_shared<CommandGate>(g.value("name", "command"), g.at("command").get<std::string>());
        } else {
            throw GateError("gate config: unknown gate type '" + type + "'");
        }
        cfg.gates.push_back({gate, threshold});
    }
    return cfg;
}

GateVerdict gate_image(const ImageBuffer& img, const QualityGateConfig& config) {
    if (config.gates.empty()) {
        throw GateError("gate config has no gates");
    }
    GateVerdict v;
    v.pass = true;
    for (const auto& entry : config.gates) {
        GateScore s;
        s.gate = entry.gate->name();
        s.threshold = entry.threshold;
        try {
            s.score = entry.gate->score(img);
            s.pass = s.score >= entry.threshold;
        } catch (const std::exception& e) {
            s.error = e.what();
            s.pass = false;
        }
        if (!s.pass && v.pass) {
            v.pass = false;
            v.failed_gate = s.gate;
            if (!s.error.empty()) {
                v.reason = "gate '" + s.gate + "' failed: " + s.error;
            } else {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "score %.4f below threshold %.4f", s.score, s.threshold);
                v.reason = "gate '" + s.gate + "': " + buf;
            }
        }
        v.scores.push_back(std::move(s));
    }
    return v;
}

}  // namespace robulink
