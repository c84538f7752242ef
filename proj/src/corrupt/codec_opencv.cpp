// JPEG2000 and WEBP adapters backed by OpenCV's imgcodecs (OpenJPEG / libwebp).
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cmath>

#include "robulink/corrupt/codec.hpp"

namespace robulink {

namespace {

cv::Mat to_bgr(const ImageBuffer& img) {
    cv::Mat m(img.height(), img.width(), CV_8UC3);
    for (int y = 0; y < img.height(); ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width(); ++x) {
            row[3 * x + 0] = img.at(x, y, 2);
            row[3 * x + 1] = img.at(x, y, 1);
            row[3 * x + 2] = img.at(x, y, 0);
        }
    }
    return m;
}

ImageBuffer from_bgr(const cv::Mat& m) {
    ImageBuffer img(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) {
            img.at(x, y, 0) = row[3 * x + 2];
            img.at(x, y, 1) = row[3 * x + 1];
            img.at(x, y, 2) = row[3 * x + 0];
        }
    }
    return img;
}

class OpenCvAdapter final : public CodecAdapter {
public:
    OpenCvAdapter(std::string name, std::string ext) : name_(std::move(name)), ext_(std::move(ext)) {}

    std::string name() const override { return name_; }

    std::vector<std::uint8_t> encode(const ImageBuffer& img, double quality) const override {
        std::vector<int> params;
        if (ext_ == ".jp2") {
            // OpenCV expresses the target rate as 1000 / compression ratio.
            const double ratio = std::max(quality, 1.0);
            const int x1000 = std::clamp(static_cast<int>(std::lround(1000.0 / ratio)), 1, 1000);
            params = {cv::IMWRITE_JPEG2000_COMPRESSION_X1000, x1000};
        } else {
            params = {cv::IMWRITE_WEBP_QUALITY, std::clamp(static_cast<int>(std::lround(quality)), 1, 100)};
        }
        std::vector<std::uint8_t> out;
        try {
            if (!cv::imencode(ext_, to_bgr(img), out, params)) {
                throw CodecFailure(name_ + ": encoder rejected the image");
            }
        } catch (const cv::Exception& e) {
            throw CodecFailure(name_ + ": " + e.what());
        }
        return out;
    }

    ImageBuffer decode(const std::vector<std::uint8_t>& bytes) const override {
        cv::Mat m;
        try {
            m = cv::imdecode(bytes, cv::IMREAD_COLOR);
        } catch (const cv::Exception& e) {
            throw CodecFailure(name_ + ": " + e.what());
        }
        if (m.empty()) {
            throw CodecFailure(name_ + ": decoder returned no image");
        }
        return from_bgr(m);
    }

private:
    std::string name_;
    std::string ext_;
};

}  // namespace

std::unique_ptr<CodecAdapter> make_opencv_jpeg2000_adapter() {
    return std::make_unique<OpenCvAdapter>("jpeg2000", ".jp2");
}

std::unique_ptr<CodecAdapter> make_opencv_webp_adapter() { return std::make_unique<OpenCvAdapter>("webp", ".webp"); }

}  // namespace robulink
