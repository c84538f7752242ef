#include "robulink/imgcore/image.hpp"

#include <algorithm>
#include <cmath>

namespace robulink {

ImageBuffer::ImageBuffer(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw ImageError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                         std::to_string(height));
    }
    data_.assign(pixel_count() * 3, 0);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1) {
        throw ImageError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                         std::to_string(height));
    }
    if (data_.size() != pixel_count() * 3) {
        throw ImageError("sample buffer has " + std::to_string(data_.size()) + " bytes, expected " +
                         std::to_string(pixel_count() * 3));
    }
}

FloatImage ImageBuffer::to_float() const {
    FloatImage out(width_, height_);
    auto dst = out.data();
    for (std::size_t i = 0; i < data_.size(); ++i) {
        dst[i] = data_[i] / 255.0;
    }
    return out;
}

FloatImage::FloatImage(int width, int height, double fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw ImageError("image dimensions must be positive");
    }
    data_.assign(pixel_count() * 3, fill);
}

double FloatImage::at_clamped(int x, int y, int c) const {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return at(x, y, c);
}

std::uint8_t quantize_sample(double v) noexcept {
    if (!(v > 0.0)) {
        return 0;  // also catches NaN
    }
    const double scaled = std::floor(v * 255.0 + 0.5);
    return scaled >= 255.0 ? 255 : static_cast<std::uint8_t>(scaled);
}

ImageBuffer FloatImage::clamp_quantize() const {
    std::vector<std::uint8_t> bytes(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
        bytes[i] = quantize_sample(data_[i]);
    }
    return ImageBuffer(width_, height_, std::move(bytes));
}

void require_corruptible(const ImageBuffer& img) {
    if (img.width() < 8 || img.height() < 8) {
        throw ImageError("corruption requires at least 8x8 pixels, got " + std::to_string(img.width()) +
                         "x" + std::to_string(img.height()));
    }
}

BlockGrid::BlockGrid(int image_width, int image_height, int block_size)
    : width_(image_width), height_(image_height), block_size_(block_size) {
    if (block_size < 1 || image_width < 1 || image_height < 1) {
        throw ImageError("invalid block grid geometry");
    }
    cols_ = (image_width + block_size - 1) / block_size;
    rows_ = (image_height + block_size - 1) / block_size;
}

BlockRect BlockGrid::block(int col, int row) const {
    BlockRect r;
    r.x = col * block_size_;
    r.y = row * block_size_;
    r.width = std::min(block_size_, width_ - r.x);
    r.height = std::min(block_size_, height_ - r.y);
    return r;
}

bool BlockGrid::is_full(int index) const {
    const BlockRect r = block(index);
    return r.width == block_size_ && r.height == block_size_;
}

}  // namespace robulink
