/**
 * @file image.hpp
 * @brief 8-bit sRGB raster and its float counterpart.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace robulink {

class ImageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FloatImage;

/// Row-major H x W x 3 interleaved 8-bit sRGB samples.
class ImageBuffer {
public:
    ImageBuffer() = default;
    ImageBuffer(int width, int height);
    ImageBuffer(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    bool empty() const noexcept { return data_.empty(); }

    std::uint8_t& at(int x, int y, int c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
    }

    std::span<std::uint8_t> data() noexcept { return data_; }
    std::span<const std::uint8_t> data() const noexcept { return data_; }
    const std::vector<std::uint8_t>& bytes() const noexcept { return data_; }

    FloatImage to_float() const;

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Same layout as ImageBuffer with samples nominally in [0,1].
/// Values may leave that range mid-pipeline; clamp_quantize brings them back.
class FloatImage {
public:
    FloatImage() = default;
    FloatImage(int width, int height, double fill = 0.0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    double& at(int x, int y, int c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
    }
    double at(int x, int y, int c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
    }
    /// Replicate-border access.
    double at_clamped(int x, int y, int c) const;

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    ImageBuffer clamp_quantize() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Quantize one normalized sample to 8 bits (round half up, clamped).
std::uint8_t quantize_sample(double v) noexcept;

/// Corruption operators need at least one full 8x8 block.
void require_corruptible(const ImageBuffer& img);

/// Square tiling of an image; edge blocks may be smaller.
struct BlockRect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    bool contains(int px, int py) const noexcept {
        return px >= x && px < x + width && py >= y && py < y + height;
    }
    friend bool operator==(const BlockRect&, const BlockRect&) = default;
};

class BlockGrid {
public:
    BlockGrid(int image_width, int image_height, int block_size);

    int block_size() const noexcept { return block_size_; }
    int cols() const noexcept { return cols_; }
    int rows() const noexcept { return rows_; }
    int count() const noexcept { return cols_ * rows_; }

    BlockRect block(int col, int row) const;
    BlockRect block(int index) const { return block(index % cols_, index / cols_); }
    bool is_full(int index) const;

private:
    int width_;
    int height_;
    int block_size_;
    int cols_;
    int rows_;
};

}  // namespace robulink
