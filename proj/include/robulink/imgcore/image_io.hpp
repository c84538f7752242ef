#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "robulink/imgcore/image.hpp"

namespace robulink {

class ImageIoError : public ImageError {
public:
    using ImageError::ImageError;
};

/// Reads PNG or portable pixmap (P3/P6), detected from the file signature.
ImageBuffer read_image(const std::filesystem::path& path);

/// Writes PNG for `.png`, plain-text P3 for `.ppm`/`.pnm`, binary P6 for `.p6`.
void write_image(const ImageBuffer& img, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const ImageBuffer& img);
ImageBuffer decode_png(std::span<const std::uint8_t> bytes);

std::string encode_ppm_ascii(const ImageBuffer& img);
ImageBuffer decode_ppm(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace robulink
