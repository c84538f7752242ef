#include "robulink/imgcore/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace robulink {

namespace fs = std::filesystem;

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ImageIoError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ImageIoError("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw ImageIoError("short write to " + path.string());
    }
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_RGB;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.data().data(), 0, nullptr)) {
        throw ImageIoError(std::string("png encode: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.data().data(), 0, nullptr)) {
        throw ImageIoError(std::string("png encode: ") + image.message);
    }
    out.resize(size);
    return out;
}

ImageBuffer decode_png(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw ImageIoError(std::string("png decode: ") + image.message);
    }
    image.format = PNG_FORMAT_RGB;
    const int w = static_cast<int>(image.width);
    const int h = static_cast<int>(image.height);
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw ImageIoError("png decode: " + msg);
    }
    return ImageBuffer(w, h, std::move(buffer));
}

std::string encode_ppm_ascii(const ImageBuffer& img) {
    std::ostringstream out;
    out << "P3\n" << img.width() << ' ' << img.height() << "\n255\n";
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out << static_cast<int>(img.at(x, y, 0)) << ' ' << static_cast<int>(img.at(x, y, 1)) << ' '
                << static_cast<int>(img.at(x, y, 2)) << (x + 1 == img.width() ? '\n' : ' ');
        }
    }
    return out.str();
}

namespace {

class PnmReader {
public:
    explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    long next_int() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw ImageIoError("pnm decode: expected integer at byte " + std::to_string(pos_));
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_++] - '0');
            if (v > 1'000'000'000) {
                throw ImageIoError("pnm decode: integer overflow");
            }
        }
        return v;
    }

    std::size_t pos() const { return pos_; }
    void skip_one_whitespace() {
        if (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) {
            ++pos_;
        }
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
};

}  // namespace

ImageBuffer decode_ppm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '3' && bytes[1] != '6')) {
        throw ImageIoError("pnm decode: not a P3/P6 pixmap");
    }
    const bool ascii = bytes[1] == '3';
    PnmReader reader(bytes);
    const long w = reader.next_int();
    const long h = reader.next_int();
    const long maxval = reader.next_int();
    if (w < 1 || h < 1 || w > 65535 || h > 65535) {
        throw ImageIoError("pnm decode: bad dimensions");
    }
    if (maxval < 1 || maxval > 255) {
        throw ImageIoError("pnm decode: unsupported maxval " + std::to_string(maxval));
    }
    const std::size_t count = static_cast<std::size_t>(w) * h * 3;
    std::vector<std::uint8_t> data(count);
    if (ascii) {
        for (std::size_t i = 0; i < count; ++i) {
            const long v = reader.next_int();
            if (v > maxval) {
                throw ImageIoError("pnm decode: sample exceeds maxval");
            }
            data[i] = static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
        }
    } else {
        reader.skip_one_whitespace();
        const std::size_t start = reader.pos();
        if (bytes.size() < start + count) {
            throw ImageIoError("pnm decode: truncated raster");
        }
        for (std::size_t i = 0; i < count; ++i) {
            data[i] = static_cast<std::uint8_t>((bytes[start + i] * 255 + maxval / 2) / maxval);
        }
    }
    return ImageBuffer(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

ImageBuffer read_image(const fs::path& path) {
    const auto bytes = read_file_bytes(path);
    static constexpr std::uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    try {
        if (bytes.size() >= 8 && std::equal(kPngSig, kPngSig + 8, bytes.begin())) {
            return decode_png(bytes);
        }
        if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '3' || bytes[1] == '6')) {
            return decode_ppm(bytes);
        }
    } catch (const ImageError& e) {
        throw ImageIoError(path.string() + ": " + e.what());
    }
    throw ImageIoError(path.string() + ": unsupported image container");
}

void write_image(const ImageBuffer& img, const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") {
        write_file_bytes(path, encode_png(img));
    } else if (ext == ".ppm" || ext == ".pnm") {
        const std::string text = encode_ppm_ascii(img);
        write_file_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
    } else if (ext == ".p6") {
        std::string header = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
        std::vector<std::uint8_t> out(header.begin(), header.end());
        out.insert(out.end(), img.data().begin(), img.data().end());
        write_file_bytes(path, out);
    } else {
        throw ImageIoError(path.string() + ": unsupported output extension '" + ext + "'");
    }
}

}  // namespace robulink
