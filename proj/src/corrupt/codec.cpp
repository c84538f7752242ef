#include "robulink/corrupt/codec.hpp"

#include <jpeglib.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "robulink/imgcore/image_io.hpp"

namespace robulink {

#ifdef ROBULINK_HAVE_OPENCV_CODECS
std::unique_ptr<CodecAdapter> make_opencv_jpeg2000_adapter();
std::unique_ptr<CodecAdapter> make_opencv_webp_adapter();
#endif

std::string_view to_string(Codec c) {
    switch (c) {
        case Codec::Jpeg: return "jpeg";
        case Codec::Jpeg2000: return "jpeg2000";
        case Codec::Webp: return "webp";
    }
    return "?";
}

ImageBuffer CodecAdapter::roundtrip(const ImageBuffer& img, double quality) const {
    ImageBuffer out;
    try {
        out = decode(encode(img, quality));
    } catch (const CodecFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw CodecFailure(name() + ": " + e.what());
    }
    if (out.width() != img.width() || out.height() != img.height()) {
        throw CodecFailure(name() + ": decoded size differs from input");
    }
    return out;
}

namespace {

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

class JpegAdapter final : public CodecAdapter {
public:
    std::string name() const override { return "jpeg"; }

    std::vector<std::uint8_t> encode(const ImageBuffer& img, double quality) const override {
        jpeg_compress_struct cinfo{};
        JpegErrorManager err{};
        cinfo.err = jpeg_std_error(&err.base);
        err.base.error_exit = jpeg_error_exit;
        unsigned char* mem = nullptr;
        unsigned long mem_size = 0;
        if (setjmp(err.jump)) {
            jpeg_destroy_compress(&cinfo);
            std::free(mem);
            throw CodecFailure(std::string("jpeg encode: ") + err.message);
        }
        jpeg_create_compress(&cinfo);
        jpeg_mem_dest(&cinfo, &mem, &mem_size);
        cinfo.image_width = static_cast<JDIMENSION>(img.width());
        cinfo.image_height = static_cast<JDIMENSION>(img.height());
        cinfo.input_components = 3;
        cinfo.in_color_space = JCS_RGB;
        jpeg_set_defaults(&cinfo);
        cinfo.dct_method = JDCT_ISLOW;
        jpeg_set_quality(&cinfo, std::clamp(static_cast<int>(std::lround(quality)), 1, 100), TRUE);
        jpeg_start_compress(&cinfo, TRUE);
        const auto* base = img.data().data();
        while (cinfo.next_scanline < cinfo.image_height) {
            JSAMPROW row = const_cast<JSAMPROW>(base + static_cast<std::size_t>(cinfo.next_scanline) * img.width() * 3);
            jpeg_write_scanlines(&cinfo, &row, 1);
        }
        jpeg_finish_compress(&cinfo);
        std::vector<std::uint8_t> out(mem, mem + mem_size);
        jpeg_destroy_compress(&cinfo);
        std::free(mem);
        return out;
    }

    ImageBuffer decode(const std::vector<std::uint8_t>& bytes) const override {
        jpeg_decompress_struct cinfo{};
        JpegErrorManager err{};
        cinfo.err = jpeg_std_error(&err.base);
        err.base.error_exit = jpeg_error_exit;
        std::vector<std::uint8_t> pixels;
        int width = 0;
        int height = 0;
        if (setjmp(err.jump)) {
            jpeg_destroy_decompress(&cinfo);
            throw CodecFailure(std::string("jpeg decode: ") + err.message);
        }
        jpeg_create_decompress(&cinfo);
        jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
        jpeg_read_header(&cinfo, TRUE);
        cinfo.out_color_space = JCS_RGB;
        cinfo.dct_method = JDCT_ISLOW;
        jpeg_start_decompress(&cinfo);
        width = static_cast<int>(cinfo.output_width);
        height = static_cast<int>(cinfo.output_height);
        pixels.resize(static_cast<std::size_t>(width) * height * 3);
        while (cinfo.output_scanline < cinfo.output_height) {
            JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
            jpeg_read_scanlines(&cinfo, &row, 1);
        }
        jpeg_finish_decompress(&cinfo);
        jpeg_destroy_decompress(&cinfo);
        return ImageBuffer(width, height, std::move(pixels));
    }
};

std::string substitute(std::string text, const std::string& key, const std::string& value) {
    for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
        text.replace(pos, key.size(), value);
    }
    return text;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    }
    return out + "'";
}

class ScratchDir {
public:
    ScratchDir() {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("robulink-codec-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

class CommandAdapter final : public CodecAdapter {
public:
    CommandAdapter(std::string name, std::string enc, std::string dec)
        : name_(std::move(name)), encode_(std::move(enc)), decode_(std::move(dec)) {}

    std::string name() const override { return name_; }

    std::vector<std::uint8_t> encode(const ImageBuffer& img, double quality) const override {
        ScratchDir dir;
        const auto in = dir.path() / "in.png";
        const auto out = dir.path() / "out.bin";
        write_image(img, in);
        run(encode_, in, out, quality);
        return read_file_bytes(out);
    }

    ImageBuffer decode(const std::vector<std::uint8_t>& bytes) const override {
        ScratchDir dir;
        const auto in = dir.path() / "in.bin";
        const auto out = dir.path() / "out.png";
        write_file_bytes(in, bytes);
        run(decode_, in, out, 0.0);
        return read_image(out);
    }

private:
    void run(const std::string& tmpl, const std::filesystem::path& in, const std::filesystem::path& out,
             double quality) const {
        char q[32];
        std::snprintf(q, sizeof(q), "%g", quality);
        std::string cmd = substitute(tmpl, "{in}", shell_quote(in.string()));
        cmd = substitute(cmd, "{out}", shell_quote(out.string()));
        cmd = substitute(cmd, "{quality}", q);
        const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
        if (rc != 0) {
            throw CodecFailure(name_ + ": command exited with status " + std::to_string(rc) + ": " + cmd);
        }
    }

    std::string name_;
    std::string encode_;
    std::string decode_;
};

}  // namespace

std::unique_ptr<CodecAdapter> make_jpeg_adapter() { return std::make_unique<JpegAdapter>(); }

std::unique_ptr<CodecAdapter> make_command_adapter(std::string name, std::string encode_template,
                                                   std::string decode_template) {
    return std::make_unique<CommandAdapter>(std::move(name), std::move(encode_template), std::move(decode_template));
}

CodecRegistry CodecRegistry::with_builtin() {
    CodecRegistry r;
    r.add(Codec::Jpeg, make_jpeg_adapter());
#ifdef ROBULINK_HAVE_OPENCV_CODECS
    r.add(Codec::Jpeg2000, make_opencv_jpeg2000_adapter());
    r.add(Codec::Webp, make_opencv_webp_adapter());
#endif
    return r;
}

void CodecRegistry::add(Codec codec, std::shared_ptr<const CodecAdapter> adapter) {
    adapters_[codec] = std::move(adapter);
}

bool CodecRegistry::has(Codec codec) const { return adapters_.count(codec) != 0; }

const CodecAdapter& CodecRegistry::get(Codec codec) const {
    const auto it = adapters_.find(codec);
    if (it == adapters_.end()) {
        throw CodecUnavailable(std::string(to_string(codec)));
    }
    return *it->second;
}

CodecRegistry& default_codecs() {
    static CodecRegistry registry = CodecRegistry::with_builtin();
    return registry;
}

ImageBuffer codec_roundtrip(const ImageBuffer& img, Codec codec, double quality, const CodecRegistry& registry) {
    return registry.get(codec).roundtrip(img, quality);
}

}  // namespace robulink
