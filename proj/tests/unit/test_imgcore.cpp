#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracle.hpp"
#include "robulink/imgcore/color.hpp"
#include "robulink/imgcore/filter.hpp"
#include "robulink/imgcore/image_io.hpp"
#include "robulink/imgcore/metrics.hpp"
#include "support.hpp"

using namespace robulink;

TEST_SUITE("imgcore") {

TEST_CASE("image geometry and validation") {
    CHECK_THROWS_AS(ImageBuffer(0, 4), ImageError);
    CHECK_THROWS_AS(ImageBuffer(2, 2, std::vector<std::uint8_t>(5)), ImageError);
    CHECK_NOTHROW(require_corruptible(ImageBuffer(8, 8)));
    CHECK_THROWS_AS(require_corruptible(ImageBuffer(7, 8)), ImageError);
    CHECK(quantize_sample(-0.2) == 0);
    CHECK(quantize_sample(std::numeric_limits<double>::quiet_NaN()) == 0);
    CHECK(quantize_sample(1.7) == 255);
    CHECK(quantize_sample(0.5) == 128);  // 127.5 rounds half up
}

TEST_CASE("block grid tiles the raster exactly") {
    for (auto [w, h, b] : {std::tuple{64, 64, 32}, {100, 37, 16}, {8, 8, 8}, {33, 65, 32}}) {
        const BlockGrid g(w, h, b);
        CHECK(g.cols() == (w + b - 1) / b);
        CHECK(g.rows() == (h + b - 1) / b);
        std::vector<int> hits(static_cast<std::size_t>(w) * h, 0);
        for (int i = 0; i < g.count(); ++i) {
            const BlockRect r = g.block(i);
            for (int y = r.y; y < r.y + r.height; ++y)
                for (int x = r.x; x < r.x + r.width; ++x) ++hits[static_cast<std::size_t>(y) * w + x];
        }
        for (int v : hits) REQUIRE(v == 1);
    }
}

TEST_CASE("color space anchors") {
    const auto red = rgb_to_hsv({1.0, 0.0, 0.0});
    CHECK(red[0] == 0.0);
    CHECK(red[1] == 1.0);
    CHECK(red[2] == 1.0);
    for (int g = 0; g < 256; ++g) {
        const auto ycc = rgb_to_ycbcr({g / 255.0, g / 255.0, g / 255.0});
        REQUIRE(ycc[0] == doctest::Approx(g / 255.0).epsilon(1e-12));
        REQUIRE(std::abs(ycc[1] - 0.5) < 1e-12);
        REQUIRE(std::abs(ycc[2] - 0.5) < 1e-12);
    }
    ImageBuffer gray(8, 8);
    for (auto& v : gray.data()) v = 128;
    const ColorPlanes lab = convert_colorspace(gray, ColorSpace::CIELAB);
    const double expect = oracle::naive_rgb_to_lab(128 / 255.0, 128 / 255.0, 128 / 255.0)[0];
    CHECK(std::abs(lab.at(0, 3, 3) - expect) < 1e-3);
    CHECK(std::abs(lab.at(0, 3, 3) - 53.585) < 1e-2);
    CHECK(std::abs(lab.at(1, 3, 3)) < 1e-3);
    CHECK(std::abs(lab.at(2, 3, 3)) < 1e-3);
}

TEST_CASE("to_rgb inverts convert_colorspace") {
    const ImageBuffer img = testing::noise_image(9, 9, 4);
    for (auto space : {ColorSpace::YCbCr, ColorSpace::HSV, ColorSpace::CIELAB}) {
        const ImageBuffer back = to_rgb(convert_colorspace(img, space)).clamp_quantize();
        for (std::size_t i = 0; i < img.data().size(); ++i)
            REQUIRE(std::abs(int(back.data()[i]) - int(img.data()[i])) <= 1);
    }
}

TEST_CASE("convolution identities") {
    const ImageBuffer img = testing::noise_image(12, 10, 1);
    CHECK(convolve(img, Kernel::identity()) == img);
    ImageBuffer flat(16, 14);
    for (auto& v : flat.data()) v = 77;
    CHECK(convolve(flat, Kernel::box(5)) == flat);
    CHECK(convolve(flat, Kernel::gaussian(1.5)) == flat);
    CHECK(convolve(flat, Kernel::disk(2.5)) == flat);
    CHECK(convolve(flat, Kernel::motion(5, 0.7)) == flat);
    CHECK_THROWS_AS(convolve(img, Kernel::gaussian(1.5)), ImageError);  // 11x11 does not fit 12x10
    CHECK_THROWS_AS(Kernel(2, 3, std::vector<double>(6, 1.0)), ImageError);
    CHECK(Kernel::gaussian(1.0).sum() == doctest::Approx(1.0));
}

TEST_CASE("resample identity and interpolation endpoints") {
    const ImageBuffer img = testing::noise_image(13, 9, 2);
    CHECK(resample(img, 13, 9, ResampleFilter::Bilinear) == img);
    CHECK(resample(img, 13, 9, ResampleFilter::Bicubic) == img);

    ImageBuffer checker(2, 2);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x)
            for (int c = 0; c < 3; ++c) checker.at(x, y, c) = (x + y) % 2 ? 255 : 0;
    const ImageBuffer up = resample(checker, 4, 4, ResampleFilter::Bilinear);
    CHECK(up.at(0, 0, 0) == checker.at(0, 0, 0));
    CHECK(up.at(3, 0, 0) == checker.at(1, 0, 0));
    CHECK(up.at(0, 3, 0) == checker.at(0, 1, 0));
    CHECK(up.at(3, 3, 0) == checker.at(1, 1, 0));

    FloatImage ramp(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x)
            for (int c = 0; c < 3; ++c) ramp.at(x, y, c) = (x + 4 * y) / 15.0;
    const FloatImage down = resample(ramp, 2, 2, ResampleFilter::Bilinear);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) {
            double avg = 0;
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 2; ++i) avg += ramp.at(2 * x + i, 2 * y + j, 0) / 4;
            CHECK(down.at(x, y, 0) == doctest::Approx(avg).epsilon(1e-12));
        }
}

TEST_CASE("psnr arithmetic") {
    const ImageBuffer img = testing::noise_image(10, 10, 8);
    CHECK(psnr(img, img) == kPsnrIdentical);
    CHECK(std::isinf(psnr(img, img)));
    ImageBuffer black(10, 10), white(10, 10);
    for (auto& v : white.data()) v = 255;
    CHECK(psnr(black, white) == doctest::Approx(0.0));
    ImageBuffer off = black;
    off.at(4, 4, 1) = 1;
    CHECK(mse(black, off) == doctest::Approx(1.0 / 300.0));
    CHECK(psnr(black, off) == doctest::Approx(10.0 * std::log10(255.0 * 255.0 * 300.0)));
    CHECK_THROWS_AS(psnr(black, ImageBuffer(10, 9)), ImageError);
}

TEST_CASE("image io round trips and failures") {
    testing::ScratchDir dir("io");
    const ImageBuffer img = testing::noise_image(16, 16, 21);
    for (const char* name : {"a.png", "a.ppm", "a.p6"}) {
        write_image(img, dir / name);
        CHECK(read_image(dir / name) == img);
    }
    auto bytes = read_file_bytes(dir / "a.png");
    bytes.resize(bytes.size() / 2);
    write_file_bytes(dir / "cut.png", bytes);
    CHECK_THROWS_AS(read_image(dir / "cut.png"), ImageIoError);
    testing::write_text(dir / "junk.png", "not an image");
    CHECK_THROWS_AS(read_image(dir / "junk.png"), ImageIoError);
    CHECK_THROWS_AS(read_image(dir / "missing.png"), ImageIoError);

    testing::write_text(dir / "tiny.ppm", "P3\n# fixture\n2 2\n255\n255 0 0  0 255 0\n0 0 255  10 20 30\n");
    const ImageBuffer tiny = read_image(dir / "tiny.ppm");
    const std::vector<std::uint8_t> expect = {255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 20, 30};
    CHECK(tiny.width() == 2);
    CHECK(tiny.height() == 2);
    CHECK(std::vector<std::uint8_t>(tiny.data().begin(), tiny.data().end()) == expect);
}

}
