#include <algorithm>
#include <numeric>

#include "robulink/corrupt/dimensions.hpp"
#include "robulink/corrupt/ops.hpp"
#include "robulink/rng.hpp"

namespace robulink {

namespace {

void copy_block(const ImageBuffer& src, const BlockRect& from, ImageBuffer& dst, const BlockRect& to) {
    for (int y = 0; y < from.height; ++y) {
        for (int x = 0; x < from.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                dst.at(to.x + x, to.y + y, c) = src.at(from.x + x, from.y + y, c);
            }
        }
    }
}

void interpolate_block(const ImageBuffer& src, const BlockRect& r, ImageBuffer& dst) {
    const int x0 = r.x - 1;
    const int x1 = r.x + r.width;
    const int y0 = r.y - 1;
    const int y1 = r.y + r.height;
    const bool has_left = x0 >= 0;
    const bool has_right = x1 < src.width();
    const bool has_top = y0 >= 0;
    const bool has_bottom = y1 < src.height();

    for (int y = r.y; y < r.y + r.height; ++y) {
        for (int x = r.x; x < r.x + r.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double sum = 0.0;
                int estimates = 0;
                // Horizontal and vertical linear estimates; each needs both sides.
                if (has_left && has_right) {
                    const double t = static_cast<double>(x - x0) / (x1 - x0);
                    sum += (1.0 - t) * src.at(x0, y, c) + t * src.at(x1, y, c);
                    ++estimates;
                }
                if (has_top && has_bottom) {
                    const double t = static_cast<double>(y - y0) / (y1 - y0);
                    sum += (1.0 - t) * src.at(x, y0, c) + t * src.at(x, y1, c);
                    ++estimates;
                }
                if (estimates == 0) {
                    // Corner of the image: fall back to the mean of whichever borders exist.
                    if (has_left) { sum += src.at(x0, y, c); ++estimates; }
                    if (has_right) { sum += src.at(x1, y, c); ++estimates; }
                    if (has_top) { sum += src.at(x, y0, c); ++estimates; }
                    if (has_bottom) { sum += src.at(x, y1, c); ++estimates; }
                }
                dst.at(x, y, c) = estimates > 0 ? quantize_sample(sum / estimates / 255.0) : src.at(x, y, c);
            }
        }
    }
}

std::vector<int> shuffled_indices(int n, SubStream& rng) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    return idx;
}

void clamp_warning(CorruptionMetadata& meta, std::string_view what, int requested, int available) {
    meta.warnings.push_back(std::string(what) + ": requested " + std::to_string(requested) +
                            " blocks, only " + std::to_string(available) + " available; clamped");
}

}  // namespace

OpResult corrupt_blocks(const ImageBuffer& img, BlockFault kind, int block_size, int count, std::uint64_t key) {
    if (count < 1) {
        throw CorruptionError("block count must be at least 1");
    }
    if (block_size < 2) {
        throw CorruptionError("block size must be at least 2");
    }
    if (img.width() <= block_size && img.height() <= block_size) {
        throw CorruptionError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                              " is not larger than one " + std::to_string(block_size) + "px block");
    }
    const BlockGrid grid(img.width(), img.height(), block_size);
    SubStream rng(key);
    OpResult result{img, {}};
    auto& meta = result.meta;

    switch (kind) {
        case BlockFault::Exchange: {
            std::vector<int> full;
            for (int i = 0; i < grid.count(); ++i) {
                if (grid.is_full(i)) {
                    full.push_back(i);
                }
            }
            rng.shuffle(full);
            const int max_pairs = static_cast<int>(full.size()) / 2;
            int pairs = count;
            if (pairs > max_pairs) {
                clamp_warning(meta, "block exchange", count, max_pairs);
                pairs = max_pairs;
            }
            for (int p = 0; p < pairs; ++p) {
                const BlockRect a = grid.block(full[2 * p]);
                const BlockRect b = grid.block(full[2 * p + 1]);
                copy_block(img, a, result.image, b);
                copy_block(img, b, result.image, a);
                meta.regions.push_back(a);
                meta.regions.push_back(b);
            }
            break;
        }
        case BlockFault::Repeat: {
            std::vector<int> target_of(grid.count(), -1);
            for (int i = 0; i < grid.count(); ++i) {
                if (!grid.is_full(i)) {
                    continue;
                }
                const int col = i % grid.cols();
                const int right = i + 1;
                const int left = i - 1;
                if (col + 1 < grid.cols() && grid.is_full(right)) {
                    target_of[i] = right;
                } else if (col > 0 && grid.is_full(left)) {
                    target_of[i] = left;
                }
            }
            std::vector<char> taken(grid.count(), 0);
            int done = 0;
            for (int src : shuffled_indices(grid.count(), rng)) {
                if (done == count) {
                    break;
                }
                const int dst = target_of[src];
                if (dst < 0 || taken[dst]) {
                    continue;
                }
                taken[dst] = 1;
                copy_block(img, grid.block(src), result.image, grid.block(dst));
                meta.regions.push_back(grid.block(dst));
                ++done;
            }
            if (done < count) {
                clamp_warning(meta, "block repeat", count, done);
            }
            break;
        }
        case BlockFault::Lost:
        case BlockFault::Interpolate: {
            int n = count;
            if (n > grid.count()) {
                clamp_warning(meta, kind == BlockFault::Lost ? "block lost" : "block interpolation", count,
                              grid.count());
                n = grid.count();
            }
            auto order = shuffled_indices(grid.count(), rng);
            order.resize(n);
            std::sort(order.begin(), order.end());
            for (int index : order) {
                const BlockRect r = grid.block(index);
                if (kind == BlockFault::Lost) {
                    for (int y = r.y; y < r.y + r.height; ++y) {
                        for (int x = r.x; x < r.x + r.width; ++x) {
                            for (int c = 0; c < 3; ++c) {
                                result.image.at(x, y, c) = static_cast<std::uint8_t>(rng.below(256));
                            }
                        }
                    }
                } else {
                    interpolate_block(img, r, result.image);
                }
                meta.regions.push_back(r);
            }
            break;
        }
    }
    return result;
}

}  // namespace robulink
