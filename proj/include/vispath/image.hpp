#pragma once

#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "vispath/error.hpp"

namespace vispath {

/// Row-major single-channel raster. GrayImage carries 8-bit intensities,
/// RealImage carries intermediate results (gradients, blurred images,
/// disparity costs) at full precision.
template <typename T>
struct Image {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Image() = default;
    Image(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
        if (w < 1 || h < 1) fail(Err::InvalidArgument, "image dims must be >= 1");
    }

    T& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    const T& at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

    /// Replicate-border access: coordinates clamp to the valid range.
    const T& at_clamped(int x, int y) const {
        if (x < 0) x = 0;
        if (x >= width) x = width - 1;
        if (y < 0) y = 0;
        if (y >= height) y = height - 1;
        return at(x, y);
    }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }

    bool operator==(const Image&) const = default;
};

using GrayImage = Image<std::uint8_t>;
using RealImage = Image<double>;

/// Row-major interleaved (r,g,b) raster, 8 bits per channel.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 * width * height

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(static_cast<size_t>(w) * h * 3, 0) {
        if (w < 1 || h < 1) fail(Err::InvalidArgument, "image dims must be >= 1");
    }

    std::uint8_t* px(int x, int y) { return &data[(static_cast<size_t>(y) * width + x) * 3]; }
    const std::uint8_t* px(int x, int y) const { return &data[(static_cast<size_t>(y) * width + x) * 3]; }

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        auto* p = px(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    bool operator==(const RgbImage&) const = default;
};

/// Square odd-size convolution kernel, weights row-major.
struct Kernel {
    int size = 1;
    std::vector<double> weights;

    Kernel() : weights(1, 1.0) {}
    Kernel(int n, std::vector<double> w) : size(n), weights(std::move(w)) {
        if (n < 1 || n % 2 == 0) fail(Err::InvalidArgument, "kernel size must be odd and >= 1");
        if (weights.size() != static_cast<size_t>(n) * n)
            fail(Err::InvalidArgument, "kernel weight count does not match size");
    }

    double at(int i, int j) const { return weights[static_cast<size_t>(j) * size + i]; }
};

using PnmImage = std::variant<GrayImage, RgbImage>;

/// Reads a binary PNM file (P5 gray or P6 rgb, maxval 255).
/// '#' comment lines in the header are accepted, never written back.
PnmImage load_pnm(const std::filesystem::path& path);

/// Writes "P5\n<w> <h>\n255\n" followed by raw bytes. load(save(x)) == x.
void save_pnm(const GrayImage& image, const std::filesystem::path& path);
void save_pnm(const RgbImage& image, const std::filesystem::path& path);

/// BT.601 luma: gray = round(0.299 r + 0.587 g + 0.114 b).
GrayImage to_gray(const RgbImage& image);

RealImage to_real(const GrayImage& image);

/// Quantizes to [0,255] with rounding and clamping.
GrayImage to_gray8(const RealImage& image);

/// Correlation-style filtering (kernel applied without flip) with replicate
/// borders: out[y][x] = sum_k k[j][i] * in[clamp(y+j-c)][clamp(x+i-c)].
RealImage convolve(const RealImage& image, const Kernel& kernel);
RealImage convolve(const GrayImage& image, const Kernel& kernel);

}  // namespace vispath
