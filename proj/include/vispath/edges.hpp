#pragma once

#include "vispath/image.hpp"

namespace vispath {

/// First-order image gradients plus derived magnitude/direction rasters.
struct GradientField {
    RealImage gx;
    RealImage gy;
    RealImage magnitude;
    RealImage direction;  // atan2(gy, gx), radians in (-pi, pi]
};

struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> on;  // 1 = edge pixel

    EdgeMap() = default;
    EdgeMap(int w, int h) : width(w), height(h), on(static_cast<size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return on[static_cast<size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { on[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    size_t count() const;

    /// Debug export: on=255, off=0.
    GrayImage to_gray() const;
};

/// Separable Gaussian, kernel radius ceil(3*sigma), weights normalized to 1.
RealImage gaussian_blur(const RealImage& image, double sigma);
RealImage gaussian_blur(const GrayImage& image, double sigma);

/// 3x3 Sobel pair: gx = [-1 0 1; -2 0 2; -1 0 1], gy its transpose.
GradientField sobel(const RealImage& image);

/// Canny pipeline: blur -> sobel -> non-maximum suppression along one of 4
/// quantized gradient directions -> hysteresis flood from strong pixels.
/// Thresholds are absolute gradient magnitudes, 0 <= low < high.
EdgeMap canny(const GrayImage& image, double sigma, double low, double high);

/// Same pipeline with thresholds given as fractions of the max gradient
/// magnitude of the blurred image (the per-scene auto mode).
EdgeMap canny_auto(const GrayImage& image, double sigma, double low_frac, double high_frac);

}  // namespace vispath
