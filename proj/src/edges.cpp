#include "vispath/edges.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace vispath {

size_t EdgeMap::count() const {
    return static_cast<size_t>(std::count(on.begin(), on.end(), std::uint8_t{1}));
}

GrayImage EdgeMap::to_gray() const {
    GrayImage out(width, height);
    for (size_t i = 0; i < on.size(); ++i) out.data[i] = on[i] ? 255 : 0;
    return out;
}

namespace {

std::vector<double> gaussian_taps(double sigma) {
    int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        double v = std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));
        taps[k + radius] = v;
        sum += v;
    }
    for (double& v : taps) v /= sum;
    return taps;
}

}  // namespace

RealImage gaussian_blur(const RealImage& image, double sigma) {
    if (!(sigma > 0.0)) fail(Err::NonPositiveSigma, "sigma must be > 0");
    const std::vector<double> taps = gaussian_taps(sigma);
    const int radius = static_cast<int>(taps.size()) / 2;

    RealImage tmp(image.width, image.height);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * image.at_clamped(x + k, y);
            tmp.at(x, y) = acc;
        }
    RealImage out(image.width, image.height);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * tmp.at_clamped(x, y + k);
            out.at(x, y) = acc;
        }
    return out;
}

RealImage gaussian_blur(const GrayImage& image, double sigma) {
    return gaussian_blur(to_real(image), sigma);
}

GradientField sobel(const RealImage& image) {
    if (image.width < 3 || image.height < 3) fail(Err::ImageTooSmall, "sobel needs >= 3x3");
    static const Kernel kx(3, {-1, 0, 1, -2, 0, 2, -1, 0, 1});
    static const Kernel ky(3, {-1, -2, -1, 0, 0, 0, 1, 2, 1});
    GradientField f;
    f.gx = convolve(image, kx);
    f.gy = convolve(image, ky);
    f.magnitude = RealImage(image.width, image.height);
    f.direction = RealImage(image.width, image.height);
    for (size_t i = 0; i < f.magnitude.data.size(); ++i) {
        f.magnitude.data[i] = std::hypot(f.gx.data[i], f.gy.data[i]);
        f.direction.data[i] = std::atan2(f.gy.data[i], f.gx.data[i]);
    }
    return f;
}

namespace {

// Quantizes a gradient direction into one of 4 axes and returns the pixel
// step along that axis: 0deg -> (1,0), 45deg -> (1,1), 90deg -> (0,1),
// 135deg -> (-1,1).
std::pair<int, int> quantized_step(double gx, double gy) {
    double angle = std::atan2(gy, gx);
    if (angle < 0) angle += 3.14159265358979323846;  // direction is axial
    double deg = angle * 180.0 / 3.14159265358979323846;
    if (deg < 22.5 || deg >= 157.5) return {1, 0};
    if (deg < 67.5) return {1, 1};
    if (deg < 112.5) return {0, 1};
    return {-1, 1};
}

EdgeMap canny_impl(const GrayImage& image, double sigma, double low, double high, bool fractional) {
    if (!(sigma > 0.0)) fail(Err::NonPositiveSigma, "sigma must be > 0");
    if (low < 0.0 || !(low < high)) fail(Err::BadThresholds, "need 0 <= low < high");

    RealImage blurred = gaussian_blur(image, sigma);
    GradientField g = sobel(blurred);

    if (fractional) {
        double maxmag = 0.0;
        for (double v : g.magnitude.data) maxmag = std::max(maxmag, v);
        low *= maxmag;
        high *= maxmag;
    }

    const int w = image.width, h = image.height;

    // Non-maximum suppression. The one-sided >= / > pair breaks exact ties
    // deterministically so plateau ridges stay one pixel wide.
    RealImage nms(w, h, 0.0);
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            double mag = g.magnitude.at(x, y);
            if (mag <= 0.0) continue;
            auto [dx, dy] = quantized_step(g.gx.at(x, y), g.gy.at(x, y));
            double fwd = g.magnitude.at(x + dx, y + dy);
            double bwd = g.magnitude.at(x - dx, y - dy);
            if (mag >= fwd && mag > bwd) nms.at(x, y) = mag;
        }
    }

    // Survivors whose own quantized direction still has candidates on both
    // sides (direction-bin transitions, crossings) are dropped. Evaluated
    // against the pre-prune raster, so the result is order-independent and
    // shrinking the set cannot create new violations.
    RealImage pruned = nms;
    for (int y = 1; y < h - 1; ++y)
        for (int x = 1; x < w - 1; ++x) {
            if (nms.at(x, y) <= 0.0) continue;
            auto [dx, dy] = quantized_step(g.gx.at(x, y), g.gy.at(x, y));
            if (nms.at(x + dx, y + dy) > 0.0 && nms.at(x - dx, y - dy) > 0.0)
                pruned.at(x, y) = 0.0;
        }
    nms = std::move(pruned);

    // Hysteresis: seed with strong pixels, flood through weak ones (8-conn).
    EdgeMap edges(w, h);
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (nms.at(x, y) >= high) {
                edges.set(x, y, true);
                stack.emplace_back(x, y);
            }
    while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                int nx = cx + dx, ny = cy + dy;
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                if (edges.at(nx, ny)) continue;
                double m = nms.at(nx, ny);
                if (m >= low && m < high) {
                    edges.set(nx, ny, true);
                    stack.emplace_back(nx, ny);
                }
            }
    }
    return edges;
}

}  // namespace

EdgeMap canny(const GrayImage& image, double sigma, double low, double high) {
    return canny_impl(image, sigma, low, high, false);
}

EdgeMap canny_auto(const GrayImage& image, double sigma, double low_frac, double high_frac) {
    return canny_impl(image, sigma, low_frac, high_frac, true);
}

}  // namespace vispath
