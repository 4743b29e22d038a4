#pragma once

#include <vector>

#include "vispath/image.hpp"

namespace vispath {

/// Rectified rig intrinsics: focal length in pixels and half baseline l in
/// meters (full baseline T = 2l).
struct StereoRig {
    double focal = 0.0;
    double half_baseline = 0.0;
};

/// Left-referenced per-pixel disparity in pixels; kInvalid marks pixels
/// without full window/search support or failing the uniqueness check.
struct DisparityMap {
    static constexpr float kInvalid = -1.0f;

    int width = 0;
    int height = 0;
    std::vector<float> d;
    int omega = 0;   // maximum disparity searched
    int window = 0;  // odd block size actually used

    DisparityMap() = default;
    DisparityMap(int w, int h, int om, int win)
        : width(w), height(h), d(static_cast<size_t>(w) * h, kInvalid), omega(om), window(win) {}

    float at(int x, int y) const { return d[static_cast<size_t>(y) * width + x]; }
    float& at(int x, int y) { return d[static_cast<size_t>(y) * width + x]; }
    bool valid(int x, int y) const { return at(x, y) >= 0.0f; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    size_t valid_count() const;

    /// Raw disparity values as a real raster, invalid pixels as 0.
    RealImage to_raster() const;

    /// Visualization raster: round(d / omega * 255), invalid as 0.
    GrayImage to_gray() const;
};

}  // namespace vispath
