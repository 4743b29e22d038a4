#pragma once

#include "vispath/stereo_types.hpp"

namespace vispath {

/// SAD block matching over a rectified pair. For every left pixel whose
/// window and full disparity search range [0, omega] fit inside both
/// images, d = argmin SAD (ties toward smaller d). A match is kept only if
/// it is unique: best < 0.95 * second-best among shifts differing by more
/// than 1 px. Everything else is kInvalid. Even window sizes are rounded up
/// to the next odd value.
DisparityMap block_match(const GrayImage& left, const GrayImage& right, int window, int omega);

/// z = 2 f l / d (metric depth from disparity, baseline T = 2l).
double depth_from_disparity(double d, const StereoRig& rig);

/// Disparity at (x,y), falling back to the nearest valid pixel in expanding
/// Chebyshev rings (radius <= 32); 0 when none exists.
double nearest_valid_disparity(const DisparityMap& disparity, int x, int y);

/// Piecewise-linear blue->green->red colormap over [0, omega]; invalid
/// pixels are black.
RgbImage disparity_to_color(const DisparityMap& map);

/// Lossless record of valid pixels: "x,y,d" rows with a header line.
void save_disparity_csv(const DisparityMap& map, const std::filesystem::path& path);

}  // namespace vispath
