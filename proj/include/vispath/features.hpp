#pragma once

#include <array>
#include <utility>
#include <vector>

#include "vispath/edges.hpp"
#include "vispath/image.hpp"
#include "vispath/stereo_types.hpp"

namespace vispath {

enum class CornerSource { TerrainImage, DisparityMap };

/// Segment-test corner. score is the summed arc contrast |I(c) - I(p)| over
/// the longest qualifying arc.
struct Corner {
    int x = 0;
    int y = 0;
    double score = 0.0;
    CornerSource source = CornerSource::TerrainImage;
};

/// A pixel location tagged with the raster value it was sampled from
/// (intensity or disparity, depending on provenance).
struct FeaturePoint {
    int x = 0;
    int y = 0;
    double value = 0.0;
};

/// The 16 offsets of the radius-3 Bresenham circle, clockwise from the top.
const std::array<std::pair<int, int>, 16>& bresenham_circle16();

/// FAST segment test: p is a corner iff >= n contiguous circle pixels (with
/// wraparound) are all brighter than I(p)+t or all darker than I(p)-t.
/// Corners are only reported where the circle fits (3 <= x < w-3, same for y).
std::vector<Corner> fast_detect(const RealImage& image, double t, int n,
                                CornerSource source = CornerSource::TerrainImage);
std::vector<Corner> fast_detect(const GrayImage& image, double t, int n,
                                CornerSource source = CornerSource::TerrainImage);

/// Greedy suppression: sort by score descending (ties row-major), keep a
/// corner iff no kept corner lies within Chebyshev distance `radius`.
std::vector<Corner> nms_corners(const std::vector<Corner>& corners, int radius);

/// Merges corners from the terrain image and the disparity raster by
/// coordinate union; corners within 2 px collapse to the higher score.
std::vector<Corner> merge_corner_sources(const std::vector<Corner>& image_corners,
                                         const std::vector<Corner>& disparity_corners);

/// Waypoint candidate selection: keep corner c iff its disparity deviates
/// from the traversable-ground level (mean of start and goal values) by at
/// most tol. Corners on invalid-disparity pixels are dropped.
std::vector<FeaturePoint> filter_candidates(const std::vector<Corner>& corners,
                                            const DisparityMap& disparity,
                                            const FeaturePoint& start, const FeaturePoint& goal,
                                            double tol);

/// Gradient-matrix corner response f = det(H)/trace(H) with H accumulated
/// over a (2*radius+1)^2 window. Diagnostic scorer only; selection always
/// uses the segment test.
double hmatrix_score(const RealImage& image, int x, int y, int radius = 2);

}  // namespace vispath
