#pragma once

#include <vector>

#include "vispath/edges.hpp"
#include "vispath/geometry.hpp"

namespace vispath {

struct HoughLineConfig {
    double rho_res = 1.0;                     // accumulator rho step, pixels
    double theta_res = 3.14159265358979323846 / 180.0;  // 1 degree
    int vote_threshold = 30;
    double min_len = 16.0;   // shortest emitted segment, pixels
    double max_gap = 5.0;    // largest bridged run of missing pixels
    double max_len = 0.0;    // split runs longer than this; 0 disables
};

struct CircleDetection {
    Point center;
    int radius = 0;
    double score = 0.0;  // perimeter coverage fraction in [0,1]
};

/// Standard (rho, theta) accumulator over edge pixels with
/// rho = x cos(theta) + y sin(theta), followed by a walk along each peak
/// line that emits maximal edge-pixel runs (gaps <= max_gap bridged, runs
/// >= min_len kept). Pixels consumed by an emitted run stop supporting
/// later peaks, which suppresses near-duplicate lines from adjacent bins.
std::vector<LineSegment> hough_segments(const EdgeMap& edges, const HoughLineConfig& cfg);

/// Single-linkage clustering of segment endpoints under Euclidean distance
/// <= merge_radius; each cluster is replaced by its centroid rounded to the
/// nearest pixel. Segments whose endpoints collapse together are dropped.
std::vector<LineSegment> merge_nodes(const std::vector<LineSegment>& segments, double merge_radius);

/// Two-phase circle Hough transform: phase 1 votes centers per fixed radius,
/// phase 2 picks the radius maximizing perimeter coverage for surviving
/// centers. Detections with coverage >= (1 - sensitivity + 0.1) are kept,
/// sorted by score descending.
std::vector<CircleDetection> hough_circles(const EdgeMap& edges, int r_min, int r_max,
                                           double sensitivity);

/// Coverage fraction of the rasterized circle (a,b,r): a perimeter pixel is
/// covered when an edge pixel lies within Chebyshev distance 1 of it.
double circle_coverage(const EdgeMap& edges, Point center, int radius);

}  // namespace vispath
