#include "vispath/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace vispath {

const std::array<std::pair<int, int>, 16>& bresenham_circle16() {
    // Clockwise from the top pixel, image y growing downward.
    static const std::array<std::pair<int, int>, 16> ring = {{
        {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0}, {3, 1}, {2, 2}, {1, 3},
        {0, 3}, {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3},
    }};
    return ring;
}

namespace {

// Longest circular run of set bits in a 16-bit mask, plus its start index.
// A run starts where the predecessor bit is clear; the all-set ring is a
// single run starting at 0.
std::pair<int, int> longest_circular_run(const std::array<bool, 16>& flag) {
    int set_count = 0;
    for (bool b : flag) set_count += b;
    if (set_count == 16) return {16, 0};
    int best_len = 0, best_start = 0;
    for (int s = 0; s < 16; ++s) {
        if (!flag[s] || flag[(s + 15) % 16]) continue;
        int len = 1;
        while (len < 16 && flag[(s + len) % 16]) ++len;
        if (len > best_len) {
            best_len = len;
            best_start = s;
        }
    }
    return {best_len, best_start};
}

}  // namespace

std::vector<Corner> fast_detect(const RealImage& image, double t, int n, CornerSource source) {
    if (!(t > 0.0)) fail(Err::InvalidArgument, "contrast threshold must be > 0");
    if (n < 9 || n > 16) fail(Err::InvalidArgument, "arc length must be in [9,16]");
    if (image.width < 7 || image.height < 7) fail(Err::ImageTooSmall, "fast_detect needs >= 7x7");

    const auto& ring = bresenham_circle16();
    std::vector<Corner> corners;
    for (int y = 3; y < image.height - 3; ++y) {
        for (int x = 3; x < image.width - 3; ++x) {
            const double center = image.at(x, y);
            std::array<double, 16> v;
            for (int k = 0; k < 16; ++k) v[k] = image.at(x + ring[k].first, y + ring[k].second);

            std::array<bool, 16> bright{}, dark{};
            int nb = 0, nd = 0;
            for (int k = 0; k < 16; ++k) {
                bright[k] = v[k] > center + t;
                dark[k] = v[k] < center - t;
                nb += bright[k];
                nd += dark[k];
            }
            // With n >= 9, only one polarity can qualify.
            double score = 0.0;
            bool hit = false;
            if (nb >= n) {
                auto [len, start] = longest_circular_run(bright);
                if (len >= n) {
                    hit = true;
                    for (int k = 0; k < len; ++k) score += std::abs(v[(start + k) % 16] - center);
                }
            }
            if (!hit && nd >= n) {
                auto [len, start] = longest_circular_run(dark);
                if (len >= n) {
                    hit = true;
                    for (int k = 0; k < len; ++k) score += std::abs(v[(start + k) % 16] - center);
                }
            }
            if (hit) corners.push_back({x, y, score, source});
        }
    }
    return corners;
}

std::vector<Corner> fast_detect(const GrayImage& image, double t, int n, CornerSource source) {
    return fast_detect(to_real(image), t, n, source);
}

namespace {

bool corner_order(const Corner& a, const Corner& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
}

}  // namespace

std::vector<Corner> nms_corners(const std::vector<Corner>& corners, int radius) {
    if (radius < 1) fail(Err::InvalidArgument, "nms radius must be >= 1");
    std::vector<Corner> sorted = corners;
    std::sort(sorted.begin(), sorted.end(), corner_order);
    std::vector<Corner> kept;
    for (const Corner& c : sorted) {
        bool suppressed = false;
        for (const Corner& k : kept) {
            if (std::max(std::abs(c.x - k.x), std::abs(c.y - k.y)) <= radius) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(c);
    }
    return kept;
}

std::vector<Corner> merge_corner_sources(const std::vector<Corner>& image_corners,
                                         const std::vector<Corner>& disparity_corners) {
    std::vector<Corner> all = image_corners;
    all.insert(all.end(), disparity_corners.begin(), disparity_corners.end());
    std::sort(all.begin(), all.end(), corner_order);
    std::vector<Corner> merged;
    for (const Corner& c : all) {
        bool dup = false;
        for (const Corner& k : merged) {
            if (std::max(std::abs(c.x - k.x), std::abs(c.y - k.y)) <= 2) {
                dup = true;
                break;
            }
        }
        if (!dup) merged.push_back(c);
    }
    return merged;
}

std::vector<FeaturePoint> filter_candidates(const std::vector<Corner>& corners,
                                            const DisparityMap& disparity,
                                            const FeaturePoint& start, const FeaturePoint& goal,
                                            double tol) {
    if (tol < 0.0) fail(Err::InvalidArgument, "tol must be >= 0");
    if (std::abs(start.value - goal.value) > 2.0 * tol)
        fail(Err::StartGoalDisparityMismatch,
             "start/goal disparity gap " + std::to_string(std::abs(start.value - goal.value)) +
                 " exceeds 2*tol");
    const double ref = 0.5 * (start.value + goal.value);
    std::vector<FeaturePoint> out;
    for (const Corner& c : corners) {
        if (!disparity.in_bounds(c.x, c.y) || !disparity.valid(c.x, c.y)) continue;
        double d = disparity.at(c.x, c.y);
        if (std::abs(d - ref) <= tol) out.push_back({c.x, c.y, d});
    }
    return out;
}

double hmatrix_score(const RealImage& image, int x, int y, int radius) {
    GradientField g = sobel(image);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int j = -radius; j <= radius; ++j)
        for (int i = -radius; i <= radius; ++i) {
            double gx = g.gx.at_clamped(x + i, y + j);
            double gy = g.gy.at_clamped(x + i, y + j);
            sxx += gx * gx;
            syy += gy * gy;
            sxy += gx * gy;
        }
    double trace = sxx + syy;
    if (trace == 0.0) return 0.0;
    return (sxx * syy - sxy * sxy) / trace;
}

}  // namespace vispath
