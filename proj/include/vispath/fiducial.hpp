#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "vispath/features.hpp"
#include "vispath/hough.hpp"
#include "vispath/image.hpp"

namespace vispath {

/// Square binary marker dictionary. Each code is a grid x grid payload
/// (surrounded by an implicit 1-cell black border when rendered); all codes
/// are pairwise distinguishable under every 90-degree rotation, and no code
/// matches a rotation of itself.
struct MarkerDictionary {
    int grid = 4;
    std::vector<std::vector<std::uint8_t>> codes;  // row-major bits, 1 = white cell

    /// The deterministic built-in 16-id, 4x4-payload dictionary.
    static const MarkerDictionary& standard();

    /// Generates `count` codes from the seed, enforcing the rotation
    /// distinguishability invariant. Throws InvalidArgument if violated
    /// inputs make that impossible.
    static MarkerDictionary generate(int grid, int count, std::uint64_t seed);

    void dump(const std::filesystem::path& path) const;
};

struct MarkerPose {
    int id = -1;
    Point center;     // sub-pixel, intersection of quad diagonals
    double yaw = 0.0; // radians in (-pi, pi], image +x axis to marker "up" edge
};

/// Detects the single dictionary marker in the image: adaptive threshold,
/// connected dark components, convex 4-vertex contour approximation,
/// perspective sampling of the (grid+2)^2 cell lattice, border check, and
/// payload match under 4 rotations.
/// Throws NotFound when nothing decodes and Ambiguous when two quads do.
MarkerPose detect_marker(const GrayImage& image, const MarkerDictionary& dict);

/// Pose plus the detected quad corners (pipeline consumers mask the marker
/// region out of obstacle detection).
struct MarkerDetection {
    MarkerPose pose;
    std::array<Point, 4> quad;
};
MarkerDetection detect_marker_detail(const GrayImage& image, const MarkerDictionary& dict);

/// Goal detection with the full circle record.
CircleDetection detect_goal_detail(const GrayImage& image);

/// Marker center rounded to the nearest pixel; value sampled from the
/// disparity map (nearest valid pixel) when one is supplied.
FeaturePoint initial_point(const MarkerPose& pose);
FeaturePoint initial_point(const MarkerPose& pose, const DisparityMap& disparity);

/// Locates the goal disk: Canny then circle Hough with the standard
/// parameters (r in [10,40], sensitivity 0.9); returns the center of the
/// highest-scoring detection. Throws GoalNotFound.
FeaturePoint detect_goal(const GrayImage& image);
FeaturePoint detect_goal(const GrayImage& image, const DisparityMap& disparity);

/// Renders a marker into the image: black border plus payload cells, white
/// quiet zone one cell wide, rotated so the marker "up" edge points along
/// (cos yaw, sin yaw). Values: white 232, black 24. Used by scenegen and the
/// detector tests.
void render_marker(GrayImage& image, const MarkerDictionary& dict, int id, Point center,
                   double yaw, double side);

}  // namespace vispath
