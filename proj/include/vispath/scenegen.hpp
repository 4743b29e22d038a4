#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "vispath/geometry.hpp"
#include "vispath/image.hpp"
#include "vispath/stereo_types.hpp"

namespace vispath {

enum class ObstacleKind { Box, Crater, Hill };

struct RectFootprint {
    double x = 0, y = 0, w = 0, h = 0;  // pixel-center membership: [x, x+w)
};

struct DiskFootprint {
    double cx = 0, cy = 0, r = 0;
};

/// One terrain feature. Boxes and craters are flat plateaus/depressions;
/// hills are radial cosine bumps (disk footprint required). height > 0 for
/// Box/Hill, < 0 for Crater. shade is the intensity offset rendered over
/// the footprint; 0 leaves the feature invisible in the intensity image.
struct ObstacleSpec {
    ObstacleKind kind = ObstacleKind::Box;
    std::variant<RectFootprint, DiskFootprint> footprint;
    double height = 0.0;
    double shade = 0.0;
};

struct MarkerPlacement {
    Point position;
    double yaw = 0.0;
    int id = 0;
    double side = 48.0;
};

struct GoalPlacement {
    Point position;
    double radius = 24.0;
};

/// Declarative synthetic world: obstacle layout, fiducials, stereo rig and
/// texture seed. Deterministic: identical spec renders identical bytes.
struct SceneSpec {
    std::string name = "scene";
    int width = 0;
    int height = 0;
    std::vector<ObstacleSpec> obstacles;
    MarkerPlacement marker;
    GoalPlacement goal;
    StereoRig rig{600.0, 0.0625};  // 2*f*l = 75
    double camera_height = 5.0;    // ground disparity = 2fl/camera_height
    std::uint64_t texture_seed = 1;
    bool reflective = false;  // zero texture variance in glare patches
};

struct TruthPolygon {
    ObstacleKind kind = ObstacleKind::Box;
    std::vector<Point> outline;
};

/// Ground truth exported with every render; the oracle side of the
/// forward-inverse tests.
struct SceneTruth {
    std::vector<TruthPolygon> obstacle_polygons;
    RealImage heightfield;
    Point start;
    Point goal;
    RealImage disparity;                // true disparity per left pixel
    std::vector<std::uint8_t> occluded; // left pixels hidden in the right view
};

struct StereoRender {
    GrayImage left;
    GrayImage right;
    SceneTruth truth;
};

/// Per-pixel elevation: ground 0, boxes/craters flat, hills cosine bumps.
/// Throws OverlapError when two footprints claim the same pixel.
RealImage build_heightfield(const SceneSpec& spec);

/// Orthographic top-down render: seeded value-noise texture, obstacle
/// shading, marker and goal disk, then a per-row forward warp by the
/// ground-truth disparity d = 2 f l / (camera_height - elevation) with
/// nearest-wins occlusion.
StereoRender render_stereo(const SceneSpec& spec);

/// The five built-in benchmark scenes: four sized like the reference test
/// scenes (759x763, 808x814, 808x814, 1500x1500) plus the hidden-crater
/// scene whose crater shows in the heightfield but not in the intensity
/// image.
std::vector<SceneSpec> preset_scenes();

SceneSpec parse_scene_spec(const std::filesystem::path& path);
void write_scene_spec(const SceneSpec& spec, const std::filesystem::path& path);

/// Truth export helpers: polygons as CSV (kind,i,x,y rows), heightfield as
/// a scaled P5 raster.
void save_truth_polygons(const SceneTruth& truth, const std::filesystem::path& path);
void save_truth_heightfield(const SceneTruth& truth, const std::filesystem::path& path);

}  // namespace vispath
