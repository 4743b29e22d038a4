#pragma once

#include <vector>

#include "vispath/features.hpp"
#include "vispath/geometry.hpp"
#include "vispath/hough.hpp"
#include "vispath/stereo_types.hpp"

namespace vispath {

struct VehicleSpec {
    double length = 24.0;  // pixels, length >= width > 0
    double width = 16.0;
};

/// Pipeline knobs with the project defaults. Hough min/max segment lengths
/// and the node-merge radius derive from the vehicle when left at 0.
struct PipelineConfig {
    int omega = 50;
    int window = 10;  // rounded up to 11 by block_match
    double sigma = 1.4;
    double canny_low_frac = 0.1;
    double canny_high_frac = 0.3;
    double fast_t_image = 20.0;
    double fast_t_disparity = 5.0;
    int fast_n = 12;
    int nms_radius = 8;
    double filter_tol = 3.0;  // disparity units
    HoughLineConfig hough{1.0, 3.14159265358979323846 / 180.0, 30, 0.0, 5.0, 0.0};
    double merge_radius = 0.0;   // 0 -> vehicle.width / 2
    int max_candidates = 500;
    double mask_margin = 4.0;    // fiducial exclusion margin, pixels
};

/// Everything the planner needs: rasters, detected obstacle boundaries (the
/// full set and the intensity-only subset the grid baselines are allowed to
/// see), merged corners, and the detected start/goal.
struct PlanningScene {
    GrayImage terrain;
    DisparityMap disparity;
    std::vector<LineSegment> obstacles;         // image + disparity derived
    std::vector<LineSegment> image_obstacles;   // intensity-only subset
    std::vector<Corner> corners;                // merged across sources
    FeaturePoint start;
    FeaturePoint goal;
    VehicleSpec vehicle;
};

struct PlanResult {
    std::vector<Point> waypoints;  // first == start, last == goal
    double length = 0.0;           // sum of consecutive Euclidean distances
    double elapsed = 0.0;          // seconds, graph build + search
    int candidates_considered = 0;
    int graph_edges = 0;
};

/// Visibility-style graph over {start} + filtered candidates + {goal};
/// node 0 is the start, the last node is the goal, candidates are ordered
/// row-major for determinism.
struct WaypointGraph {
    std::vector<Point> nodes;
    std::vector<FeaturePoint> candidates;  // provenance record (excl. start/goal)
    std::vector<std::vector<std::pair<int, double>>> adj;
    std::vector<CornerSource> node_sources;  // parallel to candidates
    int edge_count = 0;
    double build_seconds = 0.0;
    double clearance = 0.0;
};

/// Full perception pass: stereo block matching, marker and goal detection,
/// Canny + Hough on the terrain image and on the disparity raster (the
/// depth-derived boundaries are what make invisible craters plannable),
/// FAST corners on both rasters, merging, and suppression. The detected
/// marker quad and goal disk are masked out of the edge maps so the
/// fiducials themselves never register as obstacles.
PlanningScene assemble_scene(const GrayImage& left, const GrayImage& right,
                             const VehicleSpec& vehicle, const PipelineConfig& cfg);

/// Edge (u,v) exists iff the straight segment keeps clearance
/// vehicle.width/2 from every obstacle segment; weights are Euclidean.
/// When more than max_candidates corners survive filtering, the
/// highest-score ones are kept.
WaypointGraph build_graph(const PlanningScene& scene, double tol, int max_candidates = 500);

/// Deterministic Dijkstra (ties: fewer waypoints, then smaller predecessor
/// index). elapsed covers graph build + search. Throws NoPath.
PlanResult shortest_path(const WaypointGraph& graph);

/// assemble_scene -> build_graph -> shortest_path.
PlanResult plan(const GrayImage& left, const GrayImage& right, const VehicleSpec& vehicle,
                const PipelineConfig& cfg);

void save_plan_csv(const PlanResult& result, const std::filesystem::path& path);

}  // namespace vispath
