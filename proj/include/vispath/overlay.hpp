#pragma once

#include "vispath/baselines.hpp"
#include "vispath/planner.hpp"

namespace vispath {

/// Figure-style overlay on the terrain image: obstacle segments red,
/// terrain-image candidates green plus signs, disparity-map candidates red
/// asterisks, path blue, start a small blue square, goal a red dot.
RgbImage render_overlay(const PlanningScene& scene, const WaypointGraph& graph,
                        const PlanResult& result);

/// Overlay for grid baselines: occupied cells dimmed, path blue.
RgbImage render_grid_overlay(const PlanningScene& scene, const OccupancyGrid* grid,
                             const PlanResult& result);

void draw_line(RgbImage& img, Point a, Point b, std::uint8_t r, std::uint8_t g, std::uint8_t b_);

}  // namespace vispath
