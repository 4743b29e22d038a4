#pragma once

#include <cstdint>

#include "vispath/planner.hpp"

namespace vispath {

struct OccupancyGrid {
    int width = 0;   // cells
    int height = 0;  // cells
    int cell_size = 1;  // pixels per cell
    std::vector<std::uint8_t> occupied;

    OccupancyGrid() = default;
    OccupancyGrid(int w, int h, int cs)
        : width(w), height(h), cell_size(cs), occupied(static_cast<size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return occupied[static_cast<size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { occupied[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    Point cell_center(int cx, int cy) const {
        return {cx * static_cast<double>(cell_size) + (cell_size - 1) / 2.0,
                cy * static_cast<double>(cell_size) + (cell_size - 1) / 2.0};
    }

    /// P5 export, occupied = 0, free = 255.
    GrayImage to_gray() const;
};

struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
};

struct PrmConfig {
    int n_samples = 3000;
    int k_neighbors = 12;
    std::uint64_t seed = 42;
};

/// SplitMix64: the documented deterministic generator behind PRM sampling.
/// state += 0x9E3779B97F4A7C15; z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
/// z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    /// next() % bound — the documented (slightly biased, reproducible) map.
    std::uint64_t next_below(std::uint64_t bound);
};

/// Occupancy from the intensity-only obstacle segments: a cell is occupied
/// iff a segment passes through it (supercover), then dilated by
/// `inflation` cells (Chebyshev). Start/goal cells hit by a raw segment
/// raise StartInObstacle/GoalInObstacle; cells occupied only by inflation
/// are forced free.
OccupancyGrid rasterize(const PlanningScene& scene, int cell_size, int inflation);

/// All cells the continuous segment from a to b (pixel coords) passes
/// through, including both cells at exact corner crossings.
std::vector<Cell> supercover_cells(Point a, Point b, int cell_size);

/// 8-connected A*: move costs 1 and sqrt(2), octile heuristic; diagonal
/// steps are forbidden when both orthogonal neighbors are occupied.
/// Waypoints are cell centers in pixel coordinates.
PlanResult astar(const OccupancyGrid& grid, Cell start, Cell goal);

/// Seeded PRM: n_samples free cells by rejection sampling, k-nearest
/// neighbor connections when the supercover cell line is free, Dijkstra on
/// the roadmap. Fully deterministic in (grid, config).
PlanResult prm(const OccupancyGrid& grid, const PrmConfig& cfg, Cell start, Cell goal);

Cell cell_of_point(const OccupancyGrid& grid, Point p);

}  // namespace vispath
