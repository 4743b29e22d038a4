#include "vispath/overlay.hpp"

#include <cmath>

namespace vispath {

namespace {

void put(RgbImage& img, int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (img.in_bounds(x, y)) img.set(x, y, r, g, b);
}

void put_thick(RgbImage& img, int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) put(img, x + dx, y + dy, r, g, b);
}

void draw_plus(RgbImage& img, int x, int y, int arm, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    for (int k = -arm; k <= arm; ++k) {
        put(img, x + k, y, r, g, b);
        put(img, x, y + k, r, g, b);
    }
}

void draw_asterisk(RgbImage& img, int x, int y, int arm, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b) {
    for (int k = -arm; k <= arm; ++k) {
        put(img, x + k, y, r, g, b);
        put(img, x, y + k, r, g, b);
        put(img, x + k, y + k, r, g, b);
        put(img, x + k, y - k, r, g, b);
    }
}

RgbImage gray_base(const GrayImage& terrain) {
    RgbImage img(terrain.width, terrain.height);
    for (int y = 0; y < terrain.height; ++y)
        for (int x = 0; x < terrain.width; ++x) {
            std::uint8_t v = terrain.at(x, y);
            img.set(x, y, v, v, v);
        }
    return img;
}

}  // namespace

void draw_line(RgbImage& img, Point a, Point b, std::uint8_t r, std::uint8_t g, std::uint8_t b_) {
    int x0 = static_cast<int>(std::lround(a.x)), y0 = static_cast<int>(std::lround(a.y));
    int x1 = static_cast<int>(std::lround(b.x)), y1 = static_cast<int>(std::lround(b.y));
    int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        put(img, x0, y0, r, g, b_);
        if (x0 == x1 && y0 == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

RgbImage render_overlay(const PlanningScene& scene, const WaypointGraph& graph,
                        const PlanResult& result) {
    RgbImage img = gray_base(scene.terrain);
    for (const LineSegment& s : scene.obstacles) draw_line(img, s.head, s.tail, 230, 40, 40);
    for (size_t i = 0; i < graph.candidates.size(); ++i) {
        const FeaturePoint& f = graph.candidates[i];
        if (graph.node_sources[i] == CornerSource::DisparityMap)
            draw_asterisk(img, f.x, f.y, 3, 230, 40, 40);
        else
            draw_plus(img, f.x, f.y, 3, 40, 200, 40);
    }
    for (size_t i = 0; i + 1 < result.waypoints.size(); ++i) {
        draw_line(img, result.waypoints[i], result.waypoints[i + 1], 40, 80, 255);
    }
    for (const Point& p : result.waypoints)
        put_thick(img, static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y)), 40,
                  80, 255);
    // Start: small blue square; goal: red dot.
    const int sx = scene.start.x, sy = scene.start.y;
    for (int dy = -3; dy <= 3; ++dy)
        for (int dx = -3; dx <= 3; ++dx)
            if (std::abs(dx) == 3 || std::abs(dy) == 3) put(img, sx + dx, sy + dy, 40, 80, 255);
    put_thick(img, scene.goal.x, scene.goal.y, 230, 40, 40);
    return img;
}

RgbImage render_grid_overlay(const PlanningScene& scene, const OccupancyGrid* grid,
                             const PlanResult& result) {
    RgbImage img = gray_base(scene.terrain);
    if (grid) {
        for (int cy = 0; cy < grid->height; ++cy)
            for (int cx = 0; cx < grid->width; ++cx) {
                if (!grid->at(cx, cy)) continue;
                for (int py = cy * grid->cell_size;
                     py < (cy + 1) * grid->cell_size && py < img.height; ++py)
                    for (int px = cx * grid->cell_size;
                         px < (cx + 1) * grid->cell_size && px < img.width; ++px) {
                        auto* p = img.px(px, py);
                        p[0] = static_cast<std::uint8_t>(std::min(255, p[0] / 2 + 100));
                        p[1] = p[1] / 3;
                        p[2] = p[2] / 3;
                    }
            }
    }
    for (size_t i = 0; i + 1 < result.waypoints.size(); ++i)
        draw_line(img, result.waypoints[i], result.waypoints[i + 1], 40, 80, 255);
    return img;
}

}  // namespace vispath
