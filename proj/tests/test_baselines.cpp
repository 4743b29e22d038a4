#include <doctest.h>

#include <cmath>
#include <queue>
#include <random>
#include <set>

#include "vispath/baselines.hpp"

using namespace vispath;

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

OccupancyGrid empty_grid(int w, int h) { return OccupancyGrid(w, h, 1); }

// Independent Dijkstra oracle over the same 8-connected move rule, costs
// tracked as (straight, diagonal) step counts.
double dijkstra_cost(const OccupancyGrid& grid, Cell start, Cell goal) {
    const int w = grid.width, h = grid.height;
    const size_t n = static_cast<size_t>(w) * h;
    std::vector<int> gs(n, -1), gd(n, -1);
    auto canon = [](int s, int d) { return s + d * kSqrt2; };
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    auto idx = [&](int x, int y) { return static_cast<size_t>(y) * w + x; };
    gs[idx(start.x, start.y)] = 0;
    gd[idx(start.x, start.y)] = 0;
    open.push({0.0, static_cast<int>(idx(start.x, start.y))});
    std::vector<std::uint8_t> done(n, 0);
    static const int nbr[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                  {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    while (!open.empty()) {
        int u = open.top().second;
        open.pop();
        if (done[u]) continue;
        done[u] = 1;
        int ux = u % w, uy = u / w;
        for (auto& d : nbr) {
            int vx = ux + d[0], vy = uy + d[1];
            if (vx < 0 || vx >= w || vy < 0 || vy >= h) continue;
            if (grid.at(vx, vy)) continue;
            bool diag = d[0] != 0 && d[1] != 0;
            if (diag && grid.at(ux + d[0], uy) && grid.at(ux, uy + d[1])) continue;
            size_t v = idx(vx, vy);
            int ns = gs[u] + (diag ? 0 : 1), nd = gd[u] + (diag ? 1 : 0);
            if (gs[v] >= 0 && canon(gs[v], gd[v]) <= canon(ns, nd)) continue;
            gs[v] = ns;
            gd[v] = nd;
            open.push({canon(ns, nd), static_cast<int>(v)});
        }
    }
    size_t gi = idx(goal.x, goal.y);
    if (gs[gi] < 0) return -1.0;
    return canon(gs[gi], gd[gi]);
}

PlanningScene scene_with_segments(int w, int h, std::vector<LineSegment> segs, Point start,
                                  Point goal) {
    PlanningScene scene;
    scene.terrain = GrayImage(w, h);
    scene.image_obstacles = std::move(segs);
    scene.obstacles = scene.image_obstacles;
    scene.start = {static_cast<int>(start.x), static_cast<int>(start.y), 15.0};
    scene.goal = {static_cast<int>(goal.x), static_cast<int>(goal.y), 15.0};
    return scene;
}

}  // namespace

TEST_CASE("rasterize: no obstacles means all free") {
    PlanningScene scene = scene_with_segments(64, 48, {}, {5, 5}, {60, 40});
    OccupancyGrid g = rasterize(scene, 1, 0);
    for (auto v : g.occupied) CHECK(v == 0);
}

TEST_CASE("rasterize marks a horizontal wall band, dilated by inflation") {
    std::vector<LineSegment> wall = {{{10, 20}, {50, 20}, 5}};
    PlanningScene scene = scene_with_segments(64, 48, wall, {5, 5}, {60, 40});

    OccupancyGrid g0 = rasterize(scene, 1, 0);
    // Oracle: dense segment sampling marks exactly one row of cells.
    std::set<std::pair<int, int>> expect;
    for (double t = 0.0; t <= 1.0; t += 1.0 / 4096.0)
        expect.insert({static_cast<int>(std::floor(10 + t * 40 + 0.5)), 20});
    for (int y = 0; y < g0.height; ++y)
        for (int x = 0; x < g0.width; ++x)
            CHECK(g0.at(x, y) == (expect.count({x, y}) > 0));

    OccupancyGrid g1 = rasterize(scene, 1, 1);
    for (int y = 0; y < g0.height; ++y)
        for (int x = 0; x < g0.width; ++x)
            if (g0.at(x, y)) CHECK(g1.at(x, y));  // dilation monotonicity
    CHECK(g1.at(30, 19));
    CHECK(g1.at(30, 21));
    CHECK_FALSE(g1.at(30, 23));
}

TEST_CASE("rasterize reports start/goal landing on raw obstacle cells") {
    std::vector<LineSegment> wall = {{{0, 10}, {63, 10}, 5}};
    PlanningScene scene = scene_with_segments(64, 48, wall, {30, 10}, {60, 40});
    try {
        rasterize(scene, 1, 0);
        FAIL("expected StartInObstacle");
    } catch (const Error& e) {
        CHECK(e.code() == Err::StartInObstacle);
    }
    // Inflation-only occupancy is forced free instead.
    PlanningScene near_wall = scene_with_segments(64, 48, wall, {30, 13}, {60, 40});
    OccupancyGrid g = rasterize(near_wall, 1, 3);
    CHECK_FALSE(g.at(30, 13));
}

TEST_CASE("astar octile closed forms on an empty grid") {
    OccupancyGrid g = empty_grid(10, 10);
    PlanResult diag = astar(g, {0, 0}, {9, 9});
    CHECK(diag.length == doctest::Approx(9.0 * kSqrt2));
    PlanResult mixed = astar(g, {0, 0}, {9, 4});
    CHECK(mixed.length == doctest::Approx(4.0 * kSqrt2 + 5.0));
}

TEST_CASE("astar equals the Dijkstra oracle on 100 random grids") {
    std::mt19937 rng(4242);
    int solved = 0;
    for (int iter = 0; iter < 100; ++iter) {
        OccupancyGrid g(50, 50, 1);
        for (int y = 0; y < 50; ++y)
            for (int x = 0; x < 50; ++x) g.set(x, y, (rng() % 100) < 22);
        g.set(0, 0, false);
        g.set(49, 49, false);
        double want = dijkstra_cost(g, {0, 0}, {49, 49});
        if (want < 0) {
            try {
                astar(g, {0, 0}, {49, 49});
                FAIL("expected NoPath");
            } catch (const Error& e) {
                CHECK(e.code() == Err::NoPath);
            }
            continue;
        }
        ++solved;
        PlanResult got = astar(g, {0, 0}, {49, 49});
        CHECK(got.length == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(solved > 50);
}

TEST_CASE("astar path cells are 8-adjacent, free, and never cut sealed corners") {
    std::mt19937 rng(777);
    OccupancyGrid g(40, 40, 1);
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 40; ++x) g.set(x, y, (rng() % 100) < 25);
    g.set(1, 1, false);
    g.set(38, 38, false);
    double want = dijkstra_cost(g, {1, 1}, {38, 38});
    REQUIRE(want >= 0);
    PlanResult res = astar(g, {1, 1}, {38, 38});
    for (size_t i = 0; i < res.waypoints.size(); ++i) {
        int x = static_cast<int>(res.waypoints[i].x);
        int y = static_cast<int>(res.waypoints[i].y);
        CHECK_FALSE(g.at(x, y));
        if (i + 1 < res.waypoints.size()) {
            int nx = static_cast<int>(res.waypoints[i + 1].x);
            int ny = static_cast<int>(res.waypoints[i + 1].y);
            CHECK(std::max(std::abs(nx - x), std::abs(ny - y)) == 1);
            if (nx != x && ny != y) CHECK_FALSE((g.at(nx, y) && g.at(x, ny)));
        }
    }
}

TEST_CASE("supercover line includes both cells at corner crossings") {
    // Diagonal between adjacent cell centers crosses their shared corner:
    // both orthogonal neighbors must be reported (no corner cutting).
    auto cells = supercover_cells({10, 10}, {11, 11}, 1);
    std::set<std::pair<int, int>> s;
    for (auto& c : cells) s.insert({c.x, c.y});
    CHECK(s.count({10, 10}));
    CHECK(s.count({11, 11}));
    CHECK(s.count({11, 10}));
    CHECK(s.count({10, 11}));

    // The cell set is symmetric in the endpoints.
    auto rev = supercover_cells({11, 11}, {10, 10}, 1);
    std::set<std::pair<int, int>> sr;
    for (auto& c : rev) sr.insert({c.x, c.y});
    CHECK(s == sr);
}

TEST_CASE("prm on an empty grid finds a path bounded below by the Euclidean distance") {
    OccupancyGrid g = empty_grid(60, 60);
    PrmConfig cfg{200, 8, 1};
    PlanResult res = prm(g, cfg, {2, 2}, {55, 50});
    REQUIRE(res.waypoints.size() >= 2);
    CHECK(res.waypoints.front() == g.cell_center(2, 2));
    CHECK(res.waypoints.back() == g.cell_center(55, 50));
    CHECK(res.length >= distance(g.cell_center(2, 2), g.cell_center(55, 50)) - 1e-9);
}

TEST_CASE("prm is deterministic for a fixed seed and differs across seeds") {
    std::mt19937 rng(31337);
    OccupancyGrid g(80, 80, 1);
    for (int i = 0; i < 200; ++i) g.set(static_cast<int>(rng() % 80), static_cast<int>(rng() % 80), true);
    g.set(3, 3, false);
    g.set(76, 76, false);
    PrmConfig cfg{400, 10, 42};
    PlanResult a = prm(g, cfg, {3, 3}, {76, 76});
    PlanResult b = prm(g, cfg, {3, 3}, {76, 76});
    CHECK(a.waypoints == b.waypoints);
    CHECK(a.length == b.length);
    CHECK(a.graph_edges == b.graph_edges);
}

TEST_CASE("prm paths thread the wall gap and are collision-free, 50 seeds") {
    OccupancyGrid g(70, 70, 1);
    for (int x = 0; x < 70; ++x)
        if (x < 30 || x > 40) g.set(x, 35, true);  // wall with a gap
    int found = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        PrmConfig cfg{300, 10, seed};
        PlanResult res;
        try {
            res = prm(g, cfg, {5, 5}, {65, 65});
        } catch (const Error& e) {
            CHECK(e.code() == Err::NoPath);
            continue;
        }
        ++found;
        bool through_gap = false;
        for (size_t i = 0; i + 1 < res.waypoints.size(); ++i) {
            for (const Cell& c : supercover_cells(res.waypoints[i], res.waypoints[i + 1], 1)) {
                CHECK_FALSE(g.at(c.x, c.y));
                if (c.y == 35) through_gap |= (c.x >= 30 && c.x <= 40);
            }
        }
        CHECK(through_gap);
    }
    CHECK(found >= 45);
}

TEST_CASE("prm rejects bad configs and occupied endpoints") {
    OccupancyGrid g = empty_grid(20, 20);
    try {
        prm(g, {1, 5, 1}, {0, 0}, {10, 10});
        FAIL("expected InvalidArgument");
    } catch (const Error& e) {
        CHECK(e.code() == Err::InvalidArgument);
    }
    g.set(0, 0, true);
    try {
        prm(g, {10, 5, 1}, {0, 0}, {10, 10});
        FAIL("expected StartInObstacle");
    } catch (const Error& e) {
        CHECK(e.code() == Err::StartInObstacle);
    }
}

TEST_CASE("occupancy grid exports occupied=0 free=255") {
    OccupancyGrid g = empty_grid(4, 3);
    g.set(2, 1, true);
    GrayImage img = g.to_gray();
    CHECK(img.at(2, 1) == 0);
    CHECK(img.at(0, 0) == 255);
}
