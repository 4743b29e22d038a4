#include "vispath/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

namespace vispath {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kSqrt2 = 1.41421356237309504880;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

GrayImage OccupancyGrid::to_gray() const {
    GrayImage img(width, height);
    for (size_t i = 0; i < occupied.size(); ++i) img.data[i] = occupied[i] ? 0 : 255;
    return img;
}

std::uint64_t SplitMix64::next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) { return next() % bound; }

std::vector<Cell> supercover_cells(Point a, Point b, int cell_size) {
    // Amanatides-Woo traversal. Cell (cx, cy) covers pixel coordinates
    // [cx*s - 0.5, (cx+1)*s - 0.5) so integer pixel coords sit in cell
    // interiors; corner crossings report both side cells so diagonally
    // adjacent occupied cells cannot be cut. Endpoint order is normalized
    // so the cell set is symmetric in (a, b).
    if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
    const double s = cell_size;
    const double x0 = (a.x + 0.5) / s, y0 = (a.y + 0.5) / s;
    const double x1 = (b.x + 0.5) / s, y1 = (b.y + 0.5) / s;
    std::vector<Cell> cells;
    int cx = static_cast<int>(std::floor(x0)), cy = static_cast<int>(std::floor(y0));
    const int ex = static_cast<int>(std::floor(x1)), ey = static_cast<int>(std::floor(y1));
    cells.push_back({cx, cy});
    const double dx = x1 - x0, dy = y1 - y0;
    const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    if (step_x == 0 && step_y == 0) return cells;

    const double inf = std::numeric_limits<double>::infinity();
    double t_max_x = inf, t_max_y = inf, t_dx = inf, t_dy = inf;
    if (step_x != 0) {
        double next_bx = step_x > 0 ? (cx + 1) : cx;
        t_max_x = (next_bx - x0) / dx;
        t_dx = std::abs(1.0 / dx);
    }
    if (step_y != 0) {
        double next_by = step_y > 0 ? (cy + 1) : cy;
        t_max_y = (next_by - y0) / dy;
        t_dy = std::abs(1.0 / dy);
    }

    constexpr double t_end = 1.0 - 1e-12;
    int guard = 4 * (std::abs(ex - cx) + std::abs(ey - cy)) + 8;
    while ((cx != ex || cy != ey) && guard-- > 0) {
        const bool can_x = step_x != 0 && t_max_x < t_end;
        const bool can_y = step_y != 0 && t_max_y < t_end;
        if (!can_x && !can_y) break;
        if (can_x && can_y && std::abs(t_max_x - t_max_y) < 1e-12) {
            cells.push_back({cx + step_x, cy});
            cells.push_back({cx, cy + step_y});
            cx += step_x;
            cy += step_y;
            t_max_x += t_dx;
            t_max_y += t_dy;
        } else if (can_x && (!can_y || t_max_x < t_max_y)) {
            cx += step_x;
            t_max_x += t_dx;
        } else {
            cy += step_y;
            t_max_y += t_dy;
        }
        cells.push_back({cx, cy});
    }
    if (cells.back().x != ex || cells.back().y != ey) cells.push_back({ex, ey});
    return cells;
}

Cell cell_of_point(const OccupancyGrid& grid, Point p) {
    int cx = static_cast<int>(std::floor((p.x + 0.5) / grid.cell_size));
    int cy = static_cast<int>(std::floor((p.y + 0.5) / grid.cell_size));
    cx = std::clamp(cx, 0, grid.width - 1);
    cy = std::clamp(cy, 0, grid.height - 1);
    return {cx, cy};
}

OccupancyGrid rasterize(const PlanningScene& scene, int cell_size, int inflation) {
    if (cell_size < 1) fail(Err::InvalidArgument, "cell_size must be >= 1");
    if (inflation < 0) fail(Err::InvalidArgument, "inflation must be >= 0");
    const int gw = (scene.terrain.width + cell_size - 1) / cell_size;
    const int gh = (scene.terrain.height + cell_size - 1) / cell_size;
    OccupancyGrid grid(gw, gh, cell_size);

    for (const LineSegment& seg : scene.image_obstacles)
        for (const Cell& c : supercover_cells(seg.head, seg.tail, cell_size))
            if (grid.in_bounds(c.x, c.y)) grid.set(c.x, c.y, true);

    const Cell sc = cell_of_point(grid, {double(scene.start.x), double(scene.start.y)});
    const Cell gc = cell_of_point(grid, {double(scene.goal.x), double(scene.goal.y)});
    if (grid.at(sc.x, sc.y)) fail(Err::StartInObstacle, "start cell blocked by an obstacle segment");
    if (grid.at(gc.x, gc.y)) fail(Err::GoalInObstacle, "goal cell blocked by an obstacle segment");

    if (inflation > 0) {
        // Chebyshev dilation via a windowed occupancy count (2D prefix sums).
        std::vector<std::int64_t> ii(static_cast<size_t>(gw + 1) * (gh + 1), 0);
        auto at = [&](int x, int y) -> std::int64_t& { return ii[static_cast<size_t>(y) * (gw + 1) + x]; };
        for (int y = 1; y <= gh; ++y)
            for (int x = 1; x <= gw; ++x)
                at(x, y) = (grid.at(x - 1, y - 1) ? 1 : 0) + at(x - 1, y) + at(x, y - 1) -
                           at(x - 1, y - 1);
        OccupancyGrid dil(gw, gh, cell_size);
        for (int y = 0; y < gh; ++y)
            for (int x = 0; x < gw; ++x) {
                int xa = std::max(0, x - inflation), xb = std::min(gw - 1, x + inflation);
                int ya = std::max(0, y - inflation), yb = std::min(gh - 1, y + inflation);
                std::int64_t cnt = at(xb + 1, yb + 1) - at(xa, yb + 1) - at(xb + 1, ya) + at(xa, ya);
                dil.set(x, y, cnt > 0);
            }
        grid = std::move(dil);
        // Inflation may swallow the endpoints; the raw check above already
        // ran, so force them free.
        grid.set(sc.x, sc.y, false);
        grid.set(gc.x, gc.y, false);
    }
    return grid;
}

namespace {

struct HeapEntry {
    double f;
    int node;
    bool operator>(const HeapEntry& o) const {
        if (f != o.f) return f > o.f;
        return node > o.node;
    }
};

// Costs stay exact as straight/diagonal step counts; the canonical double
// a + b*sqrt(2) is recomputed rather than accumulated so identical paths
// always compare equal.
double canon_cost(int straight, int diag) { return straight + diag * kSqrt2; }

}  // namespace

PlanResult astar(const OccupancyGrid& grid, Cell start, Cell goal) {
    const auto t0 = Clock::now();
    if (!grid.in_bounds(start.x, start.y) || !grid.in_bounds(goal.x, goal.y))
        fail(Err::InvalidArgument, "start/goal outside grid");
    if (grid.at(start.x, start.y)) fail(Err::StartInObstacle, "start cell occupied");
    if (grid.at(goal.x, goal.y)) fail(Err::GoalInObstacle, "goal cell occupied");

    const int w = grid.width, h = grid.height;
    const size_t n = static_cast<size_t>(w) * h;
    std::vector<int> g_straight(n, -1), g_diag(n, -1), pred(n, -1);
    std::vector<std::uint8_t> closed(n, 0);

    auto octile = [&](int x, int y) {
        int dx = std::abs(x - goal.x), dy = std::abs(y - goal.y);
        return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
    };
    auto idx = [&](int x, int y) { return static_cast<size_t>(y) * w + x; };

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> open;
    const size_t si = idx(start.x, start.y);
    g_straight[si] = 0;
    g_diag[si] = 0;
    open.push({octile(start.x, start.y), static_cast<int>(si)});

    static const int nbr[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                  {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    int expanded = 0;
    const size_t gi = idx(goal.x, goal.y);
    while (!open.empty()) {
        const size_t u = static_cast<size_t>(open.top().node);
        open.pop();
        if (closed[u]) continue;
        closed[u] = 1;
        ++expanded;
        if (u == gi) break;
        const int ux = static_cast<int>(u % w), uy = static_cast<int>(u / w);
        for (const auto& d : nbr) {
            const int vx = ux + d[0], vy = uy + d[1];
            if (vx < 0 || vx >= w || vy < 0 || vy >= h) continue;
            if (grid.at(vx, vy)) continue;
            const bool diag = d[0] != 0 && d[1] != 0;
            if (diag && grid.at(ux + d[0], uy) && grid.at(ux, uy + d[1])) continue;
            const size_t v = idx(vx, vy);
            if (closed[v]) continue;
            const int ns = g_straight[u] + (diag ? 0 : 1);
            const int nd = g_diag[u] + (diag ? 1 : 0);
            const double ng = canon_cost(ns, nd);
            if (g_straight[v] >= 0 && canon_cost(g_straight[v], g_diag[v]) <= ng) continue;
            g_straight[v] = ns;
            g_diag[v] = nd;
            pred[v] = static_cast<int>(u);
            open.push({ng + octile(vx, vy), static_cast<int>(v)});
        }
    }

    if (!closed[gi]) fail(Err::NoPath, "goal unreachable on the grid");

    PlanResult res;
    res.candidates_considered = expanded;
    res.graph_edges = 0;
    std::vector<Point> rev;
    for (int v = static_cast<int>(gi); v != -1; v = pred[v])
        rev.push_back(grid.cell_center(static_cast<int>(v % w), static_cast<int>(v / w)));
    res.waypoints.assign(rev.rbegin(), rev.rend());
    for (size_t i = 0; i + 1 < res.waypoints.size(); ++i)
        res.length += distance(res.waypoints[i], res.waypoints[i + 1]);
    res.elapsed = seconds_since(t0);
    return res;
}

PlanResult prm(const OccupancyGrid& grid, const PrmConfig& cfg, Cell start, Cell goal) {
    const auto t0 = Clock::now();
    if (cfg.n_samples < 2 || cfg.k_neighbors < 1) fail(Err::InvalidArgument, "bad PRM config");
    if (!grid.in_bounds(start.x, start.y) || !grid.in_bounds(goal.x, goal.y))
        fail(Err::InvalidArgument, "start/goal outside grid");
    if (grid.at(start.x, start.y)) fail(Err::StartInObstacle, "start cell occupied");
    if (grid.at(goal.x, goal.y)) fail(Err::GoalInObstacle, "goal cell occupied");

    // Nodes: start, samples..., goal.
    std::vector<Cell> nodes;
    nodes.reserve(static_cast<size_t>(cfg.n_samples) + 2);
    nodes.push_back(start);
    SplitMix64 rng(cfg.seed);
    std::uint64_t attempts = 0;
    const std::uint64_t max_attempts = static_cast<std::uint64_t>(cfg.n_samples) * 1000ULL + 1000ULL;
    while (nodes.size() < static_cast<size_t>(cfg.n_samples) + 1) {
        if (++attempts > max_attempts) fail(Err::NoPath, "free space too small to sample");
        int x = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(grid.width)));
        int y = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(grid.height)));
        if (!grid.at(x, y)) nodes.push_back({x, y});
    }
    nodes.push_back(goal);
    const int n = static_cast<int>(nodes.size());

    auto line_free = [&](const Cell& a, const Cell& b) {
        for (const Cell& c : supercover_cells(grid.cell_center(a.x, a.y),
                                              grid.cell_center(b.x, b.y), grid.cell_size))
            if (!grid.in_bounds(c.x, c.y) || grid.at(c.x, c.y)) return false;
        return true;
    };

    // k nearest neighbors by center distance, ties by node index.
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    int edge_count = 0;
    std::vector<std::pair<double, int>> dists;
    dists.reserve(n);
    for (int i = 0; i < n; ++i) {
        dists.clear();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double dx = static_cast<double>(nodes[i].x - nodes[j].x) * grid.cell_size;
            double dy = static_cast<double>(nodes[i].y - nodes[j].y) * grid.cell_size;
            dists.emplace_back(dx * dx + dy * dy, j);
        }
        const size_t k = std::min<size_t>(cfg.k_neighbors, dists.size());
        std::partial_sort(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k), dists.end());
        for (size_t t = 0; t < k; ++t) {
            const int j = dists[t].second;
            if (j < i) continue;  // undirected, add once
            if (!line_free(nodes[i], nodes[j])) continue;
            const double wgt = std::sqrt(dists[t].first);
            adj[i].emplace_back(j, wgt);
            adj[j].emplace_back(i, wgt);
            ++edge_count;
        }
    }

    // Dijkstra over the roadmap.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<int> pred(n, -1);
    std::vector<std::uint8_t> done(n, 0);
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> open;
    dist[0] = 0.0;
    open.push({0.0, 0});
    while (!open.empty()) {
        const int u = open.top().node;
        open.pop();
        if (done[u]) continue;
        done[u] = 1;
        if (u == n - 1) break;
        for (const auto& [v, wgt] : adj[u]) {
            if (done[v]) continue;
            double ndv = dist[u] + wgt;
            if (ndv < dist[v] || (ndv == dist[v] && u < pred[v])) {
                dist[v] = ndv;
                pred[v] = u;
                open.push({ndv, v});
            }
        }
    }
    if (dist[n - 1] == kInf) fail(Err::NoPath, "roadmap does not connect start and goal");

    PlanResult res;
    res.candidates_considered = cfg.n_samples;
    res.graph_edges = edge_count;
    std::vector<Point> rev;
    for (int v = n - 1; v != -1; v = pred[v]) rev.push_back(grid.cell_center(nodes[v].x, nodes[v].y));
    res.waypoints.assign(rev.rbegin(), rev.rend());
    for (size_t i = 0; i + 1 < res.waypoints.size(); ++i)
        res.length += distance(res.waypoints[i], res.waypoints[i + 1]);
    res.elapsed = seconds_since(t0);
    return res;
}

}  // namespace vispath
