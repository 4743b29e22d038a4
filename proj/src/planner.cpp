#include "vispath/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "vispath/edges.hpp"
#include "vispath/fiducial.hpp"
#include "vispath/stereo.hpp"

namespace vispath {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void mask_disk(EdgeMap& edges, Point center, double radius) {
    const int x0 = std::max(0, static_cast<int>(std::floor(center.x - radius)));
    const int x1 = std::min(edges.width - 1, static_cast<int>(std::ceil(center.x + radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(center.y - radius)));
    const int y1 = std::min(edges.height - 1, static_cast<int>(std::ceil(center.y + radius)));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            double dx = x - center.x, dy = y - center.y;
            if (dx * dx + dy * dy <= radius * radius) edges.set(x, y, false);
        }
}

struct Aabb {
    double x0, y0, x1, y1;
};

Aabb segment_box(const LineSegment& s, double pad) {
    return {std::min(s.head.x, s.tail.x) - pad, std::min(s.head.y, s.tail.y) - pad,
            std::max(s.head.x, s.tail.x) + pad, std::max(s.head.y, s.tail.y) + pad};
}

// Edge-vs-obstacle test matching path_collides semantics (intersection or
// distance <= clearance) with an AABB early-out per obstacle.
bool edge_blocked(Point a, Point b, const std::vector<LineSegment>& obstacles,
                  const std::vector<Aabb>& boxes, double clearance) {
    const Aabb eb{std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
    for (size_t i = 0; i < obstacles.size(); ++i) {
        const Aabb& ob = boxes[i];
        if (eb.x0 > ob.x1 || ob.x0 > eb.x1 || eb.y0 > ob.y1 || ob.y0 > eb.y1) continue;
        if (a == b) {
            if (point_segment_distance(a, obstacles[i]) <= clearance) return true;
            continue;
        }
        LineSegment leg{a, b, 0};
        if (segments_intersect(leg, obstacles[i]) ||
            segment_distance(leg, obstacles[i]) <= clearance)
            return true;
    }
    return false;
}

}  // namespace

PlanningScene assemble_scene(const GrayImage& left, const GrayImage& right,
                             const VehicleSpec& vehicle, const PipelineConfig& cfg) {
    if (!(vehicle.width > 0) || vehicle.length < vehicle.width)
        fail(Err::InvalidArgument, "vehicle needs length >= width > 0");

    PlanningScene scene;
    scene.terrain = left;
    scene.vehicle = vehicle;

    scene.disparity = block_match(left, right, cfg.window, cfg.omega);
    if (scene.disparity.valid_count() * 10 < scene.disparity.d.size())
        fail(Err::StereoFailure, "more than 90% of disparity pixels are invalid");

    const MarkerDetection marker = detect_marker_detail(left, MarkerDictionary::standard());
    scene.start = initial_point(marker.pose, scene.disparity);
    const CircleDetection goal_circle = detect_goal_detail(left);
    scene.goal = {static_cast<int>(std::lround(goal_circle.center.x)),
                  static_cast<int>(std::lround(goal_circle.center.y)), 0.0};
    scene.goal.value = nearest_valid_disparity(scene.disparity, scene.goal.x, scene.goal.y);

    const GrayImage disparity_gray = scene.disparity.to_gray();
    EdgeMap edges_img = canny_auto(left, cfg.sigma, cfg.canny_low_frac, cfg.canny_high_frac);
    EdgeMap edges_disp =
        canny_auto(disparity_gray, cfg.sigma, cfg.canny_low_frac, cfg.canny_high_frac);

    // The disparity raster carries a known invalid frame (no window support
    // on the borders, no search support on the left). Its boundary is a
    // measurement artifact, not scene structure; drop it before extracting
    // boundary segments.
    {
        const int half = scene.disparity.window / 2;
        const int blur = static_cast<int>(std::ceil(3.0 * cfg.sigma)) + 2;
        const int x_lo = cfg.omega + half + blur, x_hi = left.width - half - blur;
        const int y_lo = half + blur, y_hi = left.height - half - blur;
        for (int y = 0; y < left.height; ++y)
            for (int x = 0; x < left.width; ++x)
                if (x < x_lo || x >= x_hi || y < y_lo || y >= y_hi) edges_disp.set(x, y, false);
    }

    // The marker quad and the goal disk are beacons, not obstacles: masked
    // out of both edge maps so their outlines never become boundary
    // segments that would wall in the start or goal.
    double marker_reach = 0.0;
    for (const Point& v : marker.quad)
        marker_reach = std::max(marker_reach, distance(v, marker.pose.center));
    mask_disk(edges_img, marker.pose.center, marker_reach + cfg.mask_margin);
    mask_disk(edges_disp, marker.pose.center, marker_reach + cfg.mask_margin);
    mask_disk(edges_img, goal_circle.center, goal_circle.radius + cfg.mask_margin);
    mask_disk(edges_disp, goal_circle.center, goal_circle.radius + cfg.mask_margin);

    HoughLineConfig hcfg = cfg.hough;
    if (hcfg.min_len <= 0) hcfg.min_len = std::min(vehicle.width, vehicle.length);
    if (hcfg.max_len <= 0) hcfg.max_len = 4.0 * std::max(vehicle.width, vehicle.length);
    const double merge_radius = cfg.merge_radius > 0 ? cfg.merge_radius : vehicle.width / 2.0;

    std::vector<LineSegment> segs_img = hough_segments(edges_img, hcfg);
    std::vector<LineSegment> segs_disp = hough_segments(edges_disp, hcfg);
    scene.image_obstacles = merge_nodes(segs_img, merge_radius);
    std::vector<LineSegment> all = segs_img;
    all.insert(all.end(), segs_disp.begin(), segs_disp.end());
    scene.obstacles = merge_nodes(all, merge_radius);

    std::vector<Corner> corners_img =
        fast_detect(left, cfg.fast_t_image, cfg.fast_n, CornerSource::TerrainImage);
    std::vector<Corner> corners_disp = fast_detect(scene.disparity.to_raster(), cfg.fast_t_disparity,
                                                   cfg.fast_n, CornerSource::DisparityMap);
    scene.corners = nms_corners(merge_corner_sources(corners_img, corners_disp), cfg.nms_radius);
    return scene;
}

WaypointGraph build_graph(const PlanningScene& scene, double tol, int max_candidates) {
    const auto t0 = Clock::now();
    WaypointGraph g;
    g.clearance = scene.vehicle.width / 2.0;

    std::vector<FeaturePoint> filtered =
        filter_candidates(scene.corners, scene.disparity, scene.start, scene.goal, tol);

    // Cap: keep the highest-score corners; scores come from the corner set
    // (the filter preserves coordinates).
    if (max_candidates > 0 && static_cast<int>(filtered.size()) > max_candidates) {
        std::map<std::pair<int, int>, double> score;
        for (const Corner& c : scene.corners) score[{c.x, c.y}] = c.score;
        std::stable_sort(filtered.begin(), filtered.end(),
                         [&](const FeaturePoint& a, const FeaturePoint& b) {
                             double sa = score[{a.x, a.y}], sb = score[{b.x, b.y}];
                             if (sa != sb) return sa > sb;
                             if (a.y != b.y) return a.y < b.y;
                             return a.x < b.x;
                         });
        filtered.resize(max_candidates);
    }
    std::sort(filtered.begin(), filtered.end(), [](const FeaturePoint& a, const FeaturePoint& b) {
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });

    std::map<std::pair<int, int>, CornerSource> source;
    for (const Corner& c : scene.corners) source[{c.x, c.y}] = c.source;

    g.candidates = filtered;
    g.nodes.push_back({static_cast<double>(scene.start.x), static_cast<double>(scene.start.y)});
    for (const FeaturePoint& f : filtered) {
        g.nodes.push_back({static_cast<double>(f.x), static_cast<double>(f.y)});
        g.node_sources.push_back(source.count({f.x, f.y}) ? source[{f.x, f.y}]
                                                          : CornerSource::TerrainImage);
    }
    g.nodes.push_back({static_cast<double>(scene.goal.x), static_cast<double>(scene.goal.y)});

    const int n = static_cast<int>(g.nodes.size());
    g.adj.assign(n, {});
    std::vector<Aabb> boxes;
    boxes.reserve(scene.obstacles.size());
    for (const auto& o : scene.obstacles) boxes.push_back(segment_box(o, g.clearance));

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (g.nodes[i] == g.nodes[j]) continue;
            if (edge_blocked(g.nodes[i], g.nodes[j], scene.obstacles, boxes, g.clearance)) continue;
            double wgt = distance(g.nodes[i], g.nodes[j]);
            g.adj[i].emplace_back(j, wgt);
            g.adj[j].emplace_back(i, wgt);
            ++g.edge_count;
        }
    g.build_seconds = seconds_since(t0);
    return g;
}

PlanResult shortest_path(const WaypointGraph& graph) {
    const auto t0 = Clock::now();
    const int n = static_cast<int>(graph.nodes.size());
    const int start = 0, goal = n - 1;

    PlanResult res;
    res.candidates_considered = static_cast<int>(graph.candidates.size());
    res.graph_edges = graph.edge_count;

    if (graph.nodes[start] == graph.nodes[goal]) {
        res.waypoints = {graph.nodes[start]};
        res.length = 0.0;
        res.elapsed = graph.build_seconds + seconds_since(t0);
        return res;
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<int> hops(n, std::numeric_limits<int>::max());
    std::vector<int> pred(n, -1);
    std::vector<char> done(n, 0);
    dist[start] = 0.0;
    hops[start] = 0;

    // O(V^2) scan keeps tie handling exact and deterministic; graphs are
    // capped at ~500 nodes.
    for (int iter = 0; iter < n; ++iter) {
        int u = -1;
        for (int v = 0; v < n; ++v) {
            if (done[v] || dist[v] == kInf) continue;
            if (u < 0 || dist[v] < dist[u] || (dist[v] == dist[u] && hops[v] < hops[u])) u = v;
        }
        if (u < 0) break;
        done[u] = 1;
        if (u == goal) break;
        for (const auto& [v, w] : graph.adj[u]) {
            if (done[v]) continue;
            double nd = dist[u] + w;
            int nh = hops[u] + 1;
            if (nd < dist[v] || (nd == dist[v] && (nh < hops[v] || (nh == hops[v] && u < pred[v])))) {
                dist[v] = nd;
                hops[v] = nh;
                pred[v] = u;
            }
        }
    }

    if (dist[goal] == kInf) fail(Err::NoPath, "start and goal are in different graph components");

    std::vector<Point> rev;
    for (int v = goal; v != -1; v = pred[v]) rev.push_back(graph.nodes[v]);
    res.waypoints.assign(rev.rbegin(), rev.rend());
    res.length = 0.0;
    for (size_t i = 0; i + 1 < res.waypoints.size(); ++i)
        res.length += distance(res.waypoints[i], res.waypoints[i + 1]);
    res.elapsed = graph.build_seconds + seconds_since(t0);
    return res;
}

PlanResult plan(const GrayImage& left, const GrayImage& right, const VehicleSpec& vehicle,
                const PipelineConfig& cfg) {
    PlanningScene scene = assemble_scene(left, right, vehicle, cfg);
    WaypointGraph graph = build_graph(scene, cfg.filter_tol, cfg.max_candidates);
    return shortest_path(graph);
}

void save_plan_csv(const PlanResult& result, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(Err::IoFailure, "cannot open " + path.string() + " for writing");
    out << "x,y\n";
    for (const Point& p : result.waypoints) out << p.x << "," << p.y << "\n";
    out << "# length_px=" << result.length << " elapsed_s=" << result.elapsed
        << " candidates=" << result.candidates_considered << " edges=" << result.graph_edges
        << "\n";
    if (!out) fail(Err::IoFailure, "write failed for " + path.string());
}

}  // namespace vispath
