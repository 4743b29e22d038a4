#include "vispath/hough.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace vispath {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Peak {
    int votes;
    int ti;
    int ri;
};

}  // namespace

std::vector<LineSegment> hough_segments(const EdgeMap& edges, const HoughLineConfig& cfg) {
    if (cfg.rho_res <= 0 || cfg.theta_res <= 0 || cfg.vote_threshold <= 0 || cfg.min_len <= 0 ||
        cfg.max_gap < 0)
        fail(Err::InvalidArgument, "hough line config fields must be positive");
    const int w = edges.width, h = edges.height;
    if (edges.count() == 0) return {};

    const int n_theta = std::max(1, static_cast<int>(std::lround(kPi / cfg.theta_res)));
    const double diag = std::hypot(static_cast<double>(w), static_cast<double>(h));
    const int n_rho = 2 * static_cast<int>(std::ceil(diag / cfg.rho_res)) + 1;
    const int rho_zero = n_rho / 2;  // bin of rho == 0

    std::vector<double> cos_t(n_theta), sin_t(n_theta);
    for (int t = 0; t < n_theta; ++t) {
        cos_t[t] = std::cos(t * cfg.theta_res);
        sin_t[t] = std::sin(t * cfg.theta_res);
    }

    std::vector<int> acc(static_cast<size_t>(n_theta) * n_rho, 0);
    auto acc_at = [&](int t, int r) -> int& { return acc[static_cast<size_t>(t) * n_rho + r]; };

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!edges.at(x, y)) continue;
            for (int t = 0; t < n_theta; ++t) {
                double rho = x * cos_t[t] + y * sin_t[t];
                int ri = rho_zero + static_cast<int>(std::lround(rho / cfg.rho_res));
                if (ri >= 0 && ri < n_rho) ++acc_at(t, ri);
            }
        }

    // 3x3 local maxima at or above the vote threshold. Equal-valued twins
    // resolve to the scan-order-first cell.
    std::vector<Peak> peaks;
    for (int t = 0; t < n_theta; ++t)
        for (int r = 0; r < n_rho; ++r) {
            int v = acc_at(t, r);
            if (v < cfg.vote_threshold) continue;
            bool is_peak = true;
            for (int dt = -1; dt <= 1 && is_peak; ++dt)
                for (int dr = -1; dr <= 1 && is_peak; ++dr) {
                    if (dt == 0 && dr == 0) continue;
                    int nt = t + dt, nr = r + dr;
                    if (nt < 0 || nt >= n_theta || nr < 0 || nr >= n_rho) continue;
                    int nv = acc_at(nt, nr);
                    if (nv > v || (nv == v && (dt < 0 || (dt == 0 && dr < 0)))) is_peak = false;
                }
            if (is_peak) peaks.push_back({v, t, r});
        }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        if (a.votes != b.votes) return a.votes > b.votes;
        if (a.ti != b.ti) return a.ti < b.ti;
        return a.ri < b.ri;
    });

    std::vector<std::uint8_t> consumed(edges.on.size(), 0);
    auto take_pixel = [&](int x, int y) -> bool {
        if (x < 0 || x >= w || y < 0 || y >= h) return false;
        size_t i = static_cast<size_t>(y) * w + x;
        return edges.on[i] != 0 && consumed[i] == 0;
    };

    std::vector<LineSegment> segments;

    for (const Peak& pk : peaks) {
        const double theta = pk.ti * cfg.theta_res;
        const double rho = (pk.ri - rho_zero) * cfg.rho_res;
        const double c = std::cos(theta), s = std::sin(theta);
        // Walk along the line through the image; perpendicular tolerance of
        // one pixel absorbs rasterization jitter.
        const Point base{rho * c, rho * s};
        const Point dir{-s, c};
        double t_lo = -diag, t_hi = diag;

        struct Hit {
            int x, y;
            double t;
        };
        std::vector<Hit> run;
        double last_hit_t = 0.0;
        std::vector<std::vector<Hit>> runs;

        auto close_run = [&]() {
            if (!run.empty()) runs.push_back(std::move(run));
            run.clear();
        };

        for (double t = t_lo; t <= t_hi; t += 1.0) {
            Point p{base.x + t * dir.x, base.y + t * dir.y};
            int px = static_cast<int>(std::lround(p.x));
            int py = static_cast<int>(std::lround(p.y));
            int qx = static_cast<int>(std::lround(p.x + c));
            int qy = static_cast<int>(std::lround(p.y + s));
            int ux = static_cast<int>(std::lround(p.x - c));
            int uy = static_cast<int>(std::lround(p.y - s));
            int hx = -1, hy = -1;
            if (take_pixel(px, py)) {
                hx = px;
                hy = py;
            } else if (take_pixel(qx, qy)) {
                hx = qx;
                hy = qy;
            } else if (take_pixel(ux, uy)) {
                hx = ux;
                hy = uy;
            }
            if (hx < 0) continue;
            if (!run.empty() && t - last_hit_t - 1.0 > cfg.max_gap) close_run();
            if (run.empty() || run.back().x != hx || run.back().y != hy) run.push_back({hx, hy, t});
            last_hit_t = t;
        }
        close_run();

        for (auto& r : runs) {
            const Point head{static_cast<double>(r.front().x), static_cast<double>(r.front().y)};
            const Point tail{static_cast<double>(r.back().x), static_cast<double>(r.back().y)};
            const double len = distance(head, tail);
            if (len < cfg.min_len) continue;
            for (const Hit& hit : r) consumed[static_cast<size_t>(hit.y) * w + hit.x] = 1;

            int chunks = 1;
            if (cfg.max_len > 0 && len > cfg.max_len) {
                chunks = static_cast<int>(std::floor(len / cfg.max_len)) + 1;
                while (chunks > 1 && len / chunks < cfg.min_len) --chunks;
            }
            for (int k = 0; k < chunks; ++k) {
                double f0 = static_cast<double>(k) / chunks;
                double f1 = static_cast<double>(k + 1) / chunks;
                Point a{std::round(head.x + f0 * (tail.x - head.x)),
                        std::round(head.y + f0 * (tail.y - head.y))};
                Point b{std::round(head.x + f1 * (tail.x - head.x)),
                        std::round(head.y + f1 * (tail.y - head.y))};
                if (a == b) continue;
                segments.push_back({a, b, static_cast<int>(r.size()) / chunks});
            }
        }
    }
    return segments;
}

std::vector<LineSegment> merge_nodes(const std::vector<LineSegment>& segments, double merge_radius) {
    if (merge_radius < 0) fail(Err::InvalidArgument, "merge_radius must be >= 0");
    const size_t n = segments.size() * 2;
    if (n == 0) return {};

    std::vector<Point> pts(n);
    for (size_t i = 0; i < segments.size(); ++i) {
        pts[2 * i] = segments[i].head;
        pts[2 * i + 1] = segments[i].tail;
    }

    // Single-linkage union-find: chains of endpoints within merge_radius
    // collapse into one node.
    std::vector<size_t> parent(n);
    std::iota(parent.begin(), parent.end(), size_t{0});
    std::function<size_t(size_t)> find = [&](size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (distance(pts[i], pts[j]) <= merge_radius) {
                size_t ra = find(i), rb = find(j);
                if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
            }

    std::map<size_t, std::pair<Point, int>> centroid;  // root -> (sum, count)
    for (size_t i = 0; i < n; ++i) {
        auto& [sum, cnt] = centroid[find(i)];
        sum = sum + pts[i];
        ++cnt;
    }
    auto merged_point = [&](size_t i) {
        const auto& [sum, cnt] = centroid[find(i)];
        return Point{std::round(sum.x / cnt), std::round(sum.y / cnt)};
    };

    std::vector<LineSegment> out;
    for (size_t i = 0; i < segments.size(); ++i) {
        Point a = merged_point(2 * i);
        Point b = merged_point(2 * i + 1);
        if (a == b) continue;
        out.push_back({a, b, segments[i].votes});
    }
    return out;
}

namespace {

// Rasterized circle perimeter offsets (midpoint algorithm, deduplicated).
std::vector<std::pair<int, int>> circle_offsets(int r) {
    std::vector<std::pair<int, int>> pts;
    int x = r, y = 0, err = 1 - r;
    while (x >= y) {
        const int octants[8][2] = {{x, y}, {y, x}, {-y, x}, {-x, y},
                                   {-x, -y}, {-y, -x}, {y, -x}, {x, -y}};
        for (auto& o : octants) pts.emplace_back(o[0], o[1]);
        ++y;
        if (err < 0) {
            err += 2 * y + 1;
        } else {
            --x;
            err += 2 * (y - x) + 1;
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

bool edge_near(const EdgeMap& edges, int x, int y) {
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            int nx = x + dx, ny = y + dy;
            if (nx >= 0 && nx < edges.width && ny >= 0 && ny < edges.height && edges.at(nx, ny))
                return true;
        }
    return false;
}

}  // namespace

double circle_coverage(const EdgeMap& edges, Point center, int radius) {
    const auto offs = circle_offsets(radius);
    int covered = 0;
    const int cx = static_cast<int>(std::lround(center.x));
    const int cy = static_cast<int>(std::lround(center.y));
    for (auto [ox, oy] : offs)
        if (edge_near(edges, cx + ox, cy + oy)) ++covered;
    return static_cast<double>(covered) / static_cast<double>(offs.size());
}

std::vector<CircleDetection> hough_circles(const EdgeMap& edges, int r_min, int r_max,
                                           double sensitivity) {
    if (!(r_min > 0) || r_min >= r_max) fail(Err::BadRadii, "need 0 < r_min < r_max");
    if (!(sensitivity > 0.0) || sensitivity > 1.0)
        fail(Err::InvalidArgument, "sensitivity must be in (0,1]");
    const double score_min = std::clamp(1.0 - sensitivity + 0.1, 1e-9, 1.0);
    const int w = edges.width, h = edges.height;

    std::vector<std::pair<int, int>> edge_px;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (edges.at(x, y)) edge_px.emplace_back(x, y);
    if (edge_px.empty()) return {};

    // Phase 1: center voting per fixed radius.
    struct Candidate {
        int votes, x, y;
    };
    std::vector<Candidate> cands;
    std::vector<int> acc(static_cast<size_t>(w) * h);
    for (int r = r_min; r <= r_max; ++r) {
        std::fill(acc.begin(), acc.end(), 0);
        const auto offs = circle_offsets(r);
        for (auto [ex, ey] : edge_px)
            for (auto [ox, oy] : offs) {
                int cx = ex - ox, cy = ey - oy;
                if (cx >= 0 && cx < w && cy >= 0 && cy < h) ++acc[static_cast<size_t>(cy) * w + cx];
            }
        const int gate = static_cast<int>(std::ceil(score_min * static_cast<double>(offs.size())));
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                int v = acc[static_cast<size_t>(y) * w + x];
                if (v < gate) continue;
                bool is_max = true;
                for (int dy = -1; dy <= 1 && is_max; ++dy)
                    for (int dx = -1; dx <= 1 && is_max; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        int nx = x + dx, ny = y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        int nv = acc[static_cast<size_t>(ny) * w + nx];
                        if (nv > v || (nv == v && (dy < 0 || (dy == 0 && dx < 0)))) is_max = false;
                    }
                if (is_max) cands.push_back({v, x, y});
            }
    }

    // Deduplicate centers across radii.
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.votes != b.votes) return a.votes > b.votes;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    std::vector<Candidate> centers;
    for (const Candidate& c : cands) {
        bool dup = false;
        for (const Candidate& k : centers)
            if (std::max(std::abs(c.x - k.x), std::abs(c.y - k.y)) <= 2) {
                dup = true;
                break;
            }
        if (!dup) centers.push_back(c);
    }

    // Phase 2: best radius per surviving center by perimeter coverage.
    std::vector<CircleDetection> found;
    for (const Candidate& c : centers) {
        double best_score = -1.0;
        int best_r = r_min;
        for (int r = r_min; r <= r_max; ++r) {
            double cov = circle_coverage(edges, {static_cast<double>(c.x), static_cast<double>(c.y)}, r);
            if (cov > best_score) {
                best_score = cov;
                best_r = r;
            }
        }
        if (best_score >= score_min)
            found.push_back({{static_cast<double>(c.x), static_cast<double>(c.y)}, best_r, best_score});
    }

    std::sort(found.begin(), found.end(), [](const CircleDetection& a, const CircleDetection& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.center.y != b.center.y) return a.center.y < b.center.y;
        if (a.center.x != b.center.x) return a.center.x < b.center.x;
        return a.radius < b.radius;
    });

    // Suppress overlapping detections of the same structure.
    std::vector<CircleDetection> out;
    for (const CircleDetection& d : found) {
        bool dup = false;
        for (const CircleDetection& k : out)
            if (distance(d.center, k.center) < std::max(2.0, k.radius / 2.0)) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(d);
    }
    return out;
}

}  // namespace vispath
