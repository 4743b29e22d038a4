#include "vispath/fiducial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <queue>

#include "vispath/edges.hpp"
#include "vispath/hough.hpp"
#include "vispath/stereo.hpp"

namespace vispath {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kAdaptiveWindow = 15;
constexpr int kAdaptiveOffset = 7;
constexpr double kApproxTolFrac = 0.03;  // quad fit tolerance, fraction of perimeter
constexpr double kMinQuadArea = 100.0;
constexpr std::uint8_t kMarkerWhite = 232;
constexpr std::uint8_t kMarkerBlack = 24;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

using Bits = std::vector<std::uint8_t>;

Bits rotate_cw(const Bits& m, int n) {
    Bits out(m.size());
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out[static_cast<size_t>(r) * n + c] = m[static_cast<size_t>(n - 1 - c) * n + r];
    return out;
}

int popcount(const Bits& m) {
    int s = 0;
    for (auto b : m) s += b;
    return s;
}

}  // namespace

MarkerDictionary MarkerDictionary::generate(int grid, int count, std::uint64_t seed) {
    if (grid < 2 || grid > 8 || count < 1) fail(Err::InvalidArgument, "bad dictionary shape");
    MarkerDictionary dict;
    dict.grid = grid;
    std::uint64_t state = seed;
    const int nbits = grid * grid;
    int attempts = 0;
    while (static_cast<int>(dict.codes.size()) < count) {
        if (++attempts > 100000) fail(Err::InvalidArgument, "dictionary generation exhausted");
        std::uint64_t r = splitmix64(state);
        Bits cand(nbits);
        for (int i = 0; i < nbits; ++i) cand[i] = (r >> (i % 64)) & 1 ? 1 : 0;
        if (nbits > 64) continue;  // not needed for supported grids
        int pc = popcount(cand);
        if (pc < nbits / 4 || pc > 3 * nbits / 4) continue;

        bool ok = true;
        Bits rot = cand;
        for (int k = 1; k <= 3 && ok; ++k) {
            rot = rotate_cw(rot, grid);
            if (rot == cand) ok = false;  // rotationally symmetric
        }
        for (const Bits& code : dict.codes) {
            if (!ok) break;
            Bits cr = code;
            for (int k = 0; k < 4 && ok; ++k) {
                if (cr == cand) ok = false;
                cr = rotate_cw(cr, grid);
            }
        }
        if (ok) dict.codes.push_back(std::move(cand));
    }
    return dict;
}

const MarkerDictionary& MarkerDictionary::standard() {
    static const MarkerDictionary dict = generate(4, 16, 0x5EEDBA5Eu);
    return dict;
}

void MarkerDictionary::dump(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(Err::IoFailure, "cannot open " + path.string() + " for writing");
    for (size_t id = 0; id < codes.size(); ++id) {
        out << "id " << id << "\n";
        for (int r = 0; r < grid; ++r) {
            for (int c = 0; c < grid; ++c) out << (codes[id][static_cast<size_t>(r) * grid + c] ? '1' : '0');
            out << "\n";
        }
    }
    if (!out) fail(Err::IoFailure, "write failed for " + path.string());
}

namespace {

// ---- quad candidate extraction -----------------------------------------

struct Quad {
    std::array<Point, 4> v;  // consistent winding
};

double shoelace(const std::vector<Point>& poly) {
    double a = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % poly.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cross3 = [](const Point& o, const Point& a, const Point& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Point> hull(2 * pts.size());
    size_t k = 0;
    for (const Point& p : pts) {
        while (k >= 2 && cross3(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross3(hull[k - 2], hull[k - 1], *it) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

// Reduces a convex hull to 4 vertices by repeatedly dropping the vertex
// closest to the chord of its neighbors, then validates that every hull
// point lies within tol of the quad outline.
bool hull_to_quad(const std::vector<Point>& hull, Quad& quad) {
    if (hull.size() < 4) return false;
    std::vector<Point> poly = hull;
    while (poly.size() > 4) {
        size_t drop = 0;
        double best = 1e300;
        for (size_t i = 0; i < poly.size(); ++i) {
            const Point& a = poly[(i + poly.size() - 1) % poly.size()];
            const Point& b = poly[(i + 1) % poly.size()];
            double d = point_segment_distance(poly[i], {a, b, 0});
            if (d < best) {
                best = d;
                drop = i;
            }
        }
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(drop));
    }

    double perim = 0.0;
    for (size_t i = 0; i < 4; ++i) perim += distance(poly[i], poly[(i + 1) % 4]);
    const double tol = std::max(1.5, kApproxTolFrac * perim);
    for (const Point& p : hull) {
        double d = 1e300;
        for (size_t i = 0; i < 4; ++i)
            d = std::min(d, point_segment_distance(p, {poly[i], poly[(i + 1) % 4], 0}));
        if (d > tol) return false;
    }
    if (std::abs(shoelace(poly)) < kMinQuadArea) return false;
    for (size_t i = 0; i < 4; ++i)
        if (distance(poly[i], poly[(i + 1) % 4]) < 6.0) return false;
    std::copy(poly.begin(), poly.end(), quad.v.begin());
    return true;
}

// ---- homography sampling ------------------------------------------------

// Row-major 3x3 homography mapping the unit square to the quad.
struct Homography {
    std::array<double, 9> h;

    Point map(double u, double v) const {
        double X = h[0] * u + h[1] * v + h[2];
        double Y = h[3] * u + h[4] * v + h[5];
        double W = h[6] * u + h[7] * v + h[8];
        return {X / W, Y / W};
    }
};

bool solve8(std::array<std::array<double, 9>, 8>& m, std::array<double, 8>& out) {
    for (int col = 0; col < 8; ++col) {
        int piv = col;
        for (int r = col + 1; r < 8; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-12) return false;
        std::swap(m[col], m[piv]);
        for (int r = 0; r < 8; ++r) {
            if (r == col) continue;
            double f = m[r][col] / m[col][col];
            for (int c = col; c < 9; ++c) m[r][c] -= f * m[col][c];
        }
    }
    for (int i = 0; i < 8; ++i) out[i] = m[i][8] / m[i][i];
    return true;
}

bool quad_homography(const Quad& q, Homography& H) {
    const double src[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    std::array<std::array<double, 9>, 8> m{};
    for (int i = 0; i < 4; ++i) {
        double u = src[i][0], v = src[i][1];
        double x = q.v[i].x, y = q.v[i].y;
        m[2 * i] = {u, v, 1, 0, 0, 0, -u * x, -v * x, x};
        m[2 * i + 1] = {0, 0, 0, u, v, 1, -u * y, -v * y, y};
    }
    std::array<double, 8> sol{};
    if (!solve8(m, sol)) return false;
    H.h = {sol[0], sol[1], sol[2], sol[3], sol[4], sol[5], sol[6], sol[7], 1.0};
    return true;
}

double bilinear(const GrayImage& img, double x, double y) {
    x = std::clamp(x, 0.0, img.width - 1.0);
    y = std::clamp(y, 0.0, img.height - 1.0);
    int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
    int x1 = std::min(x0 + 1, img.width - 1), y1 = std::min(y0 + 1, img.height - 1);
    double fx = x - x0, fy = y - y0;
    return (1 - fx) * (1 - fy) * img.at(x0, y0) + fx * (1 - fy) * img.at(x1, y0) +
           (1 - fx) * fy * img.at(x0, y1) + fx * fy * img.at(x1, y1);
}

struct Decoded {
    int id;
    int rotation;  // clockwise quarter turns applied to the code
    Quad quad;
    Homography H;
};

bool decode_quad(const GrayImage& image, const MarkerDictionary& dict, const Quad& quad,
                 Decoded& out) {
    Homography H;
    if (!quad_homography(quad, H)) return false;
    const int cells = dict.grid + 2;

    // Mean of a small sample cross per lattice cell.
    std::vector<double> mean(static_cast<size_t>(cells) * cells);
    for (int j = 0; j < cells; ++j)
        for (int i = 0; i < cells; ++i) {
            double acc = 0.0;
            static const double offs[5][2] = {{0, 0}, {0.2, 0}, {-0.2, 0}, {0, 0.2}, {0, -0.2}};
            for (auto& o : offs) {
                double u = (i + 0.5 + o[0]) / cells;
                double v = (j + 0.5 + o[1]) / cells;
                Point p = H.map(u, v);
                acc += bilinear(image, p.x, p.y);
            }
            mean[static_cast<size_t>(j) * cells + i] = acc / 5.0;
        }

    double lo = 1e300, hi = -1e300;
    for (double v : mean) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo < 30.0) return false;  // no black/white structure
    const double mid = 0.5 * (lo + hi);

    for (int j = 0; j < cells; ++j)
        for (int i = 0; i < cells; ++i) {
            bool border = i == 0 || j == 0 || i == cells - 1 || j == cells - 1;
            bool white = mean[static_cast<size_t>(j) * cells + i] > mid;
            if (border && white) return false;
        }

    Bits payload(static_cast<size_t>(dict.grid) * dict.grid);
    for (int j = 0; j < dict.grid; ++j)
        for (int i = 0; i < dict.grid; ++i)
            payload[static_cast<size_t>(j) * dict.grid + i] =
                mean[static_cast<size_t>(j + 1) * cells + (i + 1)] > mid ? 1 : 0;

    for (size_t id = 0; id < dict.codes.size(); ++id) {
        Bits rot = dict.codes[id];
        for (int k = 0; k < 4; ++k) {
            if (rot == payload) {
                out = {static_cast<int>(id), k, quad, H};
                return true;
            }
            rot = rotate_cw(rot, dict.grid);
        }
    }
    return false;
}

// ---- component labeling under the adaptive threshold ---------------------

std::vector<std::uint8_t> adaptive_dark_mask(const GrayImage& image) {
    const int w = image.width, h = image.height;
    std::vector<double> integral(static_cast<size_t>(w + 1) * (h + 1), 0.0);
    auto ii = [&](int x, int y) -> double& { return integral[static_cast<size_t>(y) * (w + 1) + x]; };
    for (int y = 1; y <= h; ++y)
        for (int x = 1; x <= w; ++x)
            ii(x, y) = image.at(x - 1, y - 1) + ii(x - 1, y) + ii(x, y - 1) - ii(x - 1, y - 1);

    const int half = kAdaptiveWindow / 2;
    std::vector<std::uint8_t> dark(static_cast<size_t>(w) * h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int xa = std::max(0, x - half), xb = std::min(w - 1, x + half);
            int ya = std::max(0, y - half), yb = std::min(h - 1, y + half);
            double sum = ii(xb + 1, yb + 1) - ii(xa, yb + 1) - ii(xb + 1, ya) + ii(xa, ya);
            double m = sum / ((xb - xa + 1) * (yb - ya + 1));
            if (image.at(x, y) < m - kAdaptiveOffset) dark[static_cast<size_t>(y) * w + x] = 1;
        }
    return dark;
}

}  // namespace

void render_marker(GrayImage& image, const MarkerDictionary& dict, int id, Point center,
                   double yaw, double side) {
    if (id < 0 || id >= static_cast<int>(dict.codes.size()))
        fail(Err::InvalidArgument, "marker id out of dictionary range");
    const int cells = dict.grid + 2;
    const double cell = side / cells;
    const double rho = yaw + kPi / 2.0;  // content rotation; see header contract
    const double c = std::cos(-rho), s = std::sin(-rho);
    const double reach = side / 2.0 + cell + 2.0;
    const int x0 = std::max(0, static_cast<int>(std::floor(center.x - reach * 1.5)));
    const int x1 = std::min(image.width - 1, static_cast<int>(std::ceil(center.x + reach * 1.5)));
    const int y0 = std::max(0, static_cast<int>(std::floor(center.y - reach * 1.5)));
    const int y1 = std::min(image.height - 1, static_cast<int>(std::ceil(center.y + reach * 1.5)));

    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            double dx = x - center.x, dy = y - center.y;
            double lu = c * dx - s * dy;
            double lv = s * dx + c * dy;
            double half = side / 2.0;
            if (std::abs(lu) > half + cell || std::abs(lv) > half + cell) continue;
            if (std::abs(lu) > half || std::abs(lv) > half) {
                image.at(x, y) = kMarkerWhite;  // quiet zone
                continue;
            }
            int ci = static_cast<int>((lu + half) / cell);
            int cj = static_cast<int>((lv + half) / cell);
            ci = std::clamp(ci, 0, cells - 1);
            cj = std::clamp(cj, 0, cells - 1);
            bool white;
            if (ci == 0 || cj == 0 || ci == cells - 1 || cj == cells - 1) {
                white = false;  // border ring
            } else {
                white = dict.codes[id][static_cast<size_t>(cj - 1) * dict.grid + (ci - 1)] != 0;
            }
            image.at(x, y) = white ? kMarkerWhite : kMarkerBlack;
        }
}

MarkerPose detect_marker(const GrayImage& image, const MarkerDictionary& dict) {
    return detect_marker_detail(image, dict).pose;
}

MarkerDetection detect_marker_detail(const GrayImage& image, const MarkerDictionary& dict) {
    const int w = image.width, h = image.height;
    std::vector<std::uint8_t> dark = adaptive_dark_mask(image);

    // Connected components (8-conn) of dark pixels, area >= kMinQuadArea.
    std::vector<int> label(static_cast<size_t>(w) * h, -1);
    std::vector<Decoded> decoded;
    int next_label = 0;
    std::vector<std::pair<int, int>> stack;
    for (int sy = 0; sy < h; ++sy)
        for (int sx = 0; sx < w; ++sx) {
            size_t si = static_cast<size_t>(sy) * w + sx;
            if (!dark[si] || label[si] >= 0) continue;
            int cur = next_label++;
            stack.clear();
            stack.emplace_back(sx, sy);
            label[si] = cur;
            std::vector<Point> pixels;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                pixels.push_back({static_cast<double>(cx), static_cast<double>(cy)});
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        size_t ni = static_cast<size_t>(ny) * w + nx;
                        if (dark[ni] && label[ni] < 0) {
                            label[ni] = cur;
                            stack.emplace_back(nx, ny);
                        }
                    }
            }
            if (pixels.size() < static_cast<size_t>(kMinQuadArea)) continue;

            Quad quad;
            if (!hull_to_quad(convex_hull(pixels), quad)) continue;
            Decoded d;
            if (decode_quad(image, dict, quad, d)) decoded.push_back(d);
        }

    if (decoded.empty()) fail(Err::NotFound, "no marker quad decodes");
    if (decoded.size() > 1) fail(Err::Ambiguous, "multiple marker quads decode");

    const Decoded& d = decoded.front();
    // Center: intersection of the quad diagonals.
    LineSegment d1{d.quad.v[0], d.quad.v[2], 0};
    LineSegment d2{d.quad.v[1], d.quad.v[3], 0};
    Ray r1{d1.head, std::atan2(d1.tail.y - d1.head.y, d1.tail.x - d1.head.x)};
    Ray r2{d2.head, std::atan2(d2.tail.y - d2.head.y, d2.tail.x - d2.head.x)};
    Point center = ray_intersect(r1, r2).point;

    // Yaw: push the code's "up" direction (toward payload row 0) through the
    // homography. rotation k means the payload reads as the code turned k
    // quarter-turns clockwise, so the content's up in lattice coords is
    // (0,-1) turned k quarter-turns clockwise.
    double uu = 0.0, uv = -1.0;
    for (int k = 0; k < d.rotation; ++k) {
        double t = uu;
        uu = -uv;
        uv = t;
    }
    Point p0 = d.H.map(0.5, 0.5);
    Point p1 = d.H.map(0.5 + 0.2 * uu, 0.5 + 0.2 * uv);
    double yaw = std::atan2(p1.y - p0.y, p1.x - p0.x);
    while (yaw <= -kPi) yaw += 2 * kPi;
    while (yaw > kPi) yaw -= 2 * kPi;

    return {MarkerPose{d.id, center, yaw}, d.quad.v};
}

FeaturePoint initial_point(const MarkerPose& pose) {
    return {static_cast<int>(std::lround(pose.center.x)), static_cast<int>(std::lround(pose.center.y)),
            0.0};
}

FeaturePoint initial_point(const MarkerPose& pose, const DisparityMap& disparity) {
    FeaturePoint p = initial_point(pose);
    p.value = nearest_valid_disparity(disparity, p.x, p.y);
    return p;
}

CircleDetection detect_goal_detail(const GrayImage& image) {
    EdgeMap edges = canny_auto(image, 1.4, 0.1, 0.3);
    auto circles = hough_circles(edges, 10, 40, 0.9);
    if (circles.empty()) fail(Err::GoalNotFound, "no goal circle detected");
    return circles.front();
}

FeaturePoint detect_goal(const GrayImage& image) {
    const CircleDetection best = detect_goal_detail(image);
    return {static_cast<int>(std::lround(best.center.x)), static_cast<int>(std::lround(best.center.y)),
            0.0};
}

FeaturePoint detect_goal(const GrayImage& image, const DisparityMap& disparity) {
    FeaturePoint p = detect_goal(image);
    p.value = nearest_valid_disparity(disparity, p.x, p.y);
    return p;
}

}  // namespace vispath
