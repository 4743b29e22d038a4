#include "vispath/stereo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

namespace vispath {

size_t DisparityMap::valid_count() const {
    size_t n = 0;
    for (float v : d) n += (v >= 0.0f);
    return n;
}

RealImage DisparityMap::to_raster() const {
    RealImage out(width, height);
    for (size_t i = 0; i < d.size(); ++i) out.data[i] = d[i] >= 0.0f ? d[i] : 0.0;
    return out;
}

GrayImage DisparityMap::to_gray() const {
    GrayImage out(width, height);
    const double scale = omega > 0 ? 255.0 / omega : 0.0;
    for (size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 0.0f) {
            out.data[i] = 0;
        } else {
            long q = std::lround(d[i] * scale);
            out.data[i] = static_cast<std::uint8_t>(std::clamp(q, 0L, 255L));
        }
    }
    return out;
}

DisparityMap block_match(const GrayImage& left, const GrayImage& right, int window, int omega) {
    if (left.width != right.width || left.height != right.height)
        fail(Err::DimensionMismatch, "stereo pair dims differ");
    if (window < 1) fail(Err::BadWindow, "window must be >= 1");
    if (window % 2 == 0) ++window;  // centered support needs odd size
    if (window < 3) fail(Err::BadWindow, "window must be >= 3");
    if (omega < 1) fail(Err::InvalidArgument, "omega must be >= 1");

    const int w = left.width, h = left.height;
    const int half = window / 2;
    DisparityMap map(w, h, omega, window);
    // Valid region: window inside the left image and every shift in
    // [0, omega] inside the right image.
    const int x0 = omega + half, x1 = w - half;
    const int y0 = half, y1 = h - half;
    if (x0 >= x1 || y0 >= y1) return map;

    const size_t n = static_cast<size_t>(w) * h;
    std::vector<int> absdiff(n);
    std::vector<int> col_sum(w);

    // Streams the SAD plane for one shift into `visit(x, y, sad)` over the
    // valid region, using column running sums.
    auto scan_shift = [&](int delta, auto&& visit) {
        for (int y = 0; y < h; ++y) {
            const std::uint8_t* lrow = &left.data[static_cast<size_t>(y) * w];
            const std::uint8_t* rrow = &right.data[static_cast<size_t>(y) * w];
            int* out = &absdiff[static_cast<size_t>(y) * w];
            for (int x = delta; x < w; ++x) out[x] = std::abs(int(lrow[x]) - int(rrow[x - delta]));
        }
        for (int x = delta; x < w; ++x) {
            int s = 0;
            for (int y = y0 - half; y <= y0 + half; ++y) s += absdiff[static_cast<size_t>(y) * w + x];
            col_sum[x] = s;
        }
        for (int y = y0; y < y1; ++y) {
            if (y > y0) {
                const int add = y + half, sub = y - half - 1;
                for (int x = delta; x < w; ++x)
                    col_sum[x] += absdiff[static_cast<size_t>(add) * w + x] -
                                  absdiff[static_cast<size_t>(sub) * w + x];
            }
            int sad = 0;
            for (int x = x0 - half; x <= x0 + half; ++x) sad += col_sum[x];
            for (int x = x0; x < x1; ++x) {
                if (x > x0) sad += col_sum[x + half] - col_sum[x - half - 1];
                visit(x, y, sad);
            }
        }
    };

    // Pass 1: best shift (ties toward smaller delta).
    std::vector<int> best(n, std::numeric_limits<int>::max());
    std::vector<int> best_d(n, -1);
    for (int delta = 0; delta <= omega; ++delta)
        scan_shift(delta, [&](int x, int y, int sad) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (sad < best[i]) {
                best[i] = sad;
                best_d[i] = delta;
            }
        });

    // Pass 2: second-best over shifts more than 1 px from the winner.
    std::vector<int> second(n, std::numeric_limits<int>::max());
    for (int delta = 0; delta <= omega; ++delta)
        scan_shift(delta, [&](int x, int y, int sad) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (std::abs(delta - best_d[i]) > 1 && sad < second[i]) second[i] = sad;
        });

    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (best_d[i] < 0) continue;
            // Uniqueness check, exact in integers: best < 0.95 * second.
            if (second[i] != std::numeric_limits<int>::max() &&
                20LL * best[i] >= 19LL * second[i])
                continue;
            map.at(x, y) = static_cast<float>(best_d[i]);
        }
    return map;
}

double depth_from_disparity(double d, const StereoRig& rig) {
    if (!(d > 0.0)) fail(Err::ZeroDisparity, "disparity must be > 0 for finite depth");
    return 2.0 * rig.focal * rig.half_baseline / d;
}

double nearest_valid_disparity(const DisparityMap& disparity, int x, int y) {
    if (disparity.in_bounds(x, y) && disparity.valid(x, y)) return disparity.at(x, y);
    for (int r = 1; r <= 32; ++r)
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
                int nx = x + dx, ny = y + dy;
                if (disparity.in_bounds(nx, ny) && disparity.valid(nx, ny))
                    return disparity.at(nx, ny);
            }
    return 0.0;
}

RgbImage disparity_to_color(const DisparityMap& map) {
    RgbImage out(map.width, map.height);
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            float d = map.at(x, y);
            if (d < 0.0f) {
                out.set(x, y, 0, 0, 0);
                continue;
            }
            double f = map.omega > 0 ? std::clamp(double(d) / map.omega, 0.0, 1.0) : 0.0;
            // blue (far/low) -> green -> red (near/high)
            double r, g, b;
            if (f < 0.5) {
                b = 1.0 - 2.0 * f;
                g = 2.0 * f;
                r = 0.0;
            } else {
                b = 0.0;
                g = 2.0 - 2.0 * f;
                r = 2.0 * f - 1.0;
            }
            out.set(x, y, static_cast<std::uint8_t>(std::lround(255 * r)),
                    static_cast<std::uint8_t>(std::lround(255 * g)),
                    static_cast<std::uint8_t>(std::lround(255 * b)));
        }
    return out;
}

void save_disparity_csv(const DisparityMap& map, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(Err::IoFailure, "cannot open " + path.string() + " for writing");
    out << "x,y,d\n";
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x)
            if (map.valid(x, y)) out << x << "," << y << "," << map.at(x, y) << "\n";
    if (!out) fail(Err::IoFailure, "write failed for " + path.string());
}

}  // namespace vispath
