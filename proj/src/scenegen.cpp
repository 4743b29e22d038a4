#include "vispath/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "vispath/fiducial.hpp"
#include "vispath/keyvalue.hpp"

namespace vispath {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kValueNoiseAmp = 28.0;
constexpr double kFineNoiseAmp = 6.0;
constexpr int kNoiseCell = 4;
constexpr double kBaseIntensity = 128.0;
constexpr std::uint8_t kGoalShade = 45;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Position hash in [-1, 1], stable across platforms and render extents.
double hash_noise(std::uint64_t seed, std::int64_t x, std::int64_t y) {
    std::uint64_t h = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(x + 0x10000) +
                      0xC2B2AE3D27D4EB4FULL * static_cast<std::uint64_t>(y + 0x10000);
    return (static_cast<double>(mix64(h) >> 11) / 9007199254740992.0) * 2.0 - 1.0;
}

// Bilinear value noise over a kNoiseCell-pixel lattice.
double value_noise(std::uint64_t seed, double x, double y) {
    double gx = x / kNoiseCell, gy = y / kNoiseCell;
    std::int64_t x0 = static_cast<std::int64_t>(std::floor(gx));
    std::int64_t y0 = static_cast<std::int64_t>(std::floor(gy));
    double fx = gx - static_cast<double>(x0), fy = gy - static_cast<double>(y0);
    double v00 = hash_noise(seed, x0, y0), v10 = hash_noise(seed, x0 + 1, y0);
    double v01 = hash_noise(seed, x0, y0 + 1), v11 = hash_noise(seed, x0 + 1, y0 + 1);
    return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 + fx * fy * v11;
}

bool in_footprint(const ObstacleSpec& o, double px, double py, double& frac) {
    frac = 1.0;
    if (std::holds_alternative<RectFootprint>(o.footprint)) {
        const auto& r = std::get<RectFootprint>(o.footprint);
        return px >= r.x && px < r.x + r.w && py >= r.y && py < r.y + r.h;
    }
    const auto& d = std::get<DiskFootprint>(o.footprint);
    double dist2 = (px - d.cx) * (px - d.cx) + (py - d.cy) * (py - d.cy);
    if (dist2 > d.r * d.r) return false;
    if (o.kind == ObstacleKind::Hill) frac = 0.5 * (1.0 + std::cos(kPi * std::sqrt(dist2) / d.r));
    return true;
}

double obstacle_elevation(const ObstacleSpec& o, double px, double py) {
    double frac;
    if (!in_footprint(o, px, py, frac)) return 0.0;
    return o.kind == ObstacleKind::Hill ? o.height * frac : o.height;
}

void validate_spec(const SceneSpec& spec) {
    if (spec.width < 64 || spec.height < 64) fail(Err::InvalidArgument, "scene too small");
    if (spec.marker.side < 40.0) fail(Err::InvalidArgument, "marker side must be >= 40 px");
    if (spec.goal.radius < 10.0 || spec.goal.radius > 40.0)
        fail(Err::InvalidArgument, "goal radius must be in [10, 40]");
    if (spec.rig.focal <= 0 || spec.rig.half_baseline <= 0 || spec.camera_height <= 0)
        fail(Err::InvalidArgument, "rig parameters must be positive");
    for (const auto& o : spec.obstacles) {
        if (o.kind == ObstacleKind::Crater && !(o.height < 0))
            fail(Err::InvalidArgument, "crater height must be < 0");
        if (o.kind != ObstacleKind::Crater && !(o.height > 0))
            fail(Err::InvalidArgument, "box/hill height must be > 0");
        if (o.kind == ObstacleKind::Hill && !std::holds_alternative<DiskFootprint>(o.footprint))
            fail(Err::InvalidArgument, "hill footprint must be a disk");
        if (o.height >= spec.camera_height)
            fail(Err::InvalidArgument, "obstacle reaches the camera plane");
    }
}

}  // namespace

RealImage build_heightfield(const SceneSpec& spec) {
    validate_spec(spec);
    RealImage field(spec.width, spec.height, 0.0);
    std::vector<int> owner(field.pixel_count(), -1);
    for (size_t oi = 0; oi < spec.obstacles.size(); ++oi) {
        const auto& o = spec.obstacles[oi];
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x) {
                double frac;
                if (!in_footprint(o, x, y, frac)) continue;
                size_t i = static_cast<size_t>(y) * spec.width + x;
                if (owner[i] >= 0)
                    fail(Err::OverlapError, "obstacles " + std::to_string(owner[i]) + " and " +
                                                std::to_string(oi) + " overlap at pixel (" +
                                                std::to_string(x) + "," + std::to_string(y) + ")");
                owner[i] = static_cast<int>(oi);
                field.data[i] = o.kind == ObstacleKind::Hill ? o.height * frac : o.height;
            }
    }
    return field;
}

namespace {

std::vector<TruthPolygon> truth_polygons(const SceneSpec& spec) {
    std::vector<TruthPolygon> polys;
    for (const auto& o : spec.obstacles) {
        TruthPolygon p;
        p.kind = o.kind;
        if (std::holds_alternative<RectFootprint>(o.footprint)) {
            const auto& r = std::get<RectFootprint>(o.footprint);
            p.outline = {{r.x, r.y}, {r.x + r.w, r.y}, {r.x + r.w, r.y + r.h}, {r.x, r.y + r.h}};
        } else {
            const auto& d = std::get<DiskFootprint>(o.footprint);
            for (int k = 0; k < 32; ++k) {
                double a = 2.0 * kPi * k / 32.0;
                p.outline.push_back({d.cx + d.r * std::cos(a), d.cy + d.r * std::sin(a)});
            }
        }
        polys.push_back(std::move(p));
    }
    return polys;
}

}  // namespace

StereoRender render_stereo(const SceneSpec& spec) {
    RealImage heightfield = build_heightfield(spec);  // validates spec + overlaps

    const int w = spec.width, h = spec.height;
    const double fl2 = 2.0 * spec.rig.focal * spec.rig.half_baseline;
    double max_elev = 0.0;
    for (double v : heightfield.data) max_elev = std::max(max_elev, v);
    const double d_max = fl2 / (spec.camera_height - max_elev);
    const int margin = static_cast<int>(std::ceil(d_max)) + 2;
    const int wx = w + margin;

    // Extended-domain elevation (extra columns are plain ground unless an
    // obstacle genuinely extends there).
    RealImage elev(wx, h, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < wx; ++x) {
            if (x < w) {
                elev.at(x, y) = heightfield.at(x, y);
            } else {
                double e = 0.0;
                for (const auto& o : spec.obstacles) e += obstacle_elevation(o, x, y);
                elev.at(x, y) = e;
            }
        }

    // Intensity: base + value noise + shading, then fiducials, then fine
    // position noise (kept on the fiducials so block matching stays valid).
    GrayImage intensity(wx, h);
    std::vector<std::uint8_t> glare(static_cast<size_t>(wx) * h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < wx; ++x) {
            double vn = value_noise(spec.texture_seed, x, y);
            double v = kBaseIntensity + kValueNoiseAmp * vn;
            // Reflective patches are coarse (cell ~24 px) so they swallow
            // whole matching windows the way real glare kills texture.
            if (spec.reflective && value_noise(spec.texture_seed ^ 0xCAFEULL, x / 6.0, y / 6.0) > 0.45) {
                v = 185.0;
                glare[static_cast<size_t>(y) * wx + x] = 1;
            }
            double frac;
            for (const auto& o : spec.obstacles)
                if (in_footprint(o, x, y, frac))
                    v += o.kind == ObstacleKind::Hill ? o.shade * frac : o.shade;
            intensity.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }

    render_marker(intensity, MarkerDictionary::standard(), spec.marker.id, spec.marker.position,
                  spec.marker.yaw, spec.marker.side);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < wx; ++x) {
            double dx = x - spec.goal.position.x, dy = y - spec.goal.position.y;
            if (dx * dx + dy * dy <= spec.goal.radius * spec.goal.radius)
                intensity.at(x, y) = kGoalShade;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < wx; ++x) {
            if (glare[static_cast<size_t>(y) * wx + x]) continue;
            double fine = kFineNoiseAmp * hash_noise(spec.texture_seed ^ 0xF00DULL, x, y);
            long v = std::lround(intensity.at(x, y) + fine);
            intensity.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
        }

    StereoRender out;
    out.left = GrayImage(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.left.at(x, y) = intensity.at(x, y);

    // Forward warp x_R = x_L - d with nearest-wins occlusion.
    out.right = GrayImage(w, h);
    out.truth.disparity = RealImage(w, h, 0.0);
    out.truth.occluded.assign(static_cast<size_t>(w) * h, 1);
    std::vector<double> bestd(w);
    std::vector<int> winner(w);
    for (int y = 0; y < h; ++y) {
        std::fill(bestd.begin(), bestd.end(), -1.0);
        std::fill(winner.begin(), winner.end(), -1);
        for (int xl = 0; xl < wx; ++xl) {
            double d = fl2 / (spec.camera_height - elev.at(xl, y));
            if (xl < w) out.truth.disparity.at(xl, y) = d;
            int xr = xl - static_cast<int>(std::lround(d));
            if (xr < 0 || xr >= w) continue;
            if (d > bestd[xr]) {
                bestd[xr] = d;
                winner[xr] = xl;
                out.right.at(xr, y) = intensity.at(xl, y);
            }
        }
        for (int xr = 0; xr < w; ++xr)
            if (winner[xr] >= 0 && winner[xr] < w)
                out.truth.occluded[static_cast<size_t>(y) * w + winner[xr]] = 0;
        // Disocclusion holes: fill from the nearest rendered neighbor.
        int first = -1;
        for (int xr = 0; xr < w; ++xr)
            if (winner[xr] >= 0) {
                first = xr;
                break;
            }
        if (first < 0) continue;
        for (int xr = first - 1; xr >= 0; --xr) out.right.at(xr, y) = out.right.at(xr + 1, y);
        for (int xr = first + 1; xr < w; ++xr)
            if (winner[xr] < 0) out.right.at(xr, y) = out.right.at(xr - 1, y);
    }

    out.truth.obstacle_polygons = truth_polygons(spec);
    out.truth.heightfield = std::move(heightfield);
    out.truth.start = spec.marker.position;
    out.truth.goal = spec.goal.position;
    return out;
}

std::vector<SceneSpec> preset_scenes() {
    std::vector<SceneSpec> presets;

    {
        SceneSpec s;
        s.name = "scene1";
        s.width = 759;
        s.height = 763;
        s.texture_seed = 101;
        s.marker = {{110, 650}, 0.3, 3, 48};
        s.goal = {{640, 110}, 24};
        s.obstacles = {
            {ObstacleKind::Box, RectFootprint{300, 180, 160, 420}, 1.875, 38},
            {ObstacleKind::Box, RectFootprint{140, 250, 90, 90}, 1.5, 34},
            {ObstacleKind::Crater, DiskFootprint{590, 450, 55}, -2.5, -34},
        };
        presets.push_back(s);
    }
    {
        SceneSpec s;
        s.name = "scene2";
        s.width = 808;
        s.height = 814;
        s.texture_seed = 202;
        s.marker = {{100, 100}, -0.5, 5, 48};
        s.goal = {{700, 710}, 25};
        s.obstacles = {
            {ObstacleKind::Box, RectFootprint{180, 330, 450, 90}, 1.875, 38},
            {ObstacleKind::Box, RectFootprint{560, 520, 110, 110}, 1.5, 34},
            {ObstacleKind::Crater, RectFootprint{360, 140, 120, 90}, -2.5, -34},
            {ObstacleKind::Hill, DiskFootprint{300, 600, 70}, 1.5, 26},
        };
        presets.push_back(s);
    }
    {
        SceneSpec s;
        s.name = "scene3";
        s.width = 808;
        s.height = 814;
        s.texture_seed = 303;
        s.marker = {{110, 700}, 1.1, 7, 48};
        s.goal = {{700, 120}, 22};
        s.obstacles = {
            {ObstacleKind::Box, RectFootprint{250, 250, 180, 180}, 1.875, 38},
            {ObstacleKind::Box, RectFootprint{444, 250, 180, 180}, 1.875, 42},
            {ObstacleKind::Box, RectFootprint{150, 480, 90, 90}, 1.5, 34},
            {ObstacleKind::Crater, DiskFootprint{600, 560, 60}, -2.5, -34},
        };
        presets.push_back(s);
    }
    {
        SceneSpec s;
        s.name = "scene4";
        s.width = 1500;
        s.height = 1500;
        s.texture_seed = 404;
        s.marker = {{160, 1340}, -2.2, 9, 52};
        s.goal = {{1320, 170}, 26};
        s.obstacles = {
            {ObstacleKind::Box, RectFootprint{400, 300, 150, 800}, 1.875, 38},
            {ObstacleKind::Box, RectFootprint{800, 700, 600, 140}, 1.875, 42},
            {ObstacleKind::Box, RectFootprint{950, 1050, 160, 160}, 1.5, 34},
            {ObstacleKind::Crater, DiskFootprint{1100, 400, 90}, -2.5, -34},
            {ObstacleKind::Crater, RectFootprint{650, 180, 130, 100}, -2.5, -30},
            {ObstacleKind::Hill, DiskFootprint{350, 1230, 90}, 1.8, 26},
        };
        presets.push_back(s);
    }
    {
        SceneSpec s;
        s.name = "hidden-crater";
        s.width = 808;
        s.height = 814;
        s.texture_seed = 505;
        s.marker = {{120, 120}, 0.0, 11, 48};
        s.goal = {{690, 120}, 24};
        // A vertical wall whose middle section is a crater invisible in the
        // intensity image: grid planners cut straight through it, the
        // disparity-aware planner must round the bottom corridor.
        s.obstacles = {
            {ObstacleKind::Box, RectFootprint{330, 60, 70, 240}, 1.875, 38},
            {ObstacleKind::Crater, RectFootprint{330, 302, 70, 210}, -3.0, 0},
            {ObstacleKind::Box, RectFootprint{330, 514, 70, 236}, 1.875, 38},
        };
        presets.push_back(s);
    }
    return presets;
}

namespace {

std::string kind_name(ObstacleKind k) {
    switch (k) {
        case ObstacleKind::Box: return "box";
        case ObstacleKind::Crater: return "crater";
        case ObstacleKind::Hill: return "hill";
    }
    return "box";
}

}  // namespace

SceneSpec parse_scene_spec(const std::filesystem::path& path) {
    auto sections = read_keyvalue(path);
    SceneSpec spec;
    const KeyValueSection& top = sections.front();
    if (auto n = top.get("name")) spec.name = *n;
    spec.width = static_cast<int>(top.require_num("width"));
    spec.height = static_cast<int>(top.require_num("height"));
    spec.texture_seed = static_cast<std::uint64_t>(top.get_num("texture_seed", 1));
    spec.rig.focal = top.get_num("focal", spec.rig.focal);
    spec.rig.half_baseline = top.get_num("half_baseline", spec.rig.half_baseline);
    spec.camera_height = top.get_num("camera_height", spec.camera_height);
    spec.reflective = top.get_num("reflective", 0) != 0;
    spec.marker.position = {top.require_num("marker_x"), top.require_num("marker_y")};
    spec.marker.yaw = top.get_num("marker_yaw_deg", 0) * kPi / 180.0;
    spec.marker.id = static_cast<int>(top.get_num("marker_id", 0));
    spec.marker.side = top.get_num("marker_side", 48);
    spec.goal.position = {top.require_num("goal_x"), top.require_num("goal_y")};
    spec.goal.radius = top.get_num("goal_radius", 24);

    for (size_t i = 1; i < sections.size(); ++i) {
        const auto& sec = sections[i];
        ObstacleSpec o;
        if (sec.name == "box") {
            o.kind = ObstacleKind::Box;
        } else if (sec.name == "crater") {
            o.kind = ObstacleKind::Crater;
        } else if (sec.name == "hill") {
            o.kind = ObstacleKind::Hill;
        } else {
            fail(Err::InvalidArgument, "unknown obstacle section [" + sec.name + "]");
        }
        if (sec.get("cx")) {
            o.footprint = DiskFootprint{sec.require_num("cx"), sec.require_num("cy"),
                                        sec.require_num("r")};
        } else {
            o.footprint = RectFootprint{sec.require_num("x"), sec.require_num("y"),
                                        sec.require_num("w"), sec.require_num("h")};
        }
        o.height = sec.require_num("height");
        o.shade = sec.get_num("shade", 0);
        spec.obstacles.push_back(o);
    }
    return spec;
}

void write_scene_spec(const SceneSpec& spec, const std::filesystem::path& path) {
    std::vector<KeyValueSection> sections;
    KeyValueSection top{"", {}};
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return std::string(buf);
    };
    top.entries = {
        {"name", spec.name},
        {"width", num(spec.width)},
        {"height", num(spec.height)},
        {"texture_seed", std::to_string(spec.texture_seed)},
        {"focal", num(spec.rig.focal)},
        {"half_baseline", num(spec.rig.half_baseline)},
        {"camera_height", num(spec.camera_height)},
        {"reflective", spec.reflective ? "1" : "0"},
        {"marker_x", num(spec.marker.position.x)},
        {"marker_y", num(spec.marker.position.y)},
        {"marker_yaw_deg", num(spec.marker.yaw * 180.0 / kPi)},
        {"marker_id", num(spec.marker.id)},
        {"marker_side", num(spec.marker.side)},
        {"goal_x", num(spec.goal.position.x)},
        {"goal_y", num(spec.goal.position.y)},
        {"goal_radius", num(spec.goal.radius)},
    };
    sections.push_back(top);
    for (const auto& o : spec.obstacles) {
        KeyValueSection sec{kind_name(o.kind), {}};
        if (std::holds_alternative<RectFootprint>(o.footprint)) {
            const auto& r = std::get<RectFootprint>(o.footprint);
            sec.entries = {{"x", num(r.x)}, {"y", num(r.y)}, {"w", num(r.w)}, {"h", num(r.h)}};
        } else {
            const auto& d = std::get<DiskFootprint>(o.footprint);
            sec.entries = {{"cx", num(d.cx)}, {"cy", num(d.cy)}, {"r", num(d.r)}};
        }
        sec.entries.emplace_back("height", num(o.height));
        sec.entries.emplace_back("shade", num(o.shade));
        sections.push_back(sec);
    }
    write_keyvalue(sections, path);
}

void save_truth_polygons(const SceneTruth& truth, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(Err::IoFailure, "cannot open " + path.string() + " for writing");
    out << "kind,vertex,x,y\n";
    for (const auto& poly : truth.obstacle_polygons)
        for (size_t i = 0; i < poly.outline.size(); ++i)
            out << kind_name(poly.kind) << "," << i << "," << poly.outline[i].x << ","
                << poly.outline[i].y << "\n";
    if (!out) fail(Err::IoFailure, "write failed for " + path.string());
}

void save_truth_heightfield(const SceneTruth& truth, const std::filesystem::path& path) {
    double lo = 0.0, hi = 0.0;
    for (double v : truth.heightfield.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    GrayImage img(truth.heightfield.width, truth.heightfield.height);
    for (size_t i = 0; i < img.data.size(); ++i)
        img.data[i] =
            static_cast<std::uint8_t>(std::lround(255.0 * (truth.heightfield.data[i] - lo) / span));
    save_pnm(img, path);
}

}  // namespace vispath
