#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "vispath/scenegen.hpp"
#include "vispath/stereo.hpp"

using namespace vispath;
namespace fs = std::filesystem;

namespace {

SceneSpec small_scene() {
    SceneSpec s;
    s.name = "unit";
    s.width = 320;
    s.height = 260;
    s.texture_seed = 9;
    s.marker = {{70, 190}, 0.2, 1, 44};
    s.goal = {{250, 60}, 20};
    s.obstacles = {
        {ObstacleKind::Box, RectFootprint{150, 90, 60, 60}, 1.875, 38},
        {ObstacleKind::Crater, DiskFootprint{110, 70, 25}, -2.5, -34},
        {ObstacleKind::Hill, DiskFootprint{240, 190, 28}, 1.5, 26},
    };
    return s;
}

}  // namespace

TEST_CASE("heightfield is zero without obstacles") {
    SceneSpec s = small_scene();
    s.obstacles.clear();
    RealImage f = build_heightfield(s);
    for (double v : f.data) CHECK(v == 0.0);
}

TEST_CASE("box heightfield is exactly footprint-area pixels at h") {
    SceneSpec s = small_scene();
    s.obstacles = {{ObstacleKind::Box, RectFootprint{150, 90, 60, 60}, 1.875, 38}};
    RealImage f = build_heightfield(s);
    int at_h = 0;
    for (double v : f.data) {
        if (v == 1.875) ++at_h;
        else CHECK(v == 0.0);
    }
    CHECK(at_h == 60 * 60);
}

TEST_CASE("hill peak equals its height at the footprint center") {
    SceneSpec s = small_scene();
    s.obstacles = {{ObstacleKind::Hill, DiskFootprint{240, 190, 28}, 1.5, 26}};
    RealImage f = build_heightfield(s);
    CHECK(f.at(240, 190) == doctest::Approx(1.5));
    CHECK(f.at(240 + 28, 190) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("overlapping footprints raise OverlapError") {
    SceneSpec s = small_scene();
    s.obstacles = {
        {ObstacleKind::Box, RectFootprint{100, 100, 60, 60}, 1.0, 38},
        {ObstacleKind::Box, RectFootprint{140, 120, 60, 60}, 1.0, 38},
    };
    try {
        build_heightfield(s);
        FAIL("expected OverlapError");
    } catch (const Error& e) {
        CHECK(e.code() == Err::OverlapError);
    }
}

TEST_CASE("flat scene renders as a uniform shift of the left image") {
    SceneSpec s = small_scene();
    s.obstacles.clear();
    StereoRender r = render_stereo(s);
    const int d = static_cast<int>(std::lround(2.0 * s.rig.focal * s.rig.half_baseline / s.camera_height));
    CHECK(d == 15);
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width - 0; ++x) {
            // right(x) = left-extended(x + d); inside the crop this is left.
            if (x + d < s.width) CHECK(r.right.at(x, y) == r.left.at(x + d, y));
        }
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) CHECK(r.truth.disparity.at(x, y) == doctest::Approx(15.0));
}

TEST_CASE("renders are deterministic byte-for-byte") {
    SceneSpec s = small_scene();
    StereoRender a = render_stereo(s);
    StereoRender b = render_stereo(s);
    CHECK(a.left == b.left);
    CHECK(a.right == b.right);
    CHECK(a.truth.heightfield == b.truth.heightfield);
}

TEST_CASE("block_match recovers the box-top disparity on most of the interior") {
    SceneSpec s = small_scene();
    s.obstacles = {{ObstacleKind::Box, RectFootprint{140, 90, 80, 70}, 1.875, 38}};
    StereoRender r = render_stereo(s);
    DisparityMap d = block_match(r.left, r.right, 10, 50);
    const double expect = 2.0 * s.rig.focal * s.rig.half_baseline / (s.camera_height - 1.875);
    int inside = 0, good = 0;
    for (int y = 96; y < 154; ++y)
        for (int x = 146; x < 214; ++x) {
            ++inside;
            if (d.valid(x, y) && std::abs(d.at(x, y) - expect) <= 1.0) ++good;
        }
    CHECK(good >= inside * 9 / 10);
}

TEST_CASE("forward-inverse consistency over every preset raster") {
    // The acceptance suite runs the full-size version; this spot-checks the
    // machinery on the small scene.
    SceneSpec s = small_scene();
    StereoRender r = render_stereo(s);
    DisparityMap d = block_match(r.left, r.right, 10, 50);
    size_t checked = 0, good = 0;
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) {
            if (!d.valid(x, y)) continue;
            if (r.truth.occluded[static_cast<size_t>(y) * s.width + x]) continue;
            ++checked;
            if (std::abs(d.at(x, y) - r.truth.disparity.at(x, y)) <= 1.0) ++good;
        }
    CHECK(checked > 10000);
    CHECK(good >= checked * 85 / 100);
}

TEST_CASE("box and crater disparities straddle the ground level") {
    SceneSpec s = small_scene();
    StereoRender r = render_stereo(s);
    DisparityMap d = block_match(r.left, r.right, 10, 50);
    double box_sum = 0, crater_sum = 0, ground_sum = 0;
    int box_n = 0, crater_n = 0, ground_n = 0;
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) {
            if (!d.valid(x, y)) continue;
            double elev = r.truth.heightfield.at(x, y);
            if (elev > 1.0) {
                box_sum += d.at(x, y);
                ++box_n;
            } else if (elev < -1.0) {
                crater_sum += d.at(x, y);
                ++crater_n;
            } else if (elev == 0.0 && x > 80) {
                ground_sum += d.at(x, y);
                ++ground_n;
            }
        }
    REQUIRE(box_n > 100);
    REQUIRE(crater_n > 100);
    REQUIRE(ground_n > 1000);
    CHECK(box_sum / box_n > ground_sum / ground_n + 3.0);
    CHECK(crater_sum / crater_n < ground_sum / ground_n - 2.0);
}

TEST_CASE("presets match the published sizes and include the hidden crater") {
    auto presets = preset_scenes();
    REQUIRE(presets.size() == 5);
    CHECK(presets[0].width == 759);
    CHECK(presets[0].height == 763);
    CHECK(presets[1].width == 808);
    CHECK(presets[1].height == 814);
    CHECK(presets[2].width == 808);
    CHECK(presets[2].height == 814);
    CHECK(presets[3].width == 1500);
    CHECK(presets[3].height == 1500);
    CHECK(presets[4].name == "hidden-crater");

    bool has_hidden = false;
    for (const auto& o : presets[4].obstacles)
        has_hidden |= (o.kind == ObstacleKind::Crater && o.shade == 0.0);
    CHECK(has_hidden);
}

TEST_CASE("hidden crater is invisible in intensity but present in the heightfield") {
    SceneSpec s = preset_scenes()[4];
    StereoRender r = render_stereo(s);

    const ObstacleSpec* crater = nullptr;
    for (const auto& o : s.obstacles)
        if (o.kind == ObstacleKind::Crater) crater = &o;
    REQUIRE(crater != nullptr);
    const auto& rect = std::get<RectFootprint>(crater->footprint);

    auto variance_over = [&](int x0, int y0, int x1, int y1) {
        double sum = 0, sum2 = 0;
        int n = 0;
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x) {
                double v = r.left.at(x, y);
                sum += v;
                sum2 += v * v;
                ++n;
            }
        double mean = sum / n;
        return sum2 / n - mean * mean;
    };
    double v_crater = variance_over(static_cast<int>(rect.x) + 4, static_cast<int>(rect.y) + 4,
                                    static_cast<int>(rect.x + rect.w) - 4,
                                    static_cast<int>(rect.y + rect.h) - 4);
    // A same-size ground patch left of the wall.
    double v_ground = variance_over(static_cast<int>(rect.x) - 4 - static_cast<int>(rect.w),
                                    static_cast<int>(rect.y) + 4,
                                    static_cast<int>(rect.x) - 4, static_cast<int>(rect.y + rect.h) - 4);
    double ratio = v_crater / v_ground;
    CHECK(ratio > 0.8);
    CHECK(ratio < 1.25);

    bool height_differs = false;
    for (int y = static_cast<int>(rect.y) + 2; y < static_cast<int>(rect.y + rect.h) - 2; ++y)
        for (int x = static_cast<int>(rect.x) + 2; x < static_cast<int>(rect.x + rect.w) - 2; ++x)
            height_differs |= r.truth.heightfield.at(x, y) < -1.0;
    CHECK(height_differs);
}

TEST_CASE("truth polygon edges lie on heightfield discontinuities") {
    SceneSpec s = small_scene();
    StereoRender r = render_stereo(s);
    for (const auto& poly : r.truth.obstacle_polygons) {
        if (poly.kind == ObstacleKind::Hill) continue;  // smooth by design
        for (size_t i = 0; i < poly.outline.size(); ++i) {
            Point a = poly.outline[i];
            Point b = poly.outline[(i + 1) % poly.outline.size()];
            for (double t = 0.0; t <= 1.0; t += 0.1) {
                int x = static_cast<int>(std::lround(a.x + t * (b.x - a.x)));
                int y = static_cast<int>(std::lround(a.y + t * (b.y - a.y)));
                bool discontinuity = false;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = x + dx, ny = y + dy;
                        if (!r.truth.heightfield.in_bounds(nx, ny) ||
                            !r.truth.heightfield.in_bounds(x, y))
                            continue;
                        if (std::abs(r.truth.heightfield.at(nx, ny) -
                                     r.truth.heightfield.at(x, y)) > 0.5)
                            discontinuity = true;
                    }
                CHECK(discontinuity);
            }
        }
    }
}

TEST_CASE("scene spec text round trip") {
    SceneSpec s = small_scene();
    auto p = fs::temp_directory_path() / "vispath_scene_spec.txt";
    write_scene_spec(s, p);
    SceneSpec back = parse_scene_spec(p);
    CHECK(back.name == s.name);
    CHECK(back.width == s.width);
    CHECK(back.height == s.height);
    CHECK(back.texture_seed == s.texture_seed);
    REQUIRE(back.obstacles.size() == s.obstacles.size());
    CHECK(back.marker.id == s.marker.id);
    CHECK(back.marker.position == s.marker.position);
    CHECK(back.goal.radius == doctest::Approx(s.goal.radius));
    CHECK(back.obstacles[0].kind == ObstacleKind::Box);
    CHECK(back.obstacles[1].kind == ObstacleKind::Crater);
    CHECK(std::get<DiskFootprint>(back.obstacles[1].footprint).r == doctest::Approx(25.0));

    // Identical spec -> identical render bytes.
    StereoRender a = render_stereo(s);
    StereoRender b = render_stereo(back);
    CHECK(a.left == b.left);
    CHECK(a.right == b.right);
}

TEST_CASE("reflective mode degrades disparity coverage") {
    SceneSpec s = small_scene();
    s.obstacles.clear();
    StereoRender clean = render_stereo(s);
    s.reflective = true;
    StereoRender glare = render_stereo(s);
    DisparityMap dc = block_match(clean.left, clean.right, 10, 50);
    DisparityMap dg = block_match(glare.left, glare.right, 10, 50);
    CHECK(dg.valid_count() < dc.valid_count());
}
