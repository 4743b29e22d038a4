#include <doctest.h>

#include <cmath>

#include "vispath/hough.hpp"

using namespace vispath;

namespace {

constexpr double kPi = 3.14159265358979323846;

EdgeMap empty_map(int w, int h) { return EdgeMap(w, h); }

void draw_circle_edges(EdgeMap& e, int cx, int cy, int r) {
    for (int k = 0; k < 8 * r; ++k) {
        double a = 2.0 * kPi * k / (8 * r);
        int x = cx + static_cast<int>(std::lround(r * std::cos(a)));
        int y = cy + static_cast<int>(std::lround(r * std::sin(a)));
        if (e.in_bounds(x, y)) e.set(x, y, true);
    }
}

HoughLineConfig line_cfg(double min_len, double max_gap) {
    HoughLineConfig cfg;
    cfg.vote_threshold = 15;
    cfg.min_len = min_len;
    cfg.max_gap = max_gap;
    return cfg;
}

}  // namespace

TEST_CASE("hough_segments on empty edges is empty") {
    CHECK(hough_segments(empty_map(64, 64), line_cfg(20, 5)).empty());
}

TEST_CASE("hough_segments recovers a single horizontal line") {
    EdgeMap e(120, 80);
    for (int x = 10; x < 110; ++x) e.set(x, 40, true);
    auto segs = hough_segments(e, line_cfg(20, 5));
    REQUIRE(segs.size() == 1);
    const LineSegment& s = segs[0];
    CHECK(std::abs(s.head.y - 40) <= 2);
    CHECK(std::abs(s.tail.y - 40) <= 2);
    CHECK(std::min(s.head.x, s.tail.x) <= 12);
    CHECK(std::max(s.head.x, s.tail.x) >= 107);
    // Line angle: horizontal edge row votes strongest at theta = 90 deg.
    double ang = std::atan2(s.tail.y - s.head.y, s.tail.x - s.head.x) * 180.0 / kPi;
    CHECK(std::abs(std::remainder(ang, 180.0)) <= 1.5);
}

TEST_CASE("hough_segments bridges gaps by max_gap") {
    EdgeMap e(120, 60);
    for (int x = 10; x < 50; ++x) e.set(x, 30, true);
    for (int x = 55; x < 95; ++x) e.set(x, 30, true);

    auto merged = hough_segments(e, line_cfg(20, 10));
    REQUIRE(merged.size() == 1);
    CHECK(std::max(merged[0].head.x, merged[0].tail.x) >= 92);

    auto split = hough_segments(e, line_cfg(20, 3));
    CHECK(split.size() == 2);
}

TEST_CASE("hough_segments returned segments satisfy bounds and min_len") {
    EdgeMap e(100, 100);
    for (int x = 20; x < 80; ++x) {
        e.set(x, x, true);
        e.set(x, 90 - x / 2, true);
    }
    HoughLineConfig cfg = line_cfg(15, 4);
    auto segs = hough_segments(e, cfg);
    CHECK(!segs.empty());
    for (const auto& s : segs) {
        CHECK(s.length() >= cfg.min_len - 1e-9);
        for (const Point& p : {s.head, s.tail}) {
            CHECK(p.x >= 0);
            CHECK(p.x <= 99);
            CHECK(p.y >= 0);
            CHECK(p.y <= 99);
        }
    }
}

TEST_CASE("hough_segments commutes with 180-degree rotation") {
    EdgeMap e(90, 70);
    for (int x = 15; x < 70; ++x) e.set(x, 20 + x / 4, true);
    EdgeMap rot(90, 70);
    for (int y = 0; y < 70; ++y)
        for (int x = 0; x < 90; ++x)
            if (e.at(x, y)) rot.set(89 - x, 69 - y, true);

    auto a = hough_segments(e, line_cfg(20, 5));
    auto b = hough_segments(rot, line_cfg(20, 5));
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == 1);
    auto rotp = [](Point p) { return Point{89 - p.x, 69 - p.y}; };
    Point ra = rotp(a[0].head), rb = rotp(a[0].tail);
    double d1 = std::min(distance(ra, b[0].head), distance(ra, b[0].tail));
    double d2 = std::min(distance(rb, b[0].head), distance(rb, b[0].tail));
    CHECK(d1 <= 1.0);
    CHECK(d2 <= 1.0);
}

TEST_CASE("hough_segments splits long runs at max_len") {
    EdgeMap e(260, 40);
    for (int x = 5; x < 255; ++x) e.set(x, 20, true);
    HoughLineConfig cfg = line_cfg(16, 5);
    cfg.max_len = 64;
    auto segs = hough_segments(e, cfg);
    CHECK(segs.size() >= 3);
    for (const auto& s : segs) {
        CHECK(s.length() <= 64.0 + 2.0);
        CHECK(s.length() >= 16.0 - 1e-9);
    }
}

TEST_CASE("merge_nodes cases") {
    // Shared endpoint stays put.
    std::vector<LineSegment> shared = {{{10, 10}, {50, 10}, 3}, {{10, 10}, {10, 60}, 4}};
    auto m1 = merge_nodes(shared, 5.0);
    REQUIRE(m1.size() == 2);
    CHECK(m1[0].head == Point{10, 10});
    CHECK(m1[1].head == Point{10, 10});

    // Endpoints 3 px apart move to their midpoint.
    std::vector<LineSegment> close_pair = {{{0, 0}, {20, 0}, 1}, {{23, 0}, {40, 0}, 1}};
    auto m2 = merge_nodes(close_pair, 5.0);
    REQUIRE(m2.size() == 2);
    CHECK(m2[0].tail.x == doctest::Approx(22.0).epsilon(0.1));
    CHECK(m2[1].head.x == doctest::Approx(22.0).epsilon(0.1));

    // Radius 0 keeps everything.
    std::vector<LineSegment> apart = {{{0, 0}, {10, 0}, 1}, {{0, 5}, {10, 5}, 1}};
    auto m3 = merge_nodes(apart, 0.0);
    REQUIRE(m3.size() == 2);
    CHECK(m3[0].head == apart[0].head);
    CHECK(m3[1].tail == apart[1].tail);
}

TEST_CASE("merge_nodes drops collapsed segments and is idempotent") {
    std::vector<LineSegment> segs = {
        {{0, 0}, {4, 0}, 1},   // both endpoints inside one cluster
        {{2, 1}, {60, 40}, 2},
        {{61, 41}, {100, 80}, 3},
    };
    auto once = merge_nodes(segs, 6.0);
    CHECK(once.size() == 2);  // the short segment collapses
    auto twice = merge_nodes(once, 6.0);
    REQUIRE(twice.size() == once.size());
    for (size_t i = 0; i < once.size(); ++i) {
        CHECK(twice[i].head == once[i].head);
        CHECK(twice[i].tail == once[i].tail);
    }
}

TEST_CASE("hough_circles finds a synthetic circle and respects radius bounds") {
    EdgeMap e(100, 100);
    draw_circle_edges(e, 50, 50, 20);
    auto found = hough_circles(e, 10, 40, 0.9);
    REQUIRE(!found.empty());
    CHECK(found.size() == 1);
    CHECK(std::abs(found[0].center.x - 50) <= 2);
    CHECK(std::abs(found[0].center.y - 50) <= 2);
    CHECK(std::abs(found[0].radius - 20) <= 2);
    CHECK(found[0].score > 0.8);

    // Radius outside [r_min, r_max] is never reported.
    EdgeMap big(140, 140);
    draw_circle_edges(big, 70, 70, 50);
    for (const auto& d : hough_circles(big, 10, 40, 0.9)) {
        CHECK(d.radius >= 10);
        CHECK(d.radius <= 40);
        CHECK(d.score < 0.8);
    }
}

TEST_CASE("hough_circles score is the recomputable coverage fraction") {
    EdgeMap e(100, 100);
    draw_circle_edges(e, 40, 60, 25);
    // Knock out a quarter of the perimeter.
    for (int y = 0; y < 60; ++y)
        for (int x = 40; x < 100; ++x) e.set(x, y, false);
    auto found = hough_circles(e, 10, 40, 0.9);
    REQUIRE(!found.empty());
    for (const auto& d : found)
        CHECK(std::abs(circle_coverage(e, d.center, d.radius) - d.score) <= 0.02);
}

TEST_CASE("hough_circles rejects bad radii") {
    EdgeMap e(20, 20);
    try {
        hough_circles(e, 40, 10, 0.9);
        FAIL("expected BadRadii");
    } catch (const Error& err) {
        CHECK(err.code() == Err::BadRadii);
    }
}
