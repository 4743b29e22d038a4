#include "vispath/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace vispath {

namespace {

constexpr double kParallelEps = 1e-9;
// Absolute slop on the lambda-in-segment test; covers roundoff when an
// endpoint lies exactly on the other segment.
constexpr double kLambdaSlack = 1e-9;

Point direction(const LineSegment& s) { return {s.tail.x - s.head.x, s.tail.y - s.head.y}; }

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

void require_nondegenerate(const LineSegment& s) {
    if (s.head.x == s.tail.x && s.head.y == s.tail.y)
        fail(Err::DegenerateSegment, "segment head equals tail");
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Intersection ray_intersect(const Ray& r1, const Ray& r2) {
    const double c1 = std::cos(r1.theta), s1 = std::sin(r1.theta);
    const double c2 = std::cos(r2.theta), s2 = std::sin(r2.theta);
    // [c1 -c2; s1 -s2] [l1; l2] = P2 - P1, det = sin(theta1 - theta2)
    const double det = s1 * c2 - c1 * s2;
    if (std::abs(det) <= kParallelEps) fail(Err::ParallelLines, "|sin(theta1-theta2)| <= eps");
    const double rx = r2.origin.x - r1.origin.x;
    const double ry = r2.origin.y - r1.origin.y;
    Intersection res;
    res.lambda1 = (-s2 * rx + c2 * ry) / det;
    res.lambda2 = (-s1 * rx + c1 * ry) / det;
    res.point = {r1.origin.x + res.lambda1 * c1, r1.origin.y + res.lambda1 * s1};
    return res;
}

bool segments_intersect(const LineSegment& s1, const LineSegment& s2) {
    require_nondegenerate(s1);
    require_nondegenerate(s2);
    const Point d1 = direction(s1);
    const Point d2 = direction(s2);
    const double len1 = s1.length();
    const double len2 = s2.length();

    Ray r1{s1.head, std::atan2(d1.y, d1.x)};
    Ray r2{s2.head, std::atan2(d2.y, d2.x)};
    try {
        Intersection hit = ray_intersect(r1, r2);
        const double slack1 = kLambdaSlack * std::max(1.0, len1);
        const double slack2 = kLambdaSlack * std::max(1.0, len2);
        return hit.lambda1 >= -slack1 && hit.lambda1 <= len1 + slack1 && hit.lambda2 >= -slack2 &&
               hit.lambda2 <= len2 + slack2;
    } catch (const Error& e) {
        if (e.code() != Err::ParallelLines) throw;
    }

    // Parallel: intersect only when collinear with overlapping projections.
    // Projections stay unnormalized so integer inputs are decided exactly.
    const Point off = s2.head - s1.head;
    if (std::abs(cross(d1, off)) > kParallelEps * std::max(1.0, len1 * len2)) return false;
    const double sa = dot(off, d1);
    const double sb = sa + dot(d2, d1);
    const double span = dot(d1, d1);
    return std::max(std::min(sa, sb), 0.0) <= std::min(std::max(sa, sb), span);
}

double point_segment_distance(Point p, const LineSegment& s) {
    const Point d = direction(s);
    const double len2 = d.x * d.x + d.y * d.y;
    if (len2 == 0.0) return distance(p, s.head);
    double t = dot(p - s.head, d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, {s.head.x + t * d.x, s.head.y + t * d.y});
}

double segment_distance(const LineSegment& s1, const LineSegment& s2) {
    require_nondegenerate(s1);
    require_nondegenerate(s2);
    if (segments_intersect(s1, s2)) return 0.0;
    // Disjoint segments attain their minimum distance at an endpoint.
    double d = point_segment_distance(s1.head, s2);
    d = std::min(d, point_segment_distance(s1.tail, s2));
    d = std::min(d, point_segment_distance(s2.head, s1));
    d = std::min(d, point_segment_distance(s2.tail, s1));
    return d;
}

namespace {

// Segment-vs-obstacle check tolerating zero-length path segments.
bool leg_collides(Point a, Point b, const LineSegment& obstacle, double clearance) {
    if (a == b) return point_segment_distance(a, obstacle) <= clearance;
    LineSegment leg{a, b, 0};
    if (segments_intersect(leg, obstacle)) return true;
    return segment_distance(leg, obstacle) <= clearance;
}

}  // namespace

bool path_collides(std::span<const Point> waypoints, const std::vector<LineSegment>& obstacles,
                   double clearance) {
    if (clearance < 0.0) fail(Err::InvalidArgument, "clearance must be >= 0");
    if (waypoints.empty()) return false;
    if (waypoints.size() == 1) {
        for (const auto& o : obstacles)
            if (point_segment_distance(waypoints[0], o) <= clearance) return true;
        return false;
    }
    for (size_t i = 0; i + 1 < waypoints.size(); ++i)
        for (const auto& o : obstacles)
            if (leg_collides(waypoints[i], waypoints[i + 1], o, clearance)) return true;
    return false;
}

}  // namespace vispath
