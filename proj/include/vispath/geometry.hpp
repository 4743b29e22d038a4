#pragma once

#include <span>
#include <vector>

#include "vispath/error.hpp"

namespace vispath {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
double distance(Point a, Point b);

/// Directed obstacle-boundary segment. votes carries the edge-pixel support
/// it was extracted with (0 for synthetic segments).
struct LineSegment {
    Point head;
    Point tail;
    int votes = 0;

    double length() const { return distance(head, tail); }
};

/// Parametric line P + lambda * (cos theta, sin theta); lambda is in length
/// units because the direction vector is unit.
struct Ray {
    Point origin;
    double theta = 0.0;
};

struct Intersection {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    Point point;
};

/// Solves the 2x2 system of the two parametric line equations. Throws
/// ParallelLines when |sin(theta1 - theta2)| <= 1e-9; the returned point
/// satisfies both equations within 1e-6.
Intersection ray_intersect(const Ray& r1, const Ray& r2);

/// Segment test via the lambda bounds 0 <= lambda <= length on both rays.
/// Collinear overlap counts as intersecting; collinear disjoint does not.
bool segments_intersect(const LineSegment& s1, const LineSegment& s2);

/// Minimum Euclidean distance between the two segments; 0 iff they intersect.
double segment_distance(const LineSegment& s1, const LineSegment& s2);

double point_segment_distance(Point p, const LineSegment& s);

/// True iff any consecutive-waypoint segment intersects an obstacle or comes
/// within `clearance` of one. Zero-length path segments degrade to point
/// checks; a single waypoint is checked as a point.
bool path_collides(std::span<const Point> waypoints, const std::vector<LineSegment>& obstacles,
                   double clearance);

}  // namespace vispath
