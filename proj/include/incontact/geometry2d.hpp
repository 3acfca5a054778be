#ifndef INCONTACT_GEOMETRY2D_HPP
#define INCONTACT_GEOMETRY2D_HPP

#include <vector>

namespace incontact {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Vec2&) const = default;
};

using Polygon = std::vector<Vec2>;

inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Signed shoelace area. Positive for the vertex order produced by
// convex_hull() below. Note the grid convention (y grows downward) does not
// change the algebra.
double signed_area(const Polygon& poly);

// Andrew monotone chain. Returns the hull with positive signed area and no
// three consecutive collinear vertices, or an empty polygon when all input
// points are collinear (degenerate).
Polygon convex_hull(std::vector<Vec2> points);

// Point-in-convex-polygon test, boundary inclusive. The polygon must be in
// positive (counter-clockwise in the numeric plane) order.
bool point_in_convex(const Polygon& hull, const Vec2& p);

} // namespace incontact

#endif
