#pragma once

// Euclidean primitives for speaker fields: points in 2 or 3 dimensions,
// blurred distance, centroid, and a 2-D convex hull with containment and
// closest-point projection queries.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "dbap/errors.hpp"

namespace dbap {

// Absolute tolerance of the cross-product collinearity test, in squared
// coordinate units. Shared by hull construction and containment.
inline constexpr double kCollinearTol = 1e-12;

// Tolerance in plain coordinate units, used by the degenerate (point or
// segment) hull containment tests.
inline constexpr double kDegenerateTol = 1e-12;

class Point {
public:
    Point() : Point(0.0, 0.0) {}
    Point(double x, double y) : c_{x, y, 0.0}, dims_(2) { check_finite(); }
    Point(double x, double y, double z) : c_{x, y, z}, dims_(3) { check_finite(); }

    std::size_t dims() const { return dims_; }
    double x() const { return c_[0]; }
    double y() const { return c_[1]; }
    double z() const { return c_[2]; }
    double operator[](std::size_t i) const { return c_[i]; }

    friend bool operator==(const Point& a, const Point& b) {
        return a.dims_ == b.dims_ && a.c_ == b.c_;
    }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }

private:
    void check_finite() const {
        for (std::size_t i = 0; i < dims_; ++i) {
            if (!std::isfinite(c_[i])) {
                throw ValidationError("point coordinates must be finite");
            }
        }
    }

    std::array<double, 3> c_;
    std::size_t dims_;
};

// Distance with the spatial blur folded into the metric:
// sqrt(sum of squared coordinate deltas + r_s^2). The sign of r_s is
// irrelevant since it enters squared; the result is always >= |r_s|.
inline double blurred_distance(const Point& source, const Point& speaker, double r_s) {
    if (source.dims() != speaker.dims()) {
        throw ValidationError("dimensionality mismatch between points");
    }
    if (!std::isfinite(r_s)) {
        throw ValidationError("spatial blur must be finite");
    }
    double sq = r_s * r_s;
    for (std::size_t i = 0; i < source.dims(); ++i) {
        const double d = speaker[i] - source[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

inline double distance(const Point& a, const Point& b) {
    return blurred_distance(a, b, 0.0);
}

inline Point centroid(const std::vector<Point>& points) {
    if (points.empty()) {
        throw ValidationError("invalid layout: centroid of an empty point list");
    }
    const std::size_t dims = points.front().dims();
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    for (const Point& p : points) {
        if (p.dims() != dims) {
            throw ValidationError("invalid layout: mixed 2-D and 3-D points");
        }
        for (std::size_t i = 0; i < dims; ++i) acc[i] += p[i];
    }
    const double n = static_cast<double>(points.size());
    return dims == 2 ? Point(acc[0] / n, acc[1] / n)
                     : Point(acc[0] / n, acc[1] / n, acc[2] / n);
}

// Twice the signed area of triangle (o, a, b); positive for a left turn.
inline double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Closest point to p on segment [a, b]. Endpoints are returned exactly.
inline Point closest_point_on_segment(const Point& p, const Point& a, const Point& b) {
    const double abx = b.x() - a.x();
    const double aby = b.y() - a.y();
    const double len2 = abx * abx + aby * aby;
    if (len2 == 0.0) return a;
    double t = ((p.x() - a.x()) * abx + (p.y() - a.y()) * aby) / len2;
    t = std::clamp(t, 0.0, 1.0);
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    return Point(a.x() + t * abx, a.y() + t * aby);
}

class Hull2D;
Hull2D convex_hull_2d(const std::vector<Point>& points);

// Convex hull of a 2-D point set, vertices in counter-clockwise order with
// collinear interior points dropped. Degenerate inputs are kept usable:
// a single point yields one vertex, a collinear set yields the two extreme
// endpoints (a segment). Immutable after construction.
class Hull2D {
public:
    const std::vector<Point>& vertices() const { return verts_; }

    // Boundary points count as inside, so the exterior branch of the
    // original gain law starts its attenuation at distance zero.
    bool contains(const Point& p) const {
        require_2d(p);
        const std::size_t n = verts_.size();
        if (n == 1) return distance(p, verts_[0]) <= kDegenerateTol;
        if (n == 2) {
            return distance(p, closest_point_on_segment(p, verts_[0], verts_[1])) <=
                   kDegenerateTol;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (cross(verts_[i], verts_[(i + 1) % n], p) < -kCollinearTol) return false;
        }
        return true;
    }

    struct Projection {
        Point point;
        double distance = 0.0;
    };

    // Closest boundary point and its Euclidean distance. Points inside or on
    // the boundary project to themselves at distance zero, which also makes
    // projection idempotent.
    Projection project(const Point& p) const {
        require_2d(p);
        if (contains(p)) return {p, 0.0};
        const std::size_t n = verts_.size();
        if (n == 1) return {verts_[0], distance(p, verts_[0])};
        Projection best{verts_[0], std::numeric_limits<double>::infinity()};
        const std::size_t edges = (n == 2) ? 1 : n;
        for (std::size_t i = 0; i < edges; ++i) {
            const Point q = closest_point_on_segment(p, verts_[i], verts_[(i + 1) % n]);
            const double d = distance(p, q);
            if (d < best.distance) best = {q, d};
        }
        return best;
    }

private:
    friend Hull2D convex_hull_2d(const std::vector<Point>&);
    explicit Hull2D(std::vector<Point> verts) : verts_(std::move(verts)) {}

    static void require_2d(const Point& p) {
        if (p.dims() != 2) {
            throw UnsupportedDimensionError("hull queries are 2-D only");
        }
    }

    std::vector<Point> verts_;
};

// Andrew's monotone chain, O(n log n). Only strict turns (cross above the
// collinearity tolerance) are kept as vertices.
inline Hull2D convex_hull_2d(const std::vector<Point>& points) {
    if (points.empty()) {
        throw ValidationError("convex hull of an empty point list");
    }
    for (const Point& p : points) {
        if (p.dims() != 2) {
            throw UnsupportedDimensionError(
                "convex hull construction is 2-D only; the improved algorithm needs no hull");
        }
    }
    std::vector<Point> pts = points;
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const std::size_t n = pts.size();
    if (n <= 2) return Hull2D(std::move(pts));

    std::vector<Point> hull;
    hull.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2], hull.back(), pts[i]) <= kCollinearTol) {
            hull.pop_back();
        }
        hull.push_back(pts[i]);
    }
    const std::size_t lower = hull.size() + 1;
    for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
        while (hull.size() >= lower &&
               cross(hull[hull.size() - 2], hull.back(), pts[i]) <= kCollinearTol) {
            hull.pop_back();
        }
        hull.push_back(pts[i]);
    }
    hull.pop_back();  // closing point duplicates the first
    return Hull2D(std::move(hull));
}

}  // namespace dbap
