#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "dbap/geometry.hpp"

using dbap::Hull2D;
using dbap::Point;
using Catch::Approx;

namespace {

const std::vector<Point> kAsym10 = {{-2.0, -1.0}, {-2.5, 5.0},  {1.0, -5.0},  {-9.5, 9.0},
                                    {-1.0, 2.0},  {9.5, -2.0},  {-2.0, -10.0}, {-3.5, 4.5},
                                    {4.0, 4.0},   {-9.5, -1.5}};

std::vector<Point> grid3x3_points() {
    std::vector<Point> pts;
    for (double y : {-5.0, 0.0, 5.0}) {
        for (double x : {-5.0, 0.0, 5.0}) pts.emplace_back(x, y);
    }
    return pts;
}

double tri_cross(const Point& o, const Point& a, const Point& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Boundary counts as inside; degenerate triangles are skipped.
bool triangle_contains(const Point& a, const Point& b, const Point& c, const Point& p) {
    if (std::abs(tri_cross(a, b, c)) <= 1e-12) return false;
    const double d1 = tri_cross(a, b, p);
    const double d2 = tri_cross(b, c, p);
    const double d3 = tri_cross(c, a, p);
    const bool has_neg = d1 < -1e-12 || d2 < -1e-12 || d3 < -1e-12;
    const bool has_pos = d1 > 1e-12 || d2 > 1e-12 || d3 > 1e-12;
    return !(has_neg && has_pos);
}

// Brute-force convex-hull membership: p lies in the hull of pts iff some
// triangle of pts contains it. Independent of the hull implementation.
bool in_hull_of(const std::vector<Point>& pts, const Point& p) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                if (triangle_contains(pts[i], pts[j], pts[k], p)) return true;
            }
        }
    }
    return false;
}

// A point of the set is a hull vertex iff it is not in the hull of the rest.
std::vector<Point> brute_force_hull_vertices(const std::vector<Point>& pts) {
    std::vector<Point> vertices;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<Point> others;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j != i) others.push_back(pts[j]);
        }
        if (!in_hull_of(others, pts[i])) vertices.push_back(pts[i]);
    }
    return vertices;
}

bool same_vertex_set(const std::vector<Point>& a, const std::vector<Point>& b) {
    if (a.size() != b.size()) return false;
    for (const Point& p : a) {
        if (std::find(b.begin(), b.end(), p) == b.end()) return false;
    }
    return true;
}

// Minimum distance from p to the hull boundary found by dense sampling,
// n_samples points spread over the edges proportionally to length.
double dense_boundary_distance(const Hull2D& hull, const Point& p, std::size_t n_samples) {
    const auto& v = hull.vertices();
    const std::size_t edges = v.size() == 2 ? 1 : v.size();
    double perimeter = 0.0;
    for (std::size_t i = 0; i < edges; ++i) {
        perimeter += dbap::distance(v[i], v[(i + 1) % v.size()]);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < edges; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        const double len = dbap::distance(a, b);
        const auto steps = static_cast<std::size_t>(
            std::ceil(static_cast<double>(n_samples) * len / perimeter));
        for (std::size_t s = 0; s <= steps; ++s) {
            const double t = static_cast<double>(s) / static_cast<double>(steps);
            const Point q(a.x() + t * (b.x() - a.x()), a.y() + t * (b.y() - a.y()));
            best = std::min(best, dbap::distance(p, q));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("points reject non-finite coordinates", "[geometry]") {
    CHECK_THROWS_AS(Point(std::nan(""), 0.0), dbap::ValidationError);
    CHECK_THROWS_AS(Point(0.0, std::numeric_limits<double>::infinity()), dbap::ValidationError);
    CHECK_THROWS_AS(Point(0.0, 0.0, -std::numeric_limits<double>::infinity()),
                    dbap::ValidationError);
    CHECK(Point(1.0, 2.0).dims() == 2);
    CHECK(Point(1.0, 2.0, 3.0).dims() == 3);
}

TEST_CASE("centroid", "[geometry]") {
    SECTION("asym10 layout") {
        const Point c = dbap::centroid(kAsym10);
        CHECK(c.x() == Approx(-1.55).margin(1e-12));
        CHECK(c.y() == Approx(0.5).margin(1e-12));
    }
    SECTION("single point is its own centroid") {
        const Point c = dbap::centroid({Point(3.0, -7.0)});
        CHECK(c.x() == 3.0);
        CHECK(c.y() == -7.0);
    }
    SECTION("symmetric grid centers on the origin") {
        const Point c = dbap::centroid(grid3x3_points());
        CHECK(c.x() == Approx(0.0).margin(1e-15));
        CHECK(c.y() == Approx(0.0).margin(1e-15));
    }
    SECTION("empty input") {
        CHECK_THROWS_AS(dbap::centroid({}), dbap::ValidationError);
    }
    SECTION("3-D mean") {
        const Point c = dbap::centroid({Point(0, 0, 0), Point(2, 4, 6)});
        CHECK(c.z() == Approx(3.0));
    }
}

TEST_CASE("blurred distance", "[geometry]") {
    CHECK(dbap::blurred_distance(Point(2, 3), Point(2, 3), 1.0) == Approx(1.0));
    CHECK(dbap::blurred_distance(Point(0, 0), Point(3, 4), 0.0) == Approx(5.0));
    CHECK(dbap::blurred_distance(Point(0, 0), Point(3, 4), 2.0) ==
          Approx(std::sqrt(29.0)).epsilon(1e-12));
    CHECK_THROWS_AS(dbap::blurred_distance(Point(0, 0), Point(0, 0, 0), 1.0),
                    dbap::ValidationError);
    CHECK_THROWS_AS(dbap::blurred_distance(Point(0, 0), Point(1, 1), std::nan("")),
                    dbap::ValidationError);

    SECTION("sign of the blur never matters and bounds the result") {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> coord(-20.0, 20.0);
        std::uniform_real_distribution<double> blur(-5.0, 5.0);
        for (int i = 0; i < 300; ++i) {
            const Point a(coord(rng), coord(rng));
            const Point b(coord(rng), coord(rng));
            const double rs = blur(rng);
            const double plus = dbap::blurred_distance(a, b, rs);
            const double minus = dbap::blurred_distance(a, b, -rs);
            CHECK(plus == minus);
            CHECK(plus >= std::abs(rs));
        }
    }
}

TEST_CASE("convex hull construction", "[geometry]") {
    SECTION("grid collapses to its four corners") {
        const Hull2D hull = dbap::convex_hull_2d(grid3x3_points());
        REQUIRE(hull.vertices().size() == 4);
        CHECK(same_vertex_set(hull.vertices(),
                              {Point(-5, -5), Point(5, -5), Point(5, 5), Point(-5, 5)}));
        // CCW orientation: positive signed area
        double area2 = 0.0;
        const auto& v = hull.vertices();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point& a = v[i];
            const Point& b = v[(i + 1) % v.size()];
            area2 += a.x() * b.y() - b.x() * a.y();
        }
        CHECK(area2 > 0.0);
    }
    SECTION("three non-collinear points keep all three") {
        const Hull2D hull = dbap::convex_hull_2d({Point(0, 0), Point(4, 0), Point(1, 3)});
        CHECK(hull.vertices().size() == 3);
    }
    SECTION("asym10 matches the brute-force vertex test") {
        const Hull2D hull = dbap::convex_hull_2d(kAsym10);
        CHECK(same_vertex_set(hull.vertices(), brute_force_hull_vertices(kAsym10)));
    }
    SECTION("every input point is contained") {
        const Hull2D hull = dbap::convex_hull_2d(kAsym10);
        for (const Point& p : kAsym10) CHECK(hull.contains(p));
    }
    SECTION("collinear input degenerates to a segment") {
        const Hull2D hull =
            dbap::convex_hull_2d({Point(0, 0), Point(1, 1), Point(2, 2), Point(3, 3)});
        REQUIRE(hull.vertices().size() == 2);
        CHECK(same_vertex_set(hull.vertices(), {Point(0, 0), Point(3, 3)}));
        CHECK(hull.contains(Point(1.5, 1.5)));
        CHECK_FALSE(hull.contains(Point(1.5, 1.6)));
        CHECK_FALSE(hull.contains(Point(4, 4)));
    }
    SECTION("duplicates collapse") {
        const Hull2D hull = dbap::convex_hull_2d({Point(1, 1), Point(1, 1)});
        CHECK(hull.vertices().size() == 1);
        CHECK(hull.contains(Point(1, 1)));
        CHECK_FALSE(hull.contains(Point(1, 2)));
    }
    SECTION("errors") {
        CHECK_THROWS_AS(dbap::convex_hull_2d({}), dbap::ValidationError);
        CHECK_THROWS_AS(dbap::convex_hull_2d({Point(0, 0, 0)}),
                        dbap::UnsupportedDimensionError);
    }
}

TEST_CASE("hull containment", "[geometry]") {
    const Hull2D hull = dbap::convex_hull_2d(grid3x3_points());
    CHECK(hull.contains(Point(0, 0)));
    CHECK_FALSE(hull.contains(Point(10, 0)));
    CHECK(hull.contains(Point(5, 0)));  // boundary counts as inside
    CHECK(hull.contains(Point(5, 5)));  // vertex counts as inside

    SECTION("agrees with the signed-edge-distance oracle") {
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> coord(-8.0, 8.0);
        const auto& v = hull.vertices();
        for (int i = 0; i < 1000; ++i) {
            const Point p(coord(rng), coord(rng));
            double min_signed = std::numeric_limits<double>::infinity();
            for (std::size_t e = 0; e < v.size(); ++e) {
                const Point& a = v[e];
                const Point& b = v[(e + 1) % v.size()];
                const double signed_dist = tri_cross(a, b, p) / dbap::distance(a, b);
                min_signed = std::min(min_signed, signed_dist);
            }
            CHECK(hull.contains(p) == (min_signed >= 0.0));
        }
    }
}

TEST_CASE("hull projection", "[geometry]") {
    const Hull2D hull = dbap::convex_hull_2d(grid3x3_points());

    SECTION("orthogonal to an edge") {
        const auto proj = hull.project(Point(7, 0));
        CHECK(proj.point == Point(5, 0));
        CHECK(proj.distance == Approx(2.0));
    }
    SECTION("vertex region") {
        const auto proj = hull.project(Point(7, 7));
        CHECK(proj.point == Point(5, 5));
        CHECK(proj.distance == Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    }
    SECTION("interior points project to themselves") {
        const auto proj = hull.project(Point(1, -2));
        CHECK(proj.point == Point(1, -2));
        CHECK(proj.distance == 0.0);
    }
    SECTION("points in a vertex wedge share the projection") {
        const double d = 3.0;
        for (double deg : {10.0, 35.0, 80.0}) {
            const double rad = deg * std::numbers::pi / 180.0;
            const auto proj =
                hull.project(Point(5.0 + d * std::cos(rad), 5.0 + d * std::sin(rad)));
            CHECK(proj.point == Point(5, 5));
            CHECK(proj.distance == Approx(d).epsilon(1e-12));
        }
    }
    SECTION("projection is idempotent") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> coord(-30.0, 30.0);
        int tested = 0;
        while (tested < 100) {
            const Point p(coord(rng), coord(rng));
            if (hull.contains(p)) continue;
            ++tested;
            const auto proj = hull.project(p);
            const auto again = hull.project(proj.point);
            CHECK(again.distance == 0.0);
            CHECK(again.point == proj.point);
        }
    }
    SECTION("matches dense boundary sampling") {
        const Hull2D asym = dbap::convex_hull_2d(kAsym10);
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> radius(12.0, 40.0);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        int tested = 0;
        while (tested < 50) {
            const double r = radius(rng);
            const double t = angle(rng);
            const Point p(r * std::cos(t), r * std::sin(t));
            if (asym.contains(p)) continue;
            ++tested;
            const auto proj = asym.project(p);
            CHECK(proj.distance == Approx(dense_boundary_distance(asym, p, 100000)).margin(1e-3));
        }
    }
    SECTION("segment hull projection") {
        const Hull2D seg = dbap::convex_hull_2d({Point(0, 0), Point(10, 0)});
        const auto proj = seg.project(Point(3, 4));
        CHECK(proj.point == Point(3, 0));
        CHECK(proj.distance == Approx(4.0));
        const auto beyond = seg.project(Point(13, 4));
        CHECK(beyond.point == Point(10, 0));
        CHECK(beyond.distance == Approx(5.0));
    }
}
