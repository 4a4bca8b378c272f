#include <doctest.h>

#include "subalip/distance.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace subalip;

namespace {
Box box_of(long lo, long hi) { return Box{lo, hi, lo, hi}; }
}  // namespace

TEST_CASE("bucketed nearest neighbour agrees with brute force") {
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> coord(-3, 3);
    for (int n : {1, 7, 500, 5000}) {
        std::vector<Point> pts;
        for (int i = 0; i < n; ++i) pts.push_back({coord(rng), 0.1 * coord(rng)});
        PointCloud cloud(pts);
        for (int q = 0; q < 200; ++q) {
            Point p{2 * coord(rng), 2 * coord(rng)};
            double brute = std::numeric_limits<double>::infinity();
            for (const auto& s : pts) brute = std::min(brute, distance(p, s));
            CHECK(cloud.nearest(p) == brute);
        }
    }
    CHECK(std::isinf(PointCloud().nearest({0, 0})));
}

TEST_CASE("distance_to_boundary examples") {
    auto disk = boundary_distance_field(parse_formula("x^2 + y^2 < 1"), box_of(-2, 2));
    CHECK(disk({0, 0}) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(disk.tolerance() <= 1e-2);

    auto square = boundary_distance_field(parse_formula("x > 0 and x < 1 and y > 0 and y < 1"), box_of(-1, 2));
    CHECK(square({0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(square({0.9, 0.5}) == doctest::Approx(0.1).epsilon(1e-2));

    // Near the cusp tip the distance behaves like a^(3/2).
    auto cusp = boundary_distance_field(parse_formula("y^2 < x^3 and x < 1"), box_of(-2, 2), 8192);
    for (double a : {0.05, 0.1, 0.2}) {
        double d = cusp({a, 0});
        CHECK(d <= std::pow(a, 1.5) + cusp.tolerance());
        CHECK(d >= 0.8 * std::pow(a, 1.5) - cusp.tolerance());
    }
    CHECK_THROWS(boundary_distance_field(parse_formula("x^2 + y^2 < -1"), box_of(-2, 2)));
}

TEST_CASE("boundary samples lie on the boundary only") {
    Formula U = parse_formula("x^2 + y^2 < 1 and not x^2 + y^2 <= 1/4");
    auto pts = sample_boundary(U, box_of(-2, 2), 512);
    REQUIRE(!pts.empty());
    for (const auto& p : pts) {
        double r = std::hypot(p.x, p.y);
        CHECK((std::abs(r - 1) < 1e-9 || std::abs(r - 0.5) < 1e-9));
    }
    // A zero set that passes through the interior is not boundary.
    Formula V = parse_formula("x^2 + y^2 < 1 and (y < 0 or y >= 0)");
    for (const auto& p : sample_boundary(V, box_of(-2, 2), 256)) CHECK(std::abs(std::hypot(p.x, p.y) - 1) < 1e-9);
}

TEST_CASE("refining the boundary sampling does not increase distances beyond tolerance") {
    Formula U = parse_formula("y^2 < x^3 and x < 1");
    auto coarse = boundary_distance_field(U, box_of(-2, 2), 1024);
    auto fine = boundary_distance_field(U, box_of(-2, 2), 4096);
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> c(-1.5, 1.5);
    for (int i = 0; i < 300; ++i) {
        Point p{c(rng), c(rng)};
        CHECK(fine(p) <= coarse(p) + fine.tolerance());
        CHECK(coarse(p) <= fine(p) + coarse.tolerance());
    }
}

TEST_CASE("cylinder boundary samples") {
    Formula U = parse_formula("x^2 + y^2 < 1");
    auto d = decompose(U, box_of(-2, 2));
    REQUIRE(d.cylinders.size() == 1);
    auto pts = sample_cylinder_boundary(d.cylinders[0], d.proj, 1e-3);
    PointCloud cloud(pts);
    // The cylinder over (-1, 1) has the whole circle as boundary.
    for (int k = 0; k < 360; ++k) {
        double a = k * M_PI / 180;
        CHECK(cloud.nearest({std::cos(a), std::sin(a)}) < 3e-3);
    }
}
