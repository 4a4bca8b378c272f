#include <doctest.h>

#include "oracles.hpp"
#include "subalip/cylinder.hpp"
#include "subalip/elimination.hpp"

#include <cmath>

using namespace subalip;

namespace {

Polynomial P(const std::string& text) { return parse_formula(text + " = 0").polynomial(); }
Rational R(long n, long d = 1) { return make_rational(n, d); }
Box box_of(long lo, long hi) { return Box{lo, hi, lo, hi}; }

const char* kDisk = "x^2 + y^2 < 1";
const char* kCusp = "y^2 < x^3 and x < 1";
const char* kSquare = "x > 0 and x < 1 and y > 0 and y < 1";

std::vector<double> approx(const DiscriminantSet& d) {
    std::vector<double> out;
    for (const auto& p : d.points) out.push_back(p.to_double());
    return out;
}

}  // namespace

TEST_CASE("boundary_polynomials") {
    auto disk = boundary_polynomials(parse_formula(kDisk), box_of(-2, 2));
    REQUIRE(disk.size() == 1);
    CHECK(disk[0] == P("x^2 + y^2 - 1"));

    auto cusp = boundary_polynomials(parse_formula(kCusp), box_of(-2, 2));
    REQUIRE(cusp.size() == 2);
    CHECK(cusp[0] == P("y^2 - x^3"));
    CHECK(cusp[1] == P("x - 1"));

    Formula empty = parse_formula("x < 0 and x > 1");
    CHECK(boundary_polynomials(empty, box_of(-2, 2)).size() == 2);
    CHECK(decompose(empty, box_of(-2, 2)).cylinders.empty());

    CHECK_THROWS_AS(boundary_polynomials(parse_formula("x^2 + y^2 < 9"), box_of(-2, 2)), UnboundedSetError);
    CHECK_THROWS_AS(boundary_polynomials(parse_formula("y > x^2"), box_of(-2, 2)), UnboundedSetError);
    // Touching the box only in the closure is fine.
    CHECK_NOTHROW(boundary_polynomials(parse_formula(kDisk), box_of(-1, 1)));
}

TEST_CASE("ensure_finite_projection") {
    CHECK(ensure_finite_projection(parse_formula(kCusp), {ProjectionSpec::identity(), ProjectionSpec::swap()}) ==
          ProjectionSpec::swap());
    CHECK(ensure_finite_projection(parse_formula(kDisk), {ProjectionSpec::identity()}) == ProjectionSpec::identity());
    CHECK(ensure_finite_projection(parse_formula(kSquare), {ProjectionSpec::identity(), ProjectionSpec::sheared(1)}) ==
          ProjectionSpec::sheared(1));
    CHECK_THROWS_AS(ensure_finite_projection(parse_formula(kSquare), {ProjectionSpec::identity(), ProjectionSpec::swap()}),
                    NoFiniteProjectionError);
}

TEST_CASE("projection maps are inverse to each other") {
    for (const auto& proj : {ProjectionSpec::swap(), ProjectionSpec::sheared(R(-3, 2)), ProjectionSpec::rotated(R(1, 3)),
                             ProjectionSpec{R(1, 2), true, R(2, 5)}}) {
        auto uv = proj.forward(R(3, 7), R(-5, 11));
        auto xy = proj.backward(uv[0], uv[1]);
        CHECK(xy[0] == R(3, 7));
        CHECK(xy[1] == R(-5, 11));
        Polynomial p = P("x^3 - 2*x*y + y^2 - 1/3");
        Polynomial t = proj.transform(p);
        std::vector<Rational> at_xy{R(3, 7), R(-5, 11)}, at_uv{uv[0], uv[1]};
        CHECK(t.eval(at_uv) == p.eval(at_xy));
    }
}

TEST_CASE("discriminant_set") {
    SUBCASE("unit disk") {
        // Sylvester oracle: Res_y(x^2 + y^2 - 1, 2y) vanishes exactly at x = +-1.
        Polynomial res = oracle::laplace_determinant(oracle::sylvester(P("x^2 + y^2 - 1"), P("2*y"), 1));
        CHECK(res == P("4*x^2 - 4"));
        auto d = discriminant_set(parse_formula(kDisk), ProjectionSpec::identity());
        REQUIRE(d.points.size() == 2);
        CHECK(d.points[0].compare(-1) == 0);
        CHECK(d.points[1].compare(1) == 0);
        CHECK(d.provenance[0] == CriticalValue);
    }
    SUBCASE("cusp projected to y") {
        auto d = discriminant_set(parse_formula(kCusp), ProjectionSpec::swap());
        REQUIRE(d.points.size() == 3);
        CHECK(d.points[0].compare(-1) == 0);
        CHECK(d.points[1].compare(0) == 0);
        CHECK(d.points[2].compare(1) == 0);
        CHECK((d.provenance[1] & CriticalValue));
        CHECK((d.provenance[0] & SingularImage));
    }
    SUBCASE("square under the shear") {
        // Corner images u = x + y: 0, 1, 1, 2. Two corners share u = 1.
        auto d = discriminant_set(parse_formula(kSquare), ProjectionSpec::sheared(1));
        REQUIRE(d.points.size() == 3);
        CHECK(approx(d) == std::vector<double>{0, 1, 2});
    }
    SUBCASE("extra slope polynomials are merged") {
        auto d = discriminant_set(parse_formula(kDisk), ProjectionSpec::identity(), {UPoly({R(-1, 4), 0, 1}), UPoly({-1, 1})});
        REQUIRE(d.points.size() == 4);
        CHECK(d.provenance[3] == (CriticalValue | SlopeLocus));
        CHECK(d.provenance[1] == SlopeLocus);
    }
}

TEST_CASE("base_cells") {
    auto kinds = [](const std::vector<Cell1D>& cells) {
        std::string s;
        for (const auto& c : cells) s += c.is_point() ? 'p' : 'o';
        return s;
    };
    DiscriminantSet d;
    d.points = {IsolatedRoot::exact(-1), IsolatedRoot::exact(1)};
    d.provenance = {0, 0};
    auto cells = base_cells(d, Interval(-2, 2));
    CHECK(kinds(cells) == "opopo");
    CHECK(cells[0].lo.compare(-2) == 0);
    CHECK(cells[0].lo_is_box);
    CHECK(cells[2].contains(R(0)));
    CHECK_FALSE(cells[2].contains(R(1)));
    CHECK(cells[3].contains(R(1)));

    CHECK(kinds(base_cells(DiscriminantSet{}, Interval(0, 1))) == "o");

    d.points = {IsolatedRoot::exact(0)};
    d.provenance = {0};
    cells = base_cells(d, Interval(-1, 1));
    CHECK(kinds(cells) == "opo");
    for (const auto& c : cells)
        if (!c.is_point()) CHECK(c.contains(c.sample));

    // Points outside the box are dropped.
    d.points = {IsolatedRoot::exact(-5), IsolatedRoot::exact(0), IsolatedRoot::exact(5)};
    d.provenance = {0, 0, 0};
    CHECK(kinds(base_cells(d, Interval(-1, 1))) == "opo");
}

TEST_CASE("lift_cells") {
    SUBCASE("unit disk") {
        Formula U = parse_formula(kDisk);
        auto cells = base_cells(discriminant_set(U, ProjectionSpec::identity()), Interval(-2, 2));
        auto cyl = lift_cells(U, ProjectionSpec::identity(), cells);
        REQUIRE(cyl.size() == 1);
        CHECK(cyl[0].lower.poly == P("x^2 + y^2 - 1"));
        CHECK(cyl[0].lower.branch_index == 0);
        CHECK(cyl[0].upper.branch_index == 1);
        CHECK(cyl[0].base.contains(R(0)));
        // Nothing over (1, 2).
        CHECK(lift_cells(U, ProjectionSpec::identity(), {cells[4]}).empty());

        CHECK(cyl_membership(cyl[0], ProjectionSpec::identity(), 0, 0));
        CHECK_FALSE(cyl_membership(cyl[0], ProjectionSpec::identity(), 0, 2));
        CHECK_FALSE(cyl_membership(cyl[0], ProjectionSpec::identity(), 3, 0));
    }
    SUBCASE("cusp projected to y") {
        Formula U = parse_formula(kCusp);
        auto cells = base_cells(discriminant_set(U, ProjectionSpec::swap()), Interval(-2, 2));
        auto cyl = lift_cells(U, ProjectionSpec::swap(), cells);
        REQUIRE(cyl.size() == 2);
        const auto& upper_half = cyl[1];
        CHECK(upper_half.base.contains(R(1, 2)));
        // Lower branch: x = y^(2/3); upper branch: x = 1.
        CHECK(upper_half.lower.poly == P("y^3 - x^2"));
        CHECK(upper_half.upper.poly == P("y - 1"));
        IsolatedRoot at = upper_half.lower.at(R(1, 8));
        CHECK(at.compare(R(1, 4)) == 0);
    }
    SUBCASE("unbounded fiber is rejected") {
        Formula U = parse_formula("x^2 < 1");
        CHECK_THROWS_AS(decompose_with(U, box_of(-2, 2), ProjectionSpec::identity()), UnboundedSetError);
    }
}

namespace {

// Grid properties shared by every test set.
void check_partition(const char* text, const Box& box, int n) {
    Formula U = parse_formula(text);
    auto d = decompose(U, box);
    const Rational hx = box.width() / n, hy = box.height() / n;
    int covered = 0, inside = 0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            Rational x = box.xlo + hx * i, y = box.ylo + hy * j;
            std::vector<Rational> pt{x, y};
            bool in_u = formula_membership(U, pt);
            int hits = 0;
            for (const auto& c : d.cylinders) hits += cyl_membership(c, d.proj, x, y) ? 1 : 0;
            CHECK_MESSAGE(hits <= 1, text);
            if (hits > 0) CHECK_MESSAGE(in_u, text);
            if (!in_u) continue;
            ++inside;
            // Completeness away from the discriminant points.
            Rational u = d.proj.forward(x, y)[0];
            bool near = false;
            for (const auto& p : d.disc.points) near = near || std::abs(p.to_double() - u.get_d()) < 1e-9;
            if (!near) CHECK_MESSAGE(hits == 1, text);
            covered += hits;
        }
    CHECK(covered > 0);
    CHECK(covered <= inside);
}

}  // namespace

TEST_CASE("cylinders partition the set on an exact grid") {
    check_partition(kDisk, box_of(-2, 2), 24);
    check_partition(kCusp, box_of(-2, 2), 24);
    check_partition(kSquare, box_of(-1, 2), 18);
    check_partition("x^2 + y^2 < 1 and x^2 + y^2 > 1/4", box_of(-2, 2), 24);
    check_partition("(x + 1/2)^2 + y^2 < 1 or (x - 1/2)^2 + y^2 < 1", box_of(-2, 2), 24);
}

TEST_CASE("branches never cross and fibers have positive gap") {
    for (const char* text : {kDisk, kCusp, "x^2 + y^2 < 1 and x^2 + y^2 > 1/4", "x^2 + y^2 < 1 and y > x^3"}) {
        auto d = decompose(parse_formula(text), box_of(-2, 2));
        for (const auto& c : d.cylinders) {
            BranchEvaluator lo(c.lower), hi(c.upper);
            double a = c.base.lo.to_double(), b = c.base.hi.to_double();
            for (int k = 1; k <= 100; ++k) {
                double u = a + (b - a) * k / 101.0;
                double vl = lo(u), vh = hi(u);
                REQUIRE_MESSAGE(std::isfinite(vl), text);
                REQUIRE_MESSAGE(std::isfinite(vh), text);
                CHECK_MESSAGE(vl < vh, text);
            }
        }
    }
}

TEST_CASE("the closure of the projection adds only discriminant points") {
    for (const char* text : {kDisk, kCusp, "(x + 1/2)^2 + y^2 < 1 or (x - 1/2)^2 + y^2 < 1", "x^2 + y^2 < 1 and y > x^3"}) {
        Formula U = parse_formula(text);
        auto d = decompose(U, box_of(-2, 2));
        auto inv = d.proj.inverse_double();
        auto in_projection = [&](double u) {
            for (int k = 0; k <= 2000; ++k) {
                double v = -3.0 + 6.0 * k / 2000.0;
                std::vector<double> xy{inv[0] * u + inv[1] * v, inv[2] * u + inv[3] * v};
                if (U.contains(xy)) return true;
            }
            return false;
        };
        const double h = 1.0 / 512;
        bool prev = in_projection(-2.5);
        for (double u = -2.5 + h; u <= 2.5; u += h) {
            bool cur = in_projection(u);
            if (cur != prev) {
                bool near = false;
                for (const auto& p : d.disc.points) near = near || std::abs(p.to_double() - (u - h / 2)) <= h;
                CHECK_MESSAGE(near, text << " transition at " << u);
            }
            prev = cur;
        }
    }
}

TEST_CASE("real_roots_numeric") {
    auto r = real_roots_numeric({-2, 0, 1}, -3, 3);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(-std::sqrt(2.0)));
    CHECK(r[1] == doctest::Approx(std::sqrt(2.0)));
    CHECK(real_roots_numeric({1, 0, 1}, -3, 3).empty());
    r = real_roots_numeric({0, -1, 0, 1}, -3, 3);
    REQUIRE(r.size() == 3);
    CHECK(r[1] == doctest::Approx(0.0));
}

TEST_CASE("decomposition report") {
    auto d = decompose(parse_formula(kCusp), box_of(-2, 2));
    auto j = to_json(d);
    CHECK(j["projection"] == "swap");
    CHECK(j["discriminant_points"].size() == 3);
    CHECK(j["cylinders"].size() == 2);
    CHECK(j["branches"].size() == 4);
    CHECK(j["base_cells"][3]["kind"] == "point");
}
