#include <doctest.h>

#include "subalip/regproj.hpp"

#include <cmath>

using namespace subalip;

namespace {

Polynomial P(const std::string& text) { return parse_formula(text + " = 0").polynomial(); }
Box box_of(long lo, long hi) { return Box{lo, hi, lo, hi}; }

}  // namespace

TEST_CASE("circle branches match the closed form") {
    ConeSpec cone{{0, 0}, 0.0, 0.4, {}, std::nullopt};
    auto traces = trace_branches({P("x^2 + y^2 - 1")}, cone, 64);
    REQUIRE(traces.size() == 2);
    for (const auto& t : traces) {
        CHECK(t.clean);
        REQUIRE(t.samples.size() == 128);
        double sign = t.ordinal == 0 ? -1.0 : 1.0;
        for (const auto& [eta, lambda] : t.samples) CHECK(std::abs(lambda - sign / std::sqrt(1 + eta * eta)) < 1e-6);
    }
}

TEST_CASE("circle regularity and gradient ratio") {
    std::vector<Polynomial> X{P("x^2 + y^2 - 1")};
    ConeSpec cone{{0, 0}, 0.0, 0.4, {}, std::nullopt};
    auto r = check_regularity(X, cone, 1.0, 64);
    CHECK(r.finite);
    CHECK(r.clean);
    CHECK(r.branch_count == 2);
    CHECK(r.verdict);
    // |lambda'| / |lambda| = |eta| / (1 + eta^2), largest at the outermost interior sample.
    const double h = 0.4 / 64, eta = 0.4 - 1.5 * h;
    CHECK(r.gradient_ratio_max == doctest::Approx(eta / (1 + eta * eta)).epsilon(0.01));
    CHECK(r.gradient_ratio_max < 0.4 / 1.16);
    CHECK_FALSE(check_regularity(X, cone, 0.01, 64).verdict);

    // Halving the step changes the estimate by less than 5%.
    auto fine = check_regularity(X, cone, 1.0, 128);
    CHECK(std::abs(fine.gradient_ratio_max - r.gradient_ratio_max) < 0.05 * r.gradient_ratio_max);
}

TEST_CASE("apex on the curve is unclean") {
    ConeSpec cone{{0, 0}, 0.3, 0.05, {}, std::nullopt};
    auto traces = trace_branches({P("y^2 - x^3")}, cone, 32);
    bool unclean = false;
    for (const auto& t : traces) unclean = unclean || !t.clean;
    CHECK(unclean);
    CHECK_FALSE(check_regularity({P("y^2 - x^3")}, cone, 32).verdict);
}

TEST_CASE("cusp curve seen from (2, 0)") {
    ConeSpec cone{{2, 0}, 0.0, 0.1, {}, box_of(-4, 4)};
    auto traces = trace_branches({P("y^2 - x^3")}, cone, 32);
    REQUIRE(traces.size() == 2);
    for (const auto& t : traces) {
        CHECK(t.clean);
        CHECK(t.samples.size() == 64);
    }
    // Without the window the unbounded part of the cubic adds a branch at lambda ~ 1/eta^3.
    ConeSpec unbounded = cone;
    unbounded.window.reset();
    CHECK_FALSE(check_regularity({P("y^2 - x^3")}, unbounded, 32).clean);
}

TEST_CASE("vertical segment breaks finiteness") {
    ConeSpec cone{{0, 0}, 0.0, 0.1, {}, std::nullopt};
    auto r = check_regularity({P("x - 1"), P("x^2 + y^2 - 4")}, cone, 32);
    CHECK_FALSE(r.finite);
    CHECK_FALSE(r.verdict);
}

TEST_CASE("find_regular_direction") {
    std::vector<Polynomial> circle{P("x^2 + y^2 - 1")};
    CHECK(find_regular_direction(circle, {0, 0}, {0, 1, -1}, 1.0, 0.1) == std::optional<std::size_t>(0));
    // A vertical line is parallel to candidate 0's lines.
    auto idx = find_regular_direction({P("x - 1")}, {0, 0}, {0, 1, -1}, 2.0, 0.1);
    REQUIRE(idx.has_value());
    CHECK(*idx != 0);
    // Far away from a compact X the cone meets nothing.
    CHECK(find_regular_direction(circle, {100, 100}, {0, 1, -1}, 1.0, 0.1) == std::optional<std::size_t>(0));
    auto far = check_regularity(circle, ConeSpec{{100, 100}, 0.0, 0.1, {}, std::nullopt}, 1.0);
    CHECK(far.branch_count == 0);
    CHECK_THROWS(find_regular_direction(circle, {0, 0}, {0, 1}, 1.0, 0.1));
}

TEST_CASE("swapped frame cones") {
    // In the swapped frame the cone opens around the x axis.
    ConeSpec cone{{0, 0}, 0.0, 0.1, ProjectionSpec::swap(), std::nullopt};
    CHECK(cone.contains({1, 0.05}));
    CHECK_FALSE(cone.contains({0.05, 1}));
    auto r = check_regularity({P("x - 1")}, cone, 1.0);
    CHECK(r.finite);
    CHECK(r.verdict);
}

TEST_CASE("aperture halving") {
    std::vector<Polynomial> X{P("x^2 + y^2 - 1")};
    auto disc = discriminant_set(parse_formula("x^2 + y^2 < 1"), ProjectionSpec::identity());
    // The critical points (+-1, 0) are horizontal from the center: not in a vertical cone.
    CHECK(choose_aperture(X, disc, ConeSpec{{0, 0}, 0.0, 1.0, {}, std::nullopt}) == 0.25);
    // From (0.95, -0.5) the point (1, 0) sits at eta = 0.1: two halvings.
    CHECK(choose_aperture(X, disc, ConeSpec{{0.95, -0.5}, 0.0, 1.0, {}, std::nullopt}) == 0.0625);
}

TEST_CASE("cone_distance_check") {
    Formula disk = parse_formula("x^2 + y^2 < 1");
    auto samples = sample_boundary(disk, box_of(-2, 2), 1024);
    auto disc = discriminant_set(disk, ProjectionSpec::identity());
    auto r = cone_distance_check(samples, ConeSpec{{0, 0}, 0.0, 0.2, {}, std::nullopt}, disc, 64);
    CHECK_FALSE(r.degenerate);
    CHECK(r.distance_outside_cone == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.distance_to_discriminant == doctest::Approx(1.0));
    CHECK(r.pass);

    // A small circle entirely inside the cone.
    Formula tiny = parse_formula("x^2 + (y - 5)^2 < 1/100");
    auto tiny_samples = sample_boundary(tiny, box_of(-6, 6), 2048);
    auto t = cone_distance_check(tiny_samples, ConeSpec{{0, 0}, 0.0, 0.2, {}, std::nullopt},
                                 discriminant_set(tiny, ProjectionSpec::identity()), 1.0);
    CHECK(t.degenerate);
    CHECK(t.pass);

    // Cusp seen sideways from (1/2, 0): the swapped frame with a tilted direction.
    Formula cusp = parse_formula("y^2 < x^3 and x < 1");
    ConeSpec side{{0.5, 0}, 0.5, 0.05, ProjectionSpec::swap(), box_of(-2, 2)};
    auto cusp_disc = discriminant_set(cusp, side.projection());
    auto c = cone_distance_check(sample_boundary(cusp, box_of(-2, 2), 2048), side, cusp_disc, 64);
    CHECK(std::isfinite(c.ratio));
    CHECK(c.pass);
}
