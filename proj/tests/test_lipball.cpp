#include <doctest.h>

#include "subalip/lipball.hpp"

#include <cmath>
#include <random>

using namespace subalip;

namespace {

const char* const kSets[] = {
    "x^2 + y^2 < 1",
    "0 < x and x < 1 and 0 < y and y < 1",
    "y^2 < x^3 and x < 1",
    "x^2 + y^2 < 1 and y > 0",
    "(x + 1/2)^2 + y^2 < 1 or (x - 1/2)^2 + y^2 < 1",
    "x^2 + y^2 < 1 and not x^2 + y^2 <= 1/4",
};

Polynomial P(const std::string& text) { return parse_formula(text + " = 0").polynomial(); }

Cell1D open_base(const Rational& lo, const Rational& hi) {
    Cell1D c;
    c.lo = IsolatedRoot::exact(lo);
    c.hi = IsolatedRoot::exact(hi);
    c.sample = (lo + hi) / 2;
    return c;
}

RootFunction branch(const std::string& poly, int index, const Rational& lo, const Rational& hi) {
    return RootFunction{P(poly), index, open_base(lo, hi)};
}

LRegularCell square_cell() {
    LRegularCell c;
    c.base = open_base(0, 1);
    c.lower = RootFunction{P("y"), 0, c.base};
    c.upper = RootFunction{P("y - 1"), 0, c.base};
    c.sample_u = Rational(1, 2);
    c.sample_v = Rational(1, 2);
    return c;
}

bool in(const Formula& U, const Point& p) {
    std::array<double, 2> pt{p.x, p.y};
    return U.contains(std::span<const double>(pt));
}

// Identity check on an n x n raster of [-2, 2]^2: mismatches among pixels
// farther than delta from the boundary of U and of every region.
struct RasterResult {
    int admitted = 0, mismatches = 0;
};
RasterResult raster_check(const Formula& U, const SignedCombination& s, int n) {
    const double diag = 4.0 / n * std::sqrt(2.0);
    const double delta = std::max(4 * diag, 2 * s.extension_error());
    auto samples = sample_boundary(U, Box{-2, 2, -2, 2}, 2048);
    for (const auto& t : s.terms) {
        auto b = sample_region_boundary(*t.region, delta / 4);
        samples.insert(samples.end(), b.begin(), b.end());
    }
    DistanceField tube(samples, 0.0);
    RasterResult r;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Point p{-2 + 4.0 * (i + 0.5) / n, -2 + 4.0 * (j + 0.5) / n};
            if (!tube.empty() && tube(p) <= delta) continue;
            ++r.admitted;
            r.mismatches += eval_signed_combination(s, p) != (in(U, p) ? 1 : 0);
        }
    return r;
}

}  // namespace

TEST_CASE("mcshane_extend examples") {
    auto f = mcshane_extend(branch("y - x", 0, 0, 1), 1.0);
    CHECK(f(2.0) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(f(0.5) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(f(-1.0) == doctest::Approx(-1.0).epsilon(1e-8));

    // A constant branch has slope bound 0, hence L = 0 and f~ = c everywhere.
    auto c = mcshane_extend(branch("y - 3/2", 0, 0, 1), 0.0);
    for (double p : {-5.0, 0.3, 0.999, 7.0}) CHECK(c(p) == 1.5);
    // With L = 1 it is c at the samples and c - dist(p, B) off B.
    auto c1 = mcshane_extend(branch("y - 3/2", 0, 0, 1), 1.0);
    for (const auto& [u, v] : c1.samples()) CHECK(c1(u) == 1.5);
    CHECK(c1(3.0) == doctest::Approx(1.5 - 2.0).epsilon(1e-8));
    CHECK(LipschitzFunctionExtension::constant(2.5)(-100.0) == 2.5);

    auto shifted = f.shifted(-1);
    CHECK(shifted(0.5) == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(shifted.key() != f.key());

    CHECK_THROWS_AS(mcshane_extend(branch("y - 2*x", 0, 0, 1), 1.0), ExtensionRejected);
    try {
        LipschitzFunctionExtension({{0.0, 0.0}, {0.5, 0.1}, {0.6, 0.5}, {1.0, 0.6}}, 1.0);
        FAIL("accepted a quotient of 4");
    } catch (const ExtensionRejected& e) {
        CHECK(e.a == std::pair{0.5, 0.1});
        CHECK(e.b == std::pair{0.6, 0.5});
    }
    CHECK_THROWS_AS(LipschitzFunctionExtension::sharing(f, 0.5, 0.0), ExtensionRejected);
    CHECK_THROWS_AS(mcshane_extend(branch("y - x", 0, 0, 1), 1.0, 0.0, 10), std::invalid_argument);
}

TEST_CASE("extension invariants") {
    // Both halves of the circle over (-3/5, 3/5), where |slope| <= 3/4.
    auto lower = branch("x^2 + y^2 - 1", 0, Rational(-3, 5), Rational(3, 5));
    auto upper = branch("x^2 + y^2 - 1", 1, Rational(-3, 5), Rational(3, 5));
    const double L = 1.25 * 0.75;
    auto f = mcshane_extend(lower, L), g = mcshane_extend(upper, L);
    // Exact at the defining samples.
    for (const auto& [u, v] : f.samples()) CHECK(f(u) == doctest::Approx(v).epsilon(1e-12));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int i = 0; i < 500; ++i) {
        double p = U(rng), q = U(rng);
        if (p == q) continue;
        CHECK(std::abs(f(p) - f(q)) <= L * (1 + 1e-6) * std::abs(p - q) + 1e-12);
        // Order preservation everywhere, not only on the base.
        CHECK(f(p) <= g(p));
    }
    // The sampled sup undershoots the branch by at most 2 L h between samples.
    BranchEvaluator exact(lower);
    for (int i = 0; i < 300; ++i) {
        double u = -0.6 + 1.2 * (i + 0.37) / 300;
        double err = exact(u) - f(u);
        CHECK(err >= -1e-12);
        CHECK(err <= 2 * L * f.max_gap() + 1e-12);
    }
}

TEST_CASE("open cell identity on the unit square") {
    auto s = decompose_open_cell(square_cell());
    REQUIRE(s.terms.size() == 3);
    int plus = 0, minus = 0;
    for (const auto& t : s.terms) (t.coefficient == 1 ? plus : minus) += 1;
    CHECK(plus == 2);
    CHECK(minus == 1);
    CHECK(eval_signed_combination(s, {0.5, 0.5}) == 1);
    CHECK(eval_signed_combination(s, {0.5, -0.5}) == 0);
    CHECK(eval_signed_combination(s, {0.5, 1.5}) == 0);
    CHECK(eval_signed_combination(s, {5, 5}) == 0);
    for (const auto& t : s.terms) {
        auto c = certify_ball(*t.region);
        CHECK(c.certified);
        CHECK(c.gap >= 1 - 1e-6);
    }
    // The strip U_{-1,1} has gap 2.
    for (const auto& t : s.terms)
        if (t.coefficient == -1) CHECK(certify_ball(*t.region).gap == doctest::Approx(3.0));
}

TEST_CASE("graph cell identity") {
    LRegularCell flat;
    flat.shape = LRegularCell::Shape::Graph;
    flat.base = open_base(0, 1);
    flat.graph = RootFunction{P("y"), 0, flat.base};
    auto s = decompose_graph_cell(flat);
    REQUIRE(s.terms.size() == 3);
    CHECK(eval_signed_combination(s, {0.5, 0.0}) == 1);
    CHECK(eval_signed_combination(s, {0.5, 0.5}) == 0);
    CHECK(eval_signed_combination(s, {0.5, -0.5}) == 0);
    CHECK(eval_signed_combination(s, {1.5, 0.0}) == 0);
    int negative = 0;
    for (const auto& t : s.terms) {
        negative += t.coefficient == -1;
        CHECK(certify_ball(*t.region).gap >= 1 - 1e-6);
    }
    CHECK(negative == 2);

    // A steep branch is a graph over the other coordinate.
    LRegularCell steep;
    steep.shape = LRegularCell::Shape::Graph;
    steep.base = open_base(0, 1);
    steep.graph = RootFunction{P("y - 3*x"), 0, steep.base};
    steep.transposed = true;
    steep.M = 1.0;
    auto t = decompose_graph_cell(steep);
    // On the graph the identity is exact at the defining samples (v, u).
    const auto& inv = t.terms[0].region->lower.samples();
    const auto [v0, u0] = inv[inv.size() / 2];
    CHECK(v0 == doctest::Approx(3 * u0));
    CHECK(eval_signed_combination(t, {u0, v0}) == 1);
    CHECK(eval_signed_combination(t, {0.5, 1.2}) == 0);
    CHECK(eval_signed_combination(t, {2.0, 6.0}) == 0);

    LRegularCell seg;
    seg.shape = LRegularCell::Shape::Segment;
    seg.a = {0.5, -1};
    seg.b = {0.5, 2};
    auto u = decompose_graph_cell(seg);
    CHECK(u.terms.size() == 3);
    CHECK(eval_signed_combination(u, {0.5, 0.3}) == 1);
    CHECK(eval_signed_combination(u, {0.6, 0.3}) == 0);
    CHECK(eval_signed_combination(u, {0.5, 2.5}) == 0);
}

TEST_CASE("point cell uses the two-dimensional graph identity") {
    LRegularCell pt;
    pt.shape = LRegularCell::Shape::Point;
    pt.a = pt.b = {0.25, -0.5};
    auto s = decompose_graph_cell(pt);
    CHECK(s.terms.size() == 9);
    CHECK(eval_signed_combination(s, {0.25, -0.5}) == 1);
    CHECK(eval_signed_combination(s, {0.25, 0.0}) == 0);
    CHECK(eval_signed_combination(s, {0.75, -0.5}) == 0);
    CHECK(eval_signed_combination(s, {0.5, -0.25}) == 0);
    CHECK(eval_signed_combination(s, {3, 3}) == 0);
    for (const auto& t : s.terms) CHECK(certify_ball(*t.region).gap >= 1 - 1e-6);
}

TEST_CASE("certify_ball") {
    LipschitzBallRegion interval;
    interval.dim = 1;
    interval.lo = 0;
    interval.hi = 1;
    auto c = certify_ball(interval);
    CHECK(c.certified);
    CHECK(c.depth == 1);

    LipschitzBallRegion crossing;
    crossing.lo = 0;
    crossing.hi = 1;
    crossing.lower = mcshane_extend(branch("y - x", 0, 0, 1), 1.0);
    crossing.upper = mcshane_extend(branch("y + x - 1", 0, 0, 1), 1.0);
    auto bad = certify_ball(crossing);
    CHECK_FALSE(bad.certified);
    bool named = false;
    for (const auto& v : bad.violations) named = named || v == "lower bound exceeds upper bound";
    CHECK(named);

    LipschitzBallRegion empty;
    empty.dim = 1;
    empty.lo = 1;
    empty.hi = 1;
    CHECK_FALSE(certify_ball(empty).certified);
}

TEST_CASE("decompose_indicator examples") {
    Formula square = parse_formula("0 < x and x < 1 and 0 < y and y < 1");
    auto s = decompose_indicator(square);
    CHECK(s.terms.size() <= 12);
    CHECK(eval_signed_combination(s, {0.5, 0.5}) == 1);
    CHECK(eval_signed_combination(s, {5, 5}) == 0);
    auto r = raster_check(square, s, 128);
    CHECK(r.admitted > 0);
    CHECK(r.mismatches == 0);

    auto empty = decompose_indicator(parse_formula("x^2 + y^2 < 0"));
    CHECK(empty.terms.empty());
    CHECK(eval_signed_combination(empty, {0, 0}) == 0);

    auto j = to_json(s);
    REQUIRE(j.size() == s.terms.size());
    CHECK(j[0].contains("coefficient"));
    CHECK(j[0]["region"].contains("gamma"));
    CHECK(j[0]["region"]["lower"].contains("sample_set"));
}

TEST_CASE("property: identity holds off the tube for every set") {
    for (const char* text : kSets) {
        CAPTURE(text);
        Formula U = parse_formula(text);
        auto s = decompose_indicator(U);
        auto r = raster_check(U, s, 128);
        CHECK(r.admitted > 128 * 128 / 10);
        CHECK(r.mismatches == 0);
    }
}

TEST_CASE("property: regions, coefficients and counts") {
    for (const char* text : kSets) {
        CAPTURE(text);
        auto cells = lregular_decompose(parse_formula(text), 1.0);
        std::size_t bound = 0, total = 0;
        for (const auto& c : cells) {
            auto s = c.shape == LRegularCell::Shape::Sector ? decompose_open_cell(c) : decompose_graph_cell(c);
            bound += c.shape == LRegularCell::Shape::Point ? 9 : 3;
            total += s.terms.size();
            int sum = 0;
            for (const auto& t : s.terms) {
                CHECK((t.coefficient == 1 || t.coefficient == -1));
                sum += t.coefficient;
                auto cert = certify_ball(*t.region, 128);
                CHECK(cert.certified);
                CHECK(cert.gap >= 1 - 1e-6);
            }
            // Open cell: 1 + 1 - 1; graph: 1 - 2; point: 1 - 4 + 4.
            if (c.shape == LRegularCell::Shape::Sector) CHECK(sum == 1);
            else if (c.shape == LRegularCell::Shape::Point) CHECK(sum == 1);
            else CHECK(sum == -1);
        }
        CHECK(total <= bound);
    }
}

TEST_CASE("signed combinations survive a JSON round trip") {
    for (const char* text : {"y^2 < x^3 and x < 1", "x^2 + y^2 < 1 and y > 0"}) {
        CAPTURE(text);
        auto s = decompose_indicator(parse_formula(text));
        auto j = to_json(s);
        auto back = signed_combination_from_json(nlohmann::json::parse(j.dump()));
        REQUIRE(back.terms.size() == s.terms.size());
        CHECK(to_json(back).dump() == j.dump());
        for (int i = 0; i < 40; ++i)
            for (int k = 0; k < 40; ++k) {
                Point p{-1.5 + 3.0 * (i + 0.5) / 40, -1.5 + 3.0 * (k + 0.5) / 40};
                CHECK(eval_signed_combination(back, p) == eval_signed_combination(s, p));
            }
    }
    CHECK_THROWS(signed_combination_from_json(nlohmann::json::object()));
}
