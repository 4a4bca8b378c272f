#include "subalip/lregular.hpp"

#include "subalip/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

namespace subalip {

int LRegularCell::dim() const {
    switch (shape) {
    case Shape::Point: return 0;
    case Shape::Segment:
    case Shape::Graph: return 1;
    case Shape::Sector: return 2;
    }
    return 2;
}

CylindricalCell LRegularCell::cylinder() const {
    if (shape != Shape::Sector) throw std::logic_error("cylinder(): not a sector");
    return CylindricalCell{base, lower, upper, sample_u, sample_v};
}

SectorEvaluator::SectorEvaluator(const LRegularCell& c)
    : lower_(c.lower), upper_(c.upper), lo_(c.base.lo.to_double()), hi_(c.base.hi.to_double()),
      m_(c.frame.matrix_double()), inv_(c.frame.inverse_double()) {}

std::array<double, 2> SectorEvaluator::to_frame(const Point& p) const {
    return {m_[0] * p.x + m_[1] * p.y, m_[2] * p.x + m_[3] * p.y};
}

Point SectorEvaluator::from_frame(double u, double v) const {
    return {inv_[0] * u + inv_[1] * v, inv_[2] * u + inv_[3] * v};
}

bool SectorEvaluator::contains(const Point& p) const {
    auto [u, v] = to_frame(p);
    if (!(u > lo_ && u < hi_)) return false;
    return lower_(u) < v && v < upper_(u);
}

namespace {

constexpr int kMaxLevel = 6;

Rational fine_tolerance() {
    mpz_class den = 1;
    den <<= 100;
    return Rational(1) / Rational(den);
}

Rational approx(const IsolatedRoot& r) { return r.is_rational() ? r.interval().lo : r.approximation(fine_tolerance()); }

std::vector<ProjectionSpec> refinement_frames() {
    return {ProjectionSpec::identity(), ProjectionSpec::swap(),  ProjectionSpec::sheared(1),
            ProjectionSpec::sheared(-1), ProjectionSpec{1, true, 0}, ProjectionSpec{-1, true, 0}};
}

// Base points where some branch of a family member has slope exactly +-C1.
std::vector<UPoly> slope_loci(const std::vector<Polynomial>& prims, const Rational& C1) {
    std::vector<UPoly> out;
    for (const Polynomial& p : prims) {
        Polynomial pu = p.derivative(0), pv = p.derivative(1);
        Polynomial s = pu * pu - (C1 * C1) * (pv * pv);
        if (s.is_zero()) continue;
        // Drop components of p along which the slope is identically C1.
        for (Polynomial g = gcd(p, s); !g.is_constant(); g = gcd(p, s)) s = *divide_exact(s, g);
        if (s.degree(1) == 0) {
            if (!s.is_constant()) out.push_back(s.to_upoly(0));
            continue;
        }
        Polynomial r = resultant(p, s, 1);
        if (!r.is_zero() && !r.is_constant()) out.push_back(r.to_upoly(0));
    }
    return out;
}

// The region being cut into cells: U itself, or a sector that failed the
// slope bound in an earlier frame.
struct Region {
    const Formula* U = nullptr;
    const LRegularCell* parent = nullptr;
    std::optional<SectorEvaluator> parent_eval;

    bool exact(const Rational& x, const Rational& y) const {
        if (U) {
            std::array<Rational, 2> pt{x, y};
            return formula_membership(*U, pt);
        }
        return cyl_membership(parent->cylinder(), parent->frame, x, y);
    }
};

int sign_with_tolerance(const Polynomial& p, double x, double y) {
    std::array<double, 2> pt{x, y};
    double val = p.eval(std::span<const double>(pt));
    double scale = 0.0, r = std::max({1.0, std::abs(x), std::abs(y)});
    for (const auto& [e, c] : p.terms()) scale += std::abs(c.get_d()) * std::pow(r, e[0] + e[1]);
    if (std::abs(val) <= 1e-9 * scale) return 0;
    return val > 0 ? 1 : -1;
}

// Real fiber roots over an algebraic base point, numerically, merged.
std::vector<double> numeric_fiber(const std::vector<Polynomial>& prims, const Rational& u) {
    std::vector<double> roots;
    for (const Polynomial& p : prims) {
        UPoly q = p.substitute(0, u).to_upoly(1);
        std::vector<double> c;
        for (const Rational& r : q.coeffs()) c.push_back(r.get_d());
        while (!c.empty() && c.back() == 0.0) c.pop_back();
        if (c.size() < 2) continue;
        double bound = 0.0;
        for (std::size_t k = 0; k + 1 < c.size(); ++k) bound = std::max(bound, std::abs(c[k] / c.back()));
        for (double r : real_roots_numeric(c, -bound - 1, bound + 1)) roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots)
        if (merged.empty() || r - merged.back() > 1e-9 * (1 + std::abs(r))) merged.push_back(r);
    return merged;
}

struct FrameResult {
    std::vector<LRegularCell> accepted;
    std::vector<LRegularCell> failing;
};

FrameResult decompose_in_frame(const std::vector<Polynomial>& family, const ProjectionSpec& F, const Box& box,
                               const Rational& C1, const Region& R, int level, bool sectors_only) {
    const double c1 = C1.get_d();
    std::vector<Polynomial> projected;
    for (const Polynomial& p : family) projected.push_back(F.transform(p));
    const auto prims = fiber_family(projected);
    std::vector<UPoly> contents;
    for (const Polynomial& p : projected) {
        Polynomial c = content(square_free_part(p), 1);
        if (!c.is_constant()) contents.push_back(c.to_upoly(0));
    }
    const auto disc = discriminant_set_of(projected, slope_loci(prims, C1));
    const auto cells = base_cells(disc, F.base_range(box));
    const auto inv = F.inverse_double();
    auto to_xy = [&](double u, double v) { return Point{inv[0] * u + inv[1] * v, inv[2] * u + inv[3] * v}; };

    FrameResult out;
    for (const Cell1D& cell : cells) {
        if (!cell.is_point()) {
            Fiber f = fiber_at(prims, cell.sample);
            const std::size_t k = f.roots.size();
            for (std::size_t s = 0; s <= k; ++s) {
                auto xy = F.backward(f.u, f.sector_samples[s]);
                if (!R.exact(xy[0], xy[1])) continue;
                if (s == 0 || s == k) throw UnboundedSetError("the set is unbounded along the fiber over " + to_string(f.u));
                LRegularCell c;
                c.shape = LRegularCell::Shape::Sector;
                c.frame = F;
                c.base = cell;
                c.lower = RootFunction{prims[static_cast<std::size_t>(f.owner[s - 1])], f.ordinal[s - 1], cell};
                c.upper = RootFunction{prims[static_cast<std::size_t>(f.owner[s])], f.ordinal[s], cell};
                c.sample_u = f.u;
                c.sample_v = f.sector_samples[s];
                c.level = level;
                // Slope loci cut the base, so one sample decides the whole cell.
                double m = std::max(branch_slope(c.lower, f.u), branch_slope(c.upper, f.u));
                if (m <= c1) {
                    c.M = c1;
                    out.accepted.push_back(std::move(c));
                } else {
                    c.M = m;
                    out.failing.push_back(std::move(c));
                }
            }
            if (sectors_only) continue;
            for (std::size_t r = 0; r < k; ++r) {
                bool inside = R.U->evaluate([&](const Polynomial& p) {
                    IsolatedRoot v = f.roots[r];
                    return sign_at(F.transform(p).substitute(0, f.u).to_upoly(1), v);
                });
                if (!inside) continue;
                LRegularCell c;
                c.shape = LRegularCell::Shape::Graph;
                c.frame = F;
                c.base = cell;
                c.graph = RootFunction{prims[static_cast<std::size_t>(f.owner[r])], f.ordinal[r], cell};
                c.transposed = branch_slope(c.graph, f.u) > c1;
                c.M = c1;
                c.level = level;
                out.accepted.push_back(std::move(c));
            }
            continue;
        }

        // Point base cell: a vertical line of the family means the whole
        // fiber lies on the boundary of any sub-region.
        bool on_wall = false;
        for (const UPoly& q : contents) {
            IsolatedRoot a = cell.lo;
            on_wall = on_wall || sign_at(q, a) == 0;
        }
        if (on_wall && !R.U) continue;
        const Rational ua = approx(cell.lo);
        const double ud = ua.get_d();
        const auto roots = numeric_fiber(prims, ua);
        const std::size_t k = roots.size();
        for (std::size_t s = 0; s <= k; ++s) {
            double lo = s == 0 ? (k ? roots[0] - 1 : -1.0) : roots[s - 1];
            double hi = s == k ? (k ? roots[k - 1] + 1 : 1.0) : roots[s];
            Rational sv = from_double((lo + hi) / 2);
            bool inside;
            if (R.U) {
                inside = R.U->evaluate([&](const Polynomial& p) {
                    IsolatedRoot a = cell.lo;
                    return sign_at(F.transform(p).substitute(1, sv).to_upoly(0), a);
                });
            } else {
                inside = R.parent_eval->contains(to_xy(ud, sv.get_d()));
            }
            if (!inside) continue;
            if (s == 0 || s == k) throw UnboundedSetError("the set is unbounded along the fiber over " + std::to_string(cell.lo.to_double()));
            LRegularCell c;
            c.shape = LRegularCell::Shape::Segment;
            c.frame = F;
            c.base = cell;
            c.a = to_xy(ud, lo);
            c.b = to_xy(ud, hi);
            c.level = level;
            out.accepted.push_back(std::move(c));
        }
        if (sectors_only || !R.U) continue;
        for (double v : roots) {
            Point p = to_xy(ud, v);
            if (!R.U->evaluate([&](const Polynomial& q) { return sign_with_tolerance(q, p.x, p.y); })) continue;
            LRegularCell c;
            c.shape = LRegularCell::Shape::Point;
            c.frame = F;
            c.base = cell;
            c.a = c.b = p;
            c.level = level;
            out.accepted.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<Polynomial> family_of(const Formula& U) {
    if (U.dimension() != 2) throw DimensionError("L-regular decomposition needs a planar set");
    std::vector<Polynomial> out;
    for (const Polynomial& p : U.atom_polynomials())
        if (!p.is_constant()) out.push_back(square_free_part(p));
    return out;
}

// The vertical lines bounding a sector's base, written in (x, y).
std::vector<Polynomial> walls(const LRegularCell& c) {
    auto m = c.frame.matrix();
    Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    Polynomial u = m[0] * x + m[1] * y;
    std::vector<Polynomial> out;
    for (const IsolatedRoot* r : {&c.base.lo, &c.base.hi}) {
        UPoly q = r->is_rational() ? UPoly({-r->interval().lo, Rational(1)}) : square_free_part(r->poly());
        out.push_back(Polynomial::from_upoly(2, 0, q).compose({u, Polynomial::variable(2, 1)}));
    }
    return out;
}

// Whether the section upper(u) of `below` lies in U (sign-invariant over the base).
bool wall_in_U(const Formula& U, const LRegularCell& below) {
    const Rational& u = below.base.sample;
    IsolatedRoot r = below.upper.at(u);
    std::vector<std::pair<Polynomial, int>> signs;
    for (const Polynomial& p : U.atom_polynomials()) {
        UPoly q = below.frame.transform(p).substitute(0, u).to_upoly(1);
        signs.emplace_back(p, sign_at(q, r));
    }
    return U.evaluate([&](const Polynomial& p) {
        for (const auto& [q, s] : signs)
            if (q == p) return s;
        throw std::logic_error("wall_in_U: unknown atom");
    });
}

bool same_branch(const RootFunction& a, const RootFunction& b) {
    return a.branch_index == b.branch_index && a.poly == b.poly;
}

// Stacked cells over one base whose common wall lies inside U merge into one
// open cell: the cover pieces are cut by the boundary only.
std::vector<LRegularCell> merge_interior_walls_impl(const Formula& U, std::vector<LRegularCell> cells) {
    for (bool merged = true; merged;) {
        merged = false;
        for (std::size_t i = 0; i < cells.size() && !merged; ++i)
            for (std::size_t j = 0; j < cells.size() && !merged; ++j) {
                LRegularCell& lo = cells[i];
                const LRegularCell& hi = cells[j];
                if (i == j || lo.shape != LRegularCell::Shape::Sector || hi.shape != LRegularCell::Shape::Sector) continue;
                if (!(lo.frame == hi.frame) || lo.base.sample != hi.base.sample) continue;
                if (!same_branch(lo.upper, hi.lower) || !wall_in_U(U, lo)) continue;
                lo.upper = hi.upper;
                lo.M = std::max(lo.M, hi.M);
                cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(j));
                merged = true;
            }
    }
    return cells;
}

}  // namespace

double branch_slope(const RootFunction& f, const Rational& u, bool transposed) {
    Rational v = approx(f.at(u));
    std::array<Rational, 2> pt{u, v};
    Rational pu = f.poly.derivative(0).eval(pt), pv = f.poly.derivative(1).eval(pt);
    if (transposed) std::swap(pu, pv);
    if (pv == 0) throw std::domain_error("branch_slope: vertical tangent at a sample point");
    return abs(Rational(pu / pv)).get_d();
}

std::vector<LRegularCell> lregular_decompose(const Formula& U, double C1, const Box& box) {
    if (!(C1 >= 1)) throw std::invalid_argument("lregular_decompose: C1 must be at least 1");
    boundary_polynomials(U, box);
    const Rational c1 = from_double(C1);
    const auto family = family_of(U);
    const ProjectionSpec F0 = ensure_finite_projection(U, default_projection_candidates());
    Region top;
    top.U = &U;
    FrameResult first = decompose_in_frame(family, F0, box, c1, top, 0, false);

    struct Pending {
        LRegularCell cell;
        std::vector<Polynomial> family;
    };
    std::vector<LRegularCell> out = std::move(first.accepted);
    std::deque<Pending> pending;
    for (auto& c : first.failing) pending.push_back({std::move(c), family});
    while (!pending.empty()) {
        Pending p = std::move(pending.front());
        pending.pop_front();
        if (p.cell.level >= kMaxLevel)
            throw FrameExhaustionError("no frame satisfies the slope bound for a cell over " + std::to_string(p.cell.base.lo.to_double()));
        auto fam = p.family;
        for (Polynomial& w : walls(p.cell))
            if (std::find(fam.begin(), fam.end(), w) == fam.end()) fam.push_back(std::move(w));
        Region sub;
        sub.parent = &p.cell;
        sub.parent_eval.emplace(p.cell);
        std::optional<FrameResult> best;
        for (const ProjectionSpec& F : refinement_frames()) {
            if (F == p.cell.frame) continue;
            FrameResult r = decompose_in_frame(fam, F, box, c1, sub, p.cell.level + 1, true);
            if (!best || r.failing.size() < best->failing.size()) best = std::move(r);
            if (best->failing.empty()) break;
        }
        for (auto& c : best->accepted) out.push_back(std::move(c));
        for (auto& c : best->failing) pending.push_back({std::move(c), fam});
    }
    return out;
}

std::vector<LRegularCell> slope_regular_cells(const Formula& U, double C1, const ProjectionSpec& frame, const Box& box) {
    if (!(C1 > 0)) throw std::invalid_argument("slope_regular_cells: C1 must be positive");
    Region top;
    top.U = &U;
    FrameResult r = decompose_in_frame(family_of(U), frame, box, from_double(C1), top, 0, true);
    std::vector<LRegularCell> all;
    for (auto* part : {&r.accepted, &r.failing})
        for (auto& c : *part)
            if (c.shape == LRegularCell::Shape::Sector) all.push_back(std::move(c));
    std::vector<LRegularCell> out;
    for (auto& c : merge_interior_walls(U, std::move(all))) {
        // Slope loci cut the base, so one sample decides the whole cell.
        double m = std::max(branch_slope(c.lower, c.sample_u), branch_slope(c.upper, c.sample_u));
        if (m > C1) continue;
        c.M = C1;
        out.push_back(std::move(c));
    }
    // Neighbours split only at a slope locus of a branch that is no longer a
    // wall join up again: their branches continue analytically across it.
    std::vector<Polynomial> projected;
    for (const Polynomial& p : family_of(U)) projected.push_back(frame.transform(p));
    DiscriminantSet disc = discriminant_set_of(projected);
    auto is_disc = [&](IsolatedRoot a) {
        for (IsolatedRoot d : disc.points)
            if (compare(a, d) == 0) return true;
        return false;
    };
    for (bool merged = true; merged;) {
        merged = false;
        for (std::size_t i = 0; i < out.size() && !merged; ++i)
            for (std::size_t j = 0; j < out.size() && !merged; ++j) {
                LRegularCell& a = out[i];
                const LRegularCell& b = out[j];
                if (i == j || b.base.lo_is_box || a.base.hi_is_box) continue;
                IsolatedRoot ah = a.base.hi, bl = b.base.lo;
                if (compare(ah, bl) != 0 || is_disc(ah)) continue;
                if (!same_branch(a.lower, b.lower) || !same_branch(a.upper, b.upper)) continue;
                a.base.hi = b.base.hi;
                a.lower.base = a.upper.base = a.base;
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(j));
                merged = true;
            }
    }
    return out;
}

std::vector<LRegularCell> merge_interior_walls(const Formula& U, std::vector<LRegularCell> cells) {
    return merge_interior_walls_impl(U, std::move(cells));
}

SlopeCheck check_lregular(const LRegularCell& cell, int samples) {
    if (samples < 100) throw std::invalid_argument("check_lregular: need at least 100 samples");
    SlopeCheck r;
    if (cell.shape == LRegularCell::Shape::Point || cell.shape == LRegularCell::Shape::Segment) return r;
    Rational tol = fine_tolerance();
    Rational lo = approx(cell.base.lo), hi = approx(cell.base.hi);
    for (int k = 0; k < samples; ++k) {
        Rational u = lo + (hi - lo) * Rational(2 * k + 1, 2 * samples);
        if (cell.shape == LRegularCell::Shape::Graph) {
            r.max_slope = std::max(r.max_slope, branch_slope(cell.graph, u, cell.transposed));
        } else {
            r.max_slope = std::max({r.max_slope, branch_slope(cell.lower, u), branch_slope(cell.upper, u)});
        }
    }
    r.pass = r.max_slope <= cell.M * (1 + 1e-6) + 1e-12;
    return r;
}

QuasiConvexityReport quasiconvexity_estimate(const LRegularCell& cell, int pairs, std::uint64_t seed) {
    if (cell.shape != LRegularCell::Shape::Sector) throw std::invalid_argument("quasiconvexity_estimate: needs an open cell");
    if (pairs < 100) throw std::invalid_argument("quasiconvexity_estimate: need at least 100 pairs");
    SectorEvaluator ev(cell);
    std::mt19937_64 rng(seed);
    const double w = ev.hi() - ev.lo();
    std::uniform_real_distribution<double> U(ev.lo() + 1e-6 * w, ev.hi() - 1e-6 * w), T(0.0, 1.0);
    auto level = [&](double u, double t) { return ev.lower(u) + t * (ev.upper(u) - ev.lower(u)); };
    // Length of the level curve t between u1 and u2, in original coordinates.
    auto along = [&](double t, double u1, double u2) {
        const int n = 64;
        double len = 0.0;
        Point prev = ev.from_frame(u1, level(u1, t));
        for (int i = 1; i <= n; ++i) {
            double u = u1 + (u2 - u1) * i / n;
            Point cur = ev.from_frame(u, level(u, t));
            len += distance(prev, cur);
            prev = cur;
        }
        return len;
    };
    QuasiConvexityReport r;
    for (int i = 0; i < pairs; ++i) {
        double u1 = U(rng), u2 = U(rng), t1 = T(rng), t2 = T(rng);
        Point p = ev.from_frame(u1, level(u1, t1)), q = ev.from_frame(u2, level(u2, t2));
        double d = distance(p, q);
        if (d < 1e-12) continue;
        double a = along(t1, u1, u2) + distance(ev.from_frame(u2, level(u2, t1)), q);
        double b = distance(p, ev.from_frame(u1, level(u1, t2))) + along(t2, u1, u2);
        double ratio = std::min(a, b) / d;
        if (!std::isfinite(ratio)) throw std::runtime_error("quasiconvexity_estimate: path leaves the cell");
        r.max_ratio = std::max(r.max_ratio, ratio);
        ++r.pairs;
    }
    return r;
}

namespace {

const char* shape_name(LRegularCell::Shape s) {
    switch (s) {
    case LRegularCell::Shape::Point: return "point";
    case LRegularCell::Shape::Segment: return "segment";
    case LRegularCell::Shape::Graph: return "graph";
    case LRegularCell::Shape::Sector: return "sector";
    }
    return "?";
}

nlohmann::json branch_json(const RootFunction& f) {
    static const std::string names[] = {"u", "v"};
    return {{"poly", f.poly.to_string(names)}, {"index", f.branch_index}};
}

}  // namespace

nlohmann::json to_json(const LRegularCell& c) {
    nlohmann::json j{{"shape", shape_name(c.shape)}, {"dim", c.dim()}, {"frame", c.frame.to_string()},
                     {"M", c.M},                     {"level", c.level}};
    switch (c.shape) {
    case LRegularCell::Shape::Sector:
        j["base"] = {to_json(c.base.lo), to_json(c.base.hi)};
        j["lower"] = branch_json(c.lower);
        j["upper"] = branch_json(c.upper);
        break;
    case LRegularCell::Shape::Graph:
        j["base"] = {to_json(c.base.lo), to_json(c.base.hi)};
        j["graph"] = branch_json(c.graph);
        j["transposed"] = c.transposed;
        break;
    case LRegularCell::Shape::Segment:
        j["ends"] = {{c.a.x, c.a.y}, {c.b.x, c.b.y}};
        break;
    case LRegularCell::Shape::Point:
        j["point"] = {c.a.x, c.a.y};
        break;
    }
    return j;
}

nlohmann::json to_json(const std::vector<LRegularCell>& cells) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : cells) j.push_back(to_json(c));
    return j;
}

}  // namespace subalip
