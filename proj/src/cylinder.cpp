#include "subalip/cylinder.hpp"

#include "subalip/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subalip {

std::string provenance_string(unsigned flags) {
    static const std::pair<unsigned, const char*> names[] = {
        {SingularImage, "singular-image"},
        {CriticalValue, "critical-value"},
        {BoundaryEndpoint, "boundary-endpoint"},
        {NonFinitenessRepair, "non-finiteness-repair"},
        {SlopeLocus, "slope-locus"},
    };
    std::string out;
    for (const auto& [bit, name] : names)
        if (flags & bit) out += (out.empty() ? "" : "|") + std::string(name);
    return out;
}

bool Cell1D::contains(const Rational& u) const {
    if (is_point()) return lo.compare(u) == 0;
    return lo.compare(u) < 0 && hi.compare(u) > 0;
}

bool Cell1D::contains(double u) const {
    if (is_point()) return u == lo.to_double();
    return lo.to_double() < u && u < hi.to_double();
}

Rational rational_between(IsolatedRoot a, IsolatedRoot b) {
    for (;;) {
        Rational left = a.is_rational() ? a.interval().lo : a.interval().hi;
        Rational right = b.is_rational() ? b.interval().lo : b.interval().lo;
        if (left < right) {
            Rational gap = right - left;
            if ((a.is_rational() || a.interval().width() * 4 <= gap) && (b.is_rational() || b.interval().width() * 4 <= gap)) {
                Rational third = gap / 3;
                return simplest_between(left + third, right - third);
            }
        }
        if (!a.is_rational()) a.refine(a.interval().width() / 2);
        if (!b.is_rational()) b.refine(b.interval().width() / 2);
    }
}

namespace {

UPoly fiber_poly(const Polynomial& p, const Rational& u) { return p.substitute(0, u).to_upoly(1); }

UPoly base_poly(const Polynomial& p) { return p.to_upoly(0); }

// Inserts r into the sorted list; returns its position, or -1 if an equal
// number is already present (then `equal_at` receives that position).
int insert_sorted(std::vector<IsolatedRoot>& list, IsolatedRoot r, int* equal_at = nullptr) {
    std::size_t pos = 0;
    while (pos < list.size()) {
        int c = compare(r, list[pos]);
        if (c == 0) {
            if (equal_at) *equal_at = static_cast<int>(pos);
            return -1;
        }
        if (c < 0) break;
        ++pos;
    }
    list.insert(list.begin() + static_cast<std::ptrdiff_t>(pos), std::move(r));
    return static_cast<int>(pos);
}

std::vector<Polynomial> atom_polynomials_2d(const Formula& U) {
    if (U.dimension() != 2) throw DimensionError("cylindrical decomposition needs a planar set");
    std::vector<Polynomial> out;
    for (const Polynomial& p : U.atom_polynomials()) {
        if (p.is_constant()) continue;
        Polynomial q = square_free_part(p);
        if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(std::move(q));
    }
    return out;
}

bool edge_meets_set(const Formula& U, const std::vector<Polynomial>& polys, bool horizontal, const Rational& fixed,
                    const Rational& lo, const Rational& hi) {
    std::vector<IsolatedRoot> cuts;
    for (const Polynomial& p : polys) {
        Polynomial r = p.substitute(horizontal ? 1 : 0, fixed);
        UPoly q = r.to_upoly(horizontal ? 0 : 1);
        if (q.degree() < 1) continue;
        for (auto& root : isolate_real_roots(q, Interval(lo, hi))) insert_sorted(cuts, root);
    }
    std::vector<IsolatedRoot> ends{IsolatedRoot::exact(lo)};
    for (auto& c : cuts)
        if (c.compare(lo) > 0 && c.compare(hi) < 0) ends.push_back(c);
    ends.push_back(IsolatedRoot::exact(hi));
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        Rational t = rational_between(ends[i], ends[i + 1]);
        std::vector<Rational> pt = horizontal ? std::vector<Rational>{t, fixed} : std::vector<Rational>{fixed, t};
        if (formula_membership(U, pt)) return true;
    }
    return false;
}

}  // namespace

IsolatedRoot RootFunction::at(const Rational& u) const {
    auto roots = isolate_real_roots(fiber_poly(poly, u));
    if (branch_index < 0 || branch_index >= static_cast<int>(roots.size()))
        throw BranchCountError("branch index out of range over base point " + to_string(u));
    return roots[static_cast<std::size_t>(branch_index)];
}

BranchEvaluator::BranchEvaluator(const RootFunction& f) : index_(f.branch_index) {
    for (const Polynomial& c : f.poly.coefficients(1)) {
        std::vector<double> d;
        UPoly cu = c.to_upoly(0);
        for (const Rational& q : cu.coeffs()) d.push_back(q.get_d());
        coeffs_.push_back(std::move(d));
    }
}

double BranchEvaluator::operator()(double u) const {
    std::vector<double> c(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        double acc = 0.0;
        for (auto it = coeffs_[k].rbegin(); it != coeffs_[k].rend(); ++it) acc = acc * u + *it;
        c[k] = acc;
    }
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    if (c.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double bound = 0.0;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) bound = std::max(bound, std::abs(c[k] / c.back()));
    bound += 1.0;
    auto roots = real_roots_numeric(c, -bound, bound);
    if (index_ >= static_cast<int>(roots.size())) return std::numeric_limits<double>::quiet_NaN();
    return roots[static_cast<std::size_t>(index_)];
}

std::vector<Polynomial> boundary_polynomials(const Formula& U, const Box& box) {
    auto polys = atom_polynomials_2d(U);
    if (edge_meets_set(U, polys, true, box.ylo, box.xlo, box.xhi) || edge_meets_set(U, polys, true, box.yhi, box.xlo, box.xhi) ||
        edge_meets_set(U, polys, false, box.xlo, box.ylo, box.yhi) || edge_meets_set(U, polys, false, box.xhi, box.ylo, box.yhi))
        throw UnboundedSetError("the set reaches the edge of the bounding box");
    return polys;
}

std::vector<Polynomial> fiber_family(const std::vector<Polynomial>& projected) {
    std::vector<Polynomial> out;
    for (const Polynomial& t : projected) {
        if (t.degree(1) < 1) continue;
        Polynomial q = primitive_part(square_free_part(t), 1).normalized();
        if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(std::move(q));
    }
    return out;
}

std::vector<Polynomial> projected_boundary(const Formula& U, const ProjectionSpec& proj) {
    std::vector<Polynomial> projected;
    for (const Polynomial& p : atom_polynomials_2d(U)) projected.push_back(proj.transform(p));
    return fiber_family(projected);
}

ProjectionSpec ensure_finite_projection(const Formula& U, const std::vector<ProjectionSpec>& candidates) {
    if (candidates.empty()) throw std::invalid_argument("ensure_finite_projection: no candidates");
    auto polys = atom_polynomials_2d(U);
    for (const ProjectionSpec& proj : candidates) {
        bool ok = true;
        for (const Polynomial& p : polys) {
            Polynomial t = proj.transform(p);
            if (!content(t, 1).is_constant()) {
                ok = false;
                break;
            }
        }
        if (ok) return proj;
    }
    throw NoFiniteProjectionError("every candidate projection has a vertical boundary segment");
}

DiscriminantSet discriminant_set(const Formula& U, const ProjectionSpec& proj, const std::vector<UPoly>& extra) {
    std::vector<Polynomial> projected;
    for (const Polynomial& p : atom_polynomials_2d(U)) projected.push_back(proj.transform(p));
    return discriminant_set_of(projected, extra);
}

DiscriminantSet discriminant_set_of(const std::vector<Polynomial>& projected, const std::vector<UPoly>& extra) {
    std::vector<std::pair<UPoly, unsigned>> sources;
    for (const Polynomial& p : projected) {
        if (p.is_constant()) continue;
        Polynomial t = square_free_part(p);
        Polynomial c = content(t, 1);
        if (!c.is_constant()) sources.emplace_back(base_poly(c), NonFinitenessRepair);
    }
    const std::vector<Polynomial> prims = fiber_family(projected);
    for (const Polynomial& q : prims) {
        Polynomial lc = q.leading_coefficient(1);
        if (!lc.is_constant()) sources.emplace_back(base_poly(lc), BoundaryEndpoint);
        if (q.degree(1) >= 2) sources.emplace_back(base_poly(discriminant(q, 1).value), CriticalValue);
    }
    for (std::size_t i = 0; i < prims.size(); ++i)
        for (std::size_t j = i + 1; j < prims.size(); ++j) {
            Polynomial a = prims[i], b = prims[j];
            Polynomial g = gcd(a, b);
            if (g.degree(1) > 0) {
                // Crossings with the shared factor already lie in each discriminant.
                a = *divide_exact(a, g);
                b = *divide_exact(b, g);
            }
            if (a.degree(1) < 1 || b.degree(1) < 1) continue;
            sources.emplace_back(base_poly(resultant(a, b, 1)), SingularImage);
        }
    for (const UPoly& e : extra) sources.emplace_back(e, SlopeLocus);

    DiscriminantSet d;
    for (const auto& [poly, flag] : sources) {
        if (poly.degree() < 1) continue;
        for (auto& r : isolate_real_roots(poly)) {
            int equal_at = -1;
            int pos = insert_sorted(d.points, r, &equal_at);
            if (pos >= 0) d.provenance.insert(d.provenance.begin() + pos, flag);
            else d.provenance[static_cast<std::size_t>(equal_at)] |= flag;
        }
    }
    for (std::size_t i = 0; i < d.points.size(); ++i) d.points[i].set_index(static_cast<int>(i));
    return d;
}

std::vector<Cell1D> base_cells(const DiscriminantSet& d, const Interval& box) {
    std::vector<IsolatedRoot> inside;
    for (const auto& p : d.points)
        if (p.compare(box.lo) > 0 && p.compare(box.hi) < 0) inside.push_back(p);
    std::vector<Cell1D> cells;
    IsolatedRoot left = IsolatedRoot::exact(box.lo);
    bool left_is_box = true;
    auto open_cell = [&](const IsolatedRoot& right, bool right_is_box) {
        Cell1D c;
        c.kind = Cell1D::Kind::Open;
        c.lo = left;
        c.hi = right;
        c.lo_is_box = left_is_box;
        c.hi_is_box = right_is_box;
        c.sample = rational_between(left, right);
        cells.push_back(std::move(c));
    };
    for (const auto& p : inside) {
        open_cell(p, false);
        Cell1D pt;
        pt.kind = Cell1D::Kind::Point;
        pt.lo = pt.hi = p;
        cells.push_back(std::move(pt));
        left = p;
        left_is_box = false;
    }
    if (box.lo < box.hi) open_cell(IsolatedRoot::exact(box.hi), true);
    return cells;
}

Fiber fiber_at(const std::vector<Polynomial>& projected, const Rational& u) {
    Fiber f;
    f.u = u;
    for (std::size_t i = 0; i < projected.size(); ++i) {
        UPoly q = fiber_poly(projected[i], u);
        if (q.is_zero()) throw BranchCountError("a boundary polynomial vanishes on the whole fiber over " + to_string(u));
        if (q.degree() < 1) continue;
        auto roots = isolate_real_roots(q);
        for (std::size_t k = 0; k < roots.size(); ++k) {
            int pos = insert_sorted(f.roots, roots[k]);
            if (pos < 0) continue;
            f.owner.insert(f.owner.begin() + pos, static_cast<int>(i));
            f.ordinal.insert(f.ordinal.begin() + pos, static_cast<int>(k));
        }
    }
    if (f.roots.empty()) {
        f.sector_samples.push_back(0);
        return f;
    }
    f.sector_samples.push_back(floor_rational(f.roots.front().interval().lo) - 1);
    for (std::size_t k = 0; k + 1 < f.roots.size(); ++k) f.sector_samples.push_back(rational_between(f.roots[k], f.roots[k + 1]));
    f.sector_samples.push_back(ceil_rational(f.roots.back().interval().hi) + 1);
    return f;
}

std::vector<CylindricalCell> lift_cells(const Formula& U, const ProjectionSpec& proj, const std::vector<Cell1D>& cells) {
    const auto boundary = projected_boundary(U, proj);
    std::vector<CylindricalCell> out;
    for (const Cell1D& cell : cells) {
        if (cell.is_point()) continue;
        Fiber f = fiber_at(boundary, cell.sample);
        // Cheap consistency probe: the root count must agree at two more points.
        for (const Rational& probe : {rational_between(cell.lo, IsolatedRoot::exact(cell.sample)),
                                      rational_between(IsolatedRoot::exact(cell.sample), cell.hi)}) {
            if (fiber_at(boundary, probe).roots.size() != f.roots.size())
                throw BranchCountError("fiber root count changes inside the base cell around " + to_string(cell.sample));
        }
        const std::size_t k = f.roots.size();
        for (std::size_t s = 0; s <= k; ++s) {
            auto xy = proj.backward(f.u, f.sector_samples[s]);
            if (!formula_membership(U, xy)) continue;
            if (s == 0 || s == k) throw UnboundedSetError("the set is unbounded along the fiber over " + to_string(f.u));
            CylindricalCell c;
            c.base = cell;
            c.lower = RootFunction{boundary[static_cast<std::size_t>(f.owner[s - 1])], f.ordinal[s - 1], cell};
            c.upper = RootFunction{boundary[static_cast<std::size_t>(f.owner[s])], f.ordinal[s], cell};
            c.sample_u = f.u;
            c.sample_v = f.sector_samples[s];
            out.push_back(std::move(c));
        }
    }
    return out;
}

bool cyl_membership(const CylindricalCell& c, const ProjectionSpec& proj, const Rational& x, const Rational& y) {
    auto [u, v] = proj.forward(x, y);
    if (!c.base.contains(u)) return false;
    return c.lower.at(u).compare(v) < 0 && c.upper.at(u).compare(v) > 0;
}

CylindricalDecomposition decompose_with(const Formula& U, const Box& box, const ProjectionSpec& proj) {
    CylindricalDecomposition d;
    d.proj = proj;
    d.box = box;
    d.base_range = proj.base_range(box);
    d.boundary = projected_boundary(U, proj);
    d.disc = discriminant_set(U, proj);
    d.cells = base_cells(d.disc, d.base_range);
    d.cylinders = lift_cells(U, proj, d.cells);
    return d;
}

CylindricalDecomposition decompose(const Formula& U, const Box& box, const std::vector<ProjectionSpec>& candidates) {
    boundary_polynomials(U, box);
    return decompose_with(U, box, ensure_finite_projection(U, candidates));
}

nlohmann::json to_json(const IsolatedRoot& r) {
    if (r.is_rational()) return {{"value", to_string(r.interval().lo)}};
    return {{"poly", r.poly().to_string("u")},
            {"interval", {to_string(r.interval().lo), to_string(r.interval().hi)}},
            {"approx", r.to_double()}};
}

nlohmann::json to_json(const CylindricalDecomposition& d) {
    static const std::vector<std::string> uv{"u", "v"};
    nlohmann::json j;
    j["projection"] = d.proj.to_string();
    j["box"] = {to_string(d.box.xlo), to_string(d.box.xhi), to_string(d.box.ylo), to_string(d.box.yhi)};
    j["base_range"] = {to_string(d.base_range.lo), to_string(d.base_range.hi)};
    for (const auto& p : d.boundary) j["boundary"].push_back(p.to_string(uv));
    j["discriminant_points"] = nlohmann::json::array();
    for (std::size_t i = 0; i < d.disc.points.size(); ++i) {
        auto e = to_json(d.disc.points[i]);
        e["provenance"] = provenance_string(d.disc.provenance[i]);
        j["discriminant_points"].push_back(e);
    }
    auto cell_id = [&](const Cell1D& c) {
        for (std::size_t i = 0; i < d.cells.size(); ++i)
            if (!d.cells[i].is_point() && d.cells[i].sample == c.sample) return static_cast<int>(i);
        return -1;
    };
    j["base_cells"] = nlohmann::json::array();
    for (const auto& c : d.cells) {
        nlohmann::json e{{"kind", c.is_point() ? "point" : "open"}, {"lo", to_json(c.lo)}, {"hi", to_json(c.hi)}};
        if (!c.is_point()) e["sample"] = to_string(c.sample);
        j["base_cells"].push_back(e);
    }
    std::vector<std::tuple<std::string, int, int>> branches;
    auto branch_id = [&](const RootFunction& f) {
        std::tuple<std::string, int, int> key{f.poly.to_string(uv), f.branch_index, cell_id(f.base)};
        auto it = std::find(branches.begin(), branches.end(), key);
        if (it != branches.end()) return static_cast<int>(it - branches.begin());
        branches.push_back(key);
        return static_cast<int>(branches.size()) - 1;
    };
    j["cylinders"] = nlohmann::json::array();
    for (const auto& c : d.cylinders)
        j["cylinders"].push_back({{"base", cell_id(c.base)}, {"lower", branch_id(c.lower)}, {"upper", branch_id(c.upper)}});
    j["branches"] = nlohmann::json::array();
    for (const auto& [poly, index, base] : branches) j["branches"].push_back({{"poly", poly}, {"index", index}, {"base", base}});
    return j;
}

}  // namespace subalip
