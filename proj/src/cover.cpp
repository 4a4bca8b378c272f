#include "subalip/cover.hpp"

#include "subalip/regproj.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace subalip {

namespace {

LRegularCell piece_of(const CylindricalCell& c, const ProjectionSpec& proj) {
    LRegularCell cell;
    cell.shape = LRegularCell::Shape::Sector;
    cell.frame = proj;
    cell.base = c.base;
    cell.lower = c.lower;
    cell.upper = c.upper;
    cell.sample_u = c.sample_u;
    cell.sample_v = c.sample_v;
    return cell;
}

bool is_finite(const Formula& U, const ProjectionSpec& proj) {
    try {
        ensure_finite_projection(U, {proj});
        return true;
    } catch (const NoFiniteProjectionError&) {
        return false;
    }
}

struct TestPoint {
    Point p;
    double dU;
};

// Grid centers of U farther than delta from the sampled boundary.
std::vector<TestPoint> test_points(const Formula& U, const DistanceField& field, const Box& box, int n, double delta) {
    std::vector<TestPoint> out;
    for (int i = 0; i < n; ++i) {
        Rational x = box.xlo + box.width() * Rational(2 * i + 1, 2 * n);
        for (int j = 0; j < n; ++j) {
            Rational y = box.ylo + box.height() * Rational(2 * j + 1, 2 * n);
            std::array<Rational, 2> pt{x, y};
            if (!U.contains(std::span<const Rational>(pt))) continue;
            Point p{x.get_d(), y.get_d()};
            double d = field(p);
            if (d > delta) out.push_back({p, d});
        }
    }
    return out;
}

ProjectionSpec random_shear(std::mt19937_64& rng, const std::vector<ProjectionSpec>& used) {
    std::uniform_int_distribution<int> num(-23, 23);
    std::bernoulli_distribution flip(0.5);
    for (;;) {
        ProjectionSpec p{make_rational(num(rng), 11), flip(rng), 0};
        if (std::find(used.begin(), used.end(), p) == used.end()) return p;
    }
}

using PieceSource = std::vector<LRegularCell> (*)(const Formula&, const ProjectionSpec&, const Box&, double);

std::vector<LRegularCell> cylinder_pieces(const Formula& U, const ProjectionSpec& proj, const Box& box, double) {
    std::vector<LRegularCell> out;
    for (const auto& c : decompose_with(U, box, proj).cylinders) out.push_back(piece_of(c, proj));
    return merge_interior_walls(U, std::move(out));
}

std::vector<LRegularCell> slope_pieces(const Formula& U, const ProjectionSpec& proj, const Box& box, double C1) {
    std::vector<LRegularCell> out;
    for (auto& c : slope_regular_cells(U, C1, proj, box))
        if (c.shape == LRegularCell::Shape::Sector) out.push_back(std::move(c));
    return out;
}

RegularCover build_cover(const Formula& U, const CoverOptions& opt, std::vector<ProjectionSpec> frames,
                         std::size_t initial, PieceSource source, double C1) {
    if (opt.grid < 8) throw std::invalid_argument("cover: grid too coarse");
    RegularCover cover;
    cover.box = opt.box;
    cover.grid = opt.grid;
    cover.seed = opt.seed;
    boundary_polynomials(U, opt.box);  // rejects sets reaching the box edge
    DistanceField field = boundary_distance_field(U, opt.box, std::max(4096, opt.boundary_lines));
    cover.delta = 2 * field.tolerance();
    auto points = test_points(U, field, opt.box, opt.grid, cover.delta);
    cover.tested = static_cast<int>(points.size());

    auto add_frame = [&](const ProjectionSpec& proj) {
        int index = static_cast<int>(cover.projections.size());
        cover.projections.push_back(proj);
        for (auto& cell : source(U, proj, opt.box, C1)) cover.pieces.push_back({std::move(cell), index});
    };
    auto first_gap = [&](const CoverEvaluator& ev) -> const TestPoint* {
        for (const auto& t : points)
            if (!ev.covered(t.p)) return &t;
        return nullptr;
    };

    std::size_t next = 0;
    for (; next < frames.size() && cover.projections.size() < initial; ++next)
        if (is_finite(U, frames[next])) add_frame(frames[next]);
    // Remaining fixed frames, then random shears, one at a time while a gap remains.
    std::mt19937_64 rng(opt.seed);
    for (;;) {
        CoverEvaluator ev(cover, opt.piece_spacing);
        const TestPoint* gap = first_gap(ev);
        if (!gap) {
            for (const auto& t : points) {
                double ratio = t.dU / ev.max_piece_distance(t.p);
                if (ratio > cover.C) {
                    cover.C = ratio;
                    cover.tight = t.p;
                }
            }
            return cover;
        }
        ProjectionSpec proj;
        if (next < frames.size()) {
            proj = frames[next++];
            if (!is_finite(U, proj)) continue;
        } else if (cover.random_shears < opt.retries) {
            proj = random_shear(rng, cover.projections);
            ++cover.random_shears;
            if (!is_finite(U, proj)) continue;
        } else {
            throw CoverageGapError("cover: test point (" + std::to_string(gap->p.x) + ", " + std::to_string(gap->p.y) +
                                       ") lies in no piece",
                                   gap->p);
        }
        add_frame(proj);
    }
}

}  // namespace

double distance_to_boundary(const Formula& U, const Point& p, const Box& box) {
    return boundary_distance_field(U, box, 4096)(p);
}

double distance_to_boundary(const LRegularCell& cell, const Point& p, double spacing) {
    if (cell.shape != LRegularCell::Shape::Sector) throw std::invalid_argument("distance_to_boundary: needs an open cell");
    auto samples = sample_cylinder_boundary(cell.cylinder(), cell.frame, spacing);
    if (samples.empty()) throw std::domain_error("distance_to_boundary: empty sampled boundary");
    return PointCloud(std::move(samples)).nearest(p);
}

CoverEvaluator::CoverEvaluator(const RegularCover& cover, double spacing) {
    for (const auto& piece : cover.pieces) {
        evals_.emplace_back(piece.cell);
        auto samples = sample_cylinder_boundary(piece.cell.cylinder(), piece.cell.frame, spacing);
        // Steep frames stretch the spacing by the matrix norm.
        auto inv = piece.cell.frame.inverse_double();
        double stretch = std::max(std::hypot(inv[0], inv[2]), std::hypot(inv[1], inv[3]));
        fields_.emplace_back(std::move(samples), 2 * spacing * stretch);
        tolerance_ = std::max(tolerance_, fields_.back().tolerance());
    }
}

double CoverEvaluator::max_piece_distance(const Point& p, int* piece) const {
    double best = 0.0;
    for (std::size_t i = 0; i < evals_.size(); ++i) {
        if (!evals_[i].contains(p)) continue;
        double d = fields_[i](p);
        if (d > best) {
            best = d;
            if (piece) *piece = static_cast<int>(i);
        }
    }
    return best;
}

bool CoverEvaluator::covered(const Point& p) const {
    for (const auto& e : evals_)
        if (e.contains(p)) return true;
    return false;
}

RegularCover regular_cover(const Formula& U, const CoverOptions& opt) {
    auto frames = default_projection_candidates();
    for (const ProjectionSpec& p : {ProjectionSpec{1, true, 0}, ProjectionSpec{-1, true, 0}}) frames.push_back(p);
    return build_cover(U, opt, frames, 3, cylinder_pieces, 0.0);
}

RegularCover lregular_cover(const Formula& U, double C1, const CoverOptions& opt) {
    if (!(C1 >= 1.0)) throw std::invalid_argument("lregular_cover: C1 must be at least 1");
    std::vector<ProjectionSpec> frames{ProjectionSpec::identity(), ProjectionSpec::swap(),       ProjectionSpec::sheared(1),
                                       ProjectionSpec::sheared(-1), ProjectionSpec{1, true, 0}, ProjectionSpec{-1, true, 0}};
    RegularCover c = build_cover(U, opt, frames, 3, slope_pieces, C1);
    c.lregular = true;
    c.C1 = C1;
    return c;
}

InductionChecker::InductionChecker(const Formula& U, const ProjectionSpec& proj, const Box& box, int boundary_lines)
    : X_(boundary_polynomials(U, box)), box_(box), dec_(decompose_with(U, box, proj)),
      cells_(cylinder_pieces(U, dec_.proj, box, 0.0)), field_(boundary_distance_field(U, box, boundary_lines)) {}

const Cell1D* InductionChecker::base_of(const Point& x0) const {
    for (const auto& c : cells_) {
        if (!SectorEvaluator(c).contains(x0)) continue;
        for (const auto& b : dec_.cells)
            if (!b.is_point() && b.contains(c.sample_u)) return &b;
    }
    return nullptr;
}

InductionCheck InductionChecker::check(const Cell1D& base, const Point& x0, double Ct) const {
    InductionCheck r;
    const ProjectionSpec& proj = dec_.proj;
    const LRegularCell* U1 = nullptr;
    for (const auto& c : cells_) {
        if (!base.contains(c.sample_u)) continue;
        if (SectorEvaluator(c).contains(x0)) U1 = &c;
    }
    r.in_cylinder = U1 != nullptr;
    if (!U1) return r;

    // Horizontal distance to the line u = a is |u - a| / |grad u|.
    auto m = proj.matrix_double();
    const double scale = std::hypot(m[0], m[1]);
    const double u0 = m[0] * x0.x + m[1] * x0.y;
    r.dist_base = std::min(std::abs(u0 - base.lo.to_double()), std::abs(base.hi.to_double() - u0)) / scale;
    r.dist_disc = INFINITY;
    for (const auto& d : dec_.disc.points) r.dist_disc = std::min(r.dist_disc, std::abs(u0 - d.to_double()) / scale);

    const double spacing = 5e-4;
    auto samples = sample_cylinder_boundary(U1->cylinder(), proj, spacing);
    auto inv = proj.inverse_double();
    double stretch = std::max(std::hypot(inv[0], inv[2]), std::hypot(inv[1], inv[3]));
    DistanceField cyl(std::move(samples), 2 * spacing * stretch);
    r.dist_boundary_U1 = cyl(x0);
    r.dist_X = field_(x0);
    r.tolerance = std::max(cyl.tolerance(), field_.tolerance());

    double rhs = std::min(r.dist_X, r.dist_base);
    r.identity = std::abs(r.dist_boundary_U1 - rhs) <= 2 * r.tolerance;
    r.x_side = r.dist_X <= r.dist_base;
    r.hypothesis = r.dist_disc <= Ct * r.dist_base;
    r.conclusion = r.dist_X <= Ct * Ct * r.dist_boundary_U1 + r.tolerance;
    r.pass = r.identity && (!r.hypothesis || r.conclusion);

    ConeSpec cone{x0, -proj.shear.get_d(), 1.0 / 64, ProjectionSpec{0, proj.axis_swap, proj.rotation}, box_};
    r.regular = check_regularity(X_, cone, 32).verdict;
    return r;
}

InductionCheck lem_induction_check(const Formula& U, const ProjectionSpec& proj, const Cell1D& base, const Point& x0,
                                   double Ct, const Box& box) {
    return InductionChecker(U, proj, box).check(base, x0, Ct);
}

nlohmann::json to_json(const RegularCover& c) {
    nlohmann::json j;
    j["lregular"] = c.lregular;
    if (c.lregular) j["C1"] = c.C1;
    j["C"] = c.C;
    j["tight"] = {c.tight.x, c.tight.y};
    j["grid"] = c.grid;
    j["delta"] = c.delta;
    j["tested"] = c.tested;
    j["random_shears"] = c.random_shears;
    j["seed"] = c.seed;
    j["box"] = {to_string(c.box.xlo), to_string(c.box.xhi), to_string(c.box.ylo), to_string(c.box.yhi)};
    auto& projs = j["projections"] = nlohmann::json::array();
    for (std::size_t i = 0; i < c.projections.size(); ++i) {
        std::vector<int> ids;
        for (std::size_t k = 0; k < c.pieces.size(); ++k)
            if (c.pieces[k].projection == static_cast<int>(i)) ids.push_back(static_cast<int>(k));
        projs.push_back({{"frame", c.projections[i].to_string()}, {"pieces", ids}});
    }
    auto& pieces = j["pieces"] = nlohmann::json::array();
    for (const auto& p : c.pieces) {
        auto e = to_json(p.cell);
        e["projection"] = p.projection;
        pieces.push_back(std::move(e));
    }
    return j;
}

nlohmann::json to_json(const InductionCheck& r) {
    return {{"in_cylinder", r.in_cylinder}, {"regular", r.regular},       {"dist_boundary_U1", r.dist_boundary_U1},
            {"dist_X", r.dist_X},           {"dist_base", r.dist_base},   {"dist_disc", r.dist_disc},
            {"tolerance", r.tolerance},     {"identity", r.identity},     {"x_side", r.x_side},
            {"hypothesis", r.hypothesis},   {"conclusion", r.conclusion}, {"pass", r.pass}};
}

}  // namespace subalip
