#include "subalip/lipball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace subalip {

namespace {

bool within_L(double quotient, double L) { return quotient <= L * (1 + 1e-6) + 1e-9; }

std::array<double, 4> invert(const std::array<double, 4>& m) {
    double det = m[0] * m[3] - m[1] * m[2];
    return {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
}

std::string number(double d) {
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}

}  // namespace

LipschitzFunctionExtension::LipschitzFunctionExtension(std::vector<std::pair<double, double>> samples, double L,
                                                       double offset)
    : L_(L), offset_(offset) {
    if (samples.empty()) throw std::invalid_argument("mcshane_extend: empty sample set");
    if (!(L >= 0)) throw std::invalid_argument("mcshane_extend: L must be non-negative");
    std::sort(samples.begin(), samples.end());
    fmax_ = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (!std::isfinite(samples[k].first) || !std::isfinite(samples[k].second))
            throw std::invalid_argument("mcshane_extend: non-finite sample");
        fmax_ = std::max(fmax_, samples[k].second);
        if (k == 0) continue;
        double dp = samples[k].first - samples[k - 1].first;
        double df = std::abs(samples[k].second - samples[k - 1].second);
        max_gap_ = std::max(max_gap_, dp);
        // On an interval, neighbouring quotients bound all the others.
        double q = dp > 0 ? df / dp : df > 0 ? std::numeric_limits<double>::infinity() : 0.0;
        if (q > max_quotient_) {
            max_quotient_ = q;
            steepest_ = k;
        }
    }
    if (!within_L(max_quotient_, L)) reject(samples, L);
    samples_ = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(samples));
}

LipschitzFunctionExtension LipschitzFunctionExtension::sharing(const LipschitzFunctionExtension& other, double L,
                                                               double offset) {
    if (!(L >= 0)) throw std::invalid_argument("mcshane_extend: L must be non-negative");
    if (!within_L(other.max_quotient_, L)) other.reject(*other.samples_, L);
    LipschitzFunctionExtension e = other;
    e.L_ = L;
    e.offset_ = offset;
    return e;
}

void LipschitzFunctionExtension::reject(const std::vector<std::pair<double, double>>& samples, double L) const {
    const auto& a = samples[steepest_ - 1];
    const auto& b = samples[steepest_];
    throw ExtensionRejected("sampled Lipschitz quotient " + number(max_quotient_) + " exceeds L = " + number(L) +
                                " between " + number(a.first) + " and " + number(b.first),
                            a, b);
}

LipschitzFunctionExtension LipschitzFunctionExtension::constant(double c) {
    return LipschitzFunctionExtension({{0.0, c}}, 0.0);
}

double LipschitzFunctionExtension::operator()(double p) const {
    const auto& s = *samples_;
    auto it = std::lower_bound(s.begin(), s.end(), p, [](const auto& a, double x) { return a.first < x; });
    const std::size_t mid = static_cast<std::size_t>(it - s.begin());
    double best = -std::numeric_limits<double>::infinity();
    // Scan outwards; fmax - L d bounds everything further away.
    for (std::size_t k = mid; k < s.size(); ++k) {
        double d = s[k].first - p;
        if (fmax_ - L_ * d <= best) break;
        best = std::max(best, s[k].second - L_ * d);
    }
    for (std::size_t k = mid; k-- > 0;) {
        double d = p - s[k].first;
        if (fmax_ - L_ * d <= best) break;
        best = std::max(best, s[k].second - L_ * d);
    }
    return offset_ + best;
}

LipschitzFunctionExtension LipschitzFunctionExtension::shifted(double delta) const {
    LipschitzFunctionExtension e = *this;
    e.offset_ += delta;
    return e;
}

std::string LipschitzFunctionExtension::key() const {
    std::ostringstream os;
    os << static_cast<const void*>(samples_.get()) << ':' << number(L_) << ':' << number(offset_);
    return os.str();
}

namespace {

std::vector<double> base_grid(const Cell1D& base, int samples) {
    if (samples < 64) throw std::invalid_argument("mcshane_extend: need at least 64 samples");
    const double a = base.lo.to_double(), b = base.hi.to_double(), inset = 1e-9 * (b - a);
    std::vector<double> u(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) u[k] = (a + inset) + (b - a - 2 * inset) * k / (samples - 1);
    return u;
}

// Floating point first; exact isolation where nearby roots merge numerically
// (next to cusps).
double branch_value(const RootFunction& f, const BranchEvaluator& ev, double u) {
    double v = ev(u);
    if (std::isfinite(v)) return v;
    try {
        return f.at(from_double(u)).to_double();
    } catch (const BranchCountError&) {
        throw std::runtime_error("mcshane_extend: branch undefined at a sample point");
    }
}

}  // namespace

LipschitzFunctionExtension mcshane_extend(const RootFunction& f, double L, double offset, int samples) {
    BranchEvaluator ev(f);
    std::vector<std::pair<double, double>> s;
    for (double u : base_grid(f.base, samples)) s.emplace_back(u, branch_value(f, ev, u));
    return LipschitzFunctionExtension(std::move(s), L, offset);
}

namespace {

// Samples of the inverse of a steep branch: (v, u) pairs, refined until the
// gaps in v are as even as the forward grid.
LipschitzFunctionExtension inverse_extend(const RootFunction& f, double L, int samples) {
    BranchEvaluator ev(f);
    std::vector<std::pair<double, double>> uv;
    for (double u : base_grid(f.base, samples)) uv.emplace_back(u, branch_value(f, ev, u));
    const double span = std::abs(uv.back().second - uv.front().second);
    const double target = 1.5 * span / (samples - 1);
    for (int round = 0; round < 20; ++round) {
        std::vector<std::pair<double, double>> next{uv.front()};
        bool split = false;
        for (std::size_t k = 1; k < uv.size(); ++k) {
            if (std::abs(uv[k].second - uv[k - 1].second) > target) {
                double u = (uv[k].first + uv[k - 1].first) / 2;
                next.emplace_back(u, branch_value(f, ev, u));
                split = true;
            }
            next.push_back(uv[k]);
        }
        uv = std::move(next);
        if (!split) break;
    }
    std::vector<std::pair<double, double>> vu;
    for (const auto& [u, v] : uv) vu.emplace_back(v, u);
    return LipschitzFunctionExtension(std::move(vu), L);
}

std::shared_ptr<const LipschitzBallRegion> region(const std::array<double, 4>& m, double lo, double hi,
                                                  LipschitzFunctionExtension lower, LipschitzFunctionExtension upper) {
    auto r = std::make_shared<LipschitzBallRegion>();
    r->m = m;
    r->lo = lo;
    r->hi = hi;
    r->lower = std::move(lower);
    r->upper = std::move(upper);
    return r;
}

// + strip(h - 1, h + 1) - (h, h + 1) - (h - 1, h) over the base (lo, hi).
SignedCombination strip_identity(const std::array<double, 4>& m, double lo, double hi, const LipschitzFunctionExtension& h) {
    SignedCombination s;
    s.add(1, region(m, lo, hi, h.shifted(-1), h.shifted(1)));
    s.add(-1, region(m, lo, hi, h, h.shifted(1)));
    s.add(-1, region(m, lo, hi, h.shifted(-1), h));
    return s;
}

}  // namespace

bool LipschitzBallRegion::contains(const Point& p) const {
    const double u = m[0] * p.x + m[1] * p.y;
    if (!(u > lo && u < hi)) return false;
    if (dim == 1) return true;
    const double v = m[2] * p.x + m[3] * p.y;
    return lower(u) < v && v < upper(u);
}

std::string LipschitzBallRegion::key() const {
    std::string k = std::to_string(dim);
    for (double d : m) k += ',' + number(d);
    k += '|' + number(lo) + ',' + number(hi);
    if (dim == 2) k += '|' + lower.key() + '|' + upper.key();
    return k;
}

void SignedCombination::add(int coefficient, std::shared_ptr<const LipschitzBallRegion> r) {
    if (coefficient == 0) return;
    const std::string k = r->key();
    for (auto it = terms.begin(); it != terms.end(); ++it) {
        if (it->region->key() != k) continue;
        it->coefficient += coefficient;
        if (it->coefficient == 0) terms.erase(it);
        return;
    }
    terms.push_back({coefficient, std::move(r)});
}

void SignedCombination::append(const SignedCombination& other) {
    for (const auto& t : other.terms) add(t.coefficient, t.region);
}

double SignedCombination::extension_error() const {
    double e = 0.0;
    for (const auto& t : terms) {
        if (t.region->dim != 2) continue;
        for (const auto* f : {&t.region->lower, &t.region->upper}) e = std::max(e, 2 * f->L() * f->max_gap());
    }
    return e;
}

SignedCombination decompose_open_cell(const LRegularCell& cell, int samples) {
    if (cell.shape != LRegularCell::Shape::Sector) throw std::invalid_argument("decompose_open_cell: needs an open cell");
    const double L = 1.25 * cell.M;
    // One grid and one L for both bounds keeps f~ <= g~ everywhere.
    LipschitzFunctionExtension f = mcshane_extend(cell.lower, L, 0.0, samples);
    LipschitzFunctionExtension g = mcshane_extend(cell.upper, L, 0.0, samples);
    const auto m = cell.frame.matrix_double();
    const double lo = cell.base.lo.to_double(), hi = cell.base.hi.to_double();
    SignedCombination s;
    s.add(1, region(m, lo, hi, f.shifted(-1), g));
    s.add(1, region(m, lo, hi, f, g.shifted(1)));
    s.add(-1, region(m, lo, hi, f.shifted(-1), g.shifted(1)));
    return s;
}

SignedCombination decompose_graph_cell(const LRegularCell& cell, int samples) {
    switch (cell.shape) {
    case LRegularCell::Shape::Sector: throw std::invalid_argument("decompose_graph_cell: open cell");
    case LRegularCell::Shape::Graph: {
        const double L = 1.25 * cell.M;
        auto m = cell.frame.matrix_double();
        if (!cell.transposed)
            return strip_identity(m, cell.base.lo.to_double(), cell.base.hi.to_double(),
                                  mcshane_extend(cell.graph, L, 0.0, samples));
        // Steep branch: a graph over the fiber coordinate.
        LipschitzFunctionExtension h = inverse_extend(cell.graph, L, samples);
        std::swap(m[0], m[2]);
        std::swap(m[1], m[3]);
        return strip_identity(m, h.samples().front().first, h.samples().back().first, h);
    }
    case LRegularCell::Shape::Segment: {
        // Orthonormal frame along the segment; the segment is the constant graph.
        const double dx = cell.b.x - cell.a.x, dy = cell.b.y - cell.a.y, n = std::hypot(dx, dy);
        const std::array<double, 4> m{dx / n, dy / n, -dy / n, dx / n};
        const double ta = m[0] * cell.a.x + m[1] * cell.a.y, tb = m[0] * cell.b.x + m[1] * cell.b.y;
        const double c = m[2] * cell.a.x + m[3] * cell.a.y;
        return strip_identity(m, std::min(ta, tb), std::max(ta, tb), LipschitzFunctionExtension::constant(c));
    }
    case LRegularCell::Shape::Point: {
        // 1_p = sum over I of (-1)^|I| 1_{U_I}, U_I the unit box around p
        // minus the lines z_i = p_i for i in I.
        const std::array<double, 4> id{1, 0, 0, 1};
        const double px = cell.a.x, py = cell.a.y;
        auto box = [&](double x0, double x1, double y0, double y1) {
            return region(id, x0, x1, LipschitzFunctionExtension::constant(y0), LipschitzFunctionExtension::constant(y1));
        };
        SignedCombination s;
        s.add(1, box(px - 1, px + 1, py - 1, py + 1));
        s.add(-1, box(px - 1, px, py - 1, py + 1));
        s.add(-1, box(px, px + 1, py - 1, py + 1));
        s.add(-1, box(px - 1, px + 1, py - 1, py));
        s.add(-1, box(px - 1, px + 1, py, py + 1));
        for (double x0 : {px - 1, px})
            for (double y0 : {py - 1, py}) s.add(1, box(x0, x0 + 1, y0, y0 + 1));
        return s;
    }
    }
    return {};
}

SignedCombination decompose_indicator(const Formula& U, double C1, const Box& box, int samples) {
    SignedCombination s;
    for (const LRegularCell& c : lregular_decompose(U, C1, box))
        s.append(c.shape == LRegularCell::Shape::Sector ? decompose_open_cell(c, samples) : decompose_graph_cell(c, samples));
    return s;
}

int eval_signed_combination(const SignedCombination& s, const Point& p) {
    int total = 0;
    for (const auto& t : s.terms)
        if (t.region->contains(p)) total += t.coefficient;
    return total;
}

BallCertificate certify_ball(const LipschitzBallRegion& r, int grid) {
    BallCertificate c;
    auto fail = [&](const std::string& v) {
        c.certified = false;
        c.violations.push_back(v);
    };
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo < r.hi)) fail("base is not a bounded open interval");
    c.depth = 1;
    if (r.dim == 1 || !c.certified) return c;
    c.depth = 2;
    c.L_lower = r.lower.L();
    c.L_upper = r.upper.L();
    const double w = r.hi - r.lo;
    // Lipschitz quotients of the evaluated extensions on a grid around the base.
    for (const auto* f : {&r.lower, &r.upper}) {
        double worst = f->max_quotient();
        double prev = (*f)(r.lo - w);
        for (int k = 1; k <= grid; ++k) {
            double p = r.lo - w + 3 * w * k / grid, val = (*f)(p);
            worst = std::max(worst, std::abs(val - prev) / (3 * w / grid));
            prev = val;
        }
        if (!within_L(worst, f->L())) fail(f == &r.lower ? "lower bound is not L-Lipschitz" : "upper bound is not L-Lipschitz");
    }
    bool ordered = true;
    for (int k = 0; k <= grid; ++k) {
        double p = r.lo - w + 3 * w * k / grid;
        ordered = ordered && r.lower(p) <= r.upper(p);
    }
    if (!ordered) fail("lower bound exceeds upper bound");
    c.gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= grid; ++k) {
        double p = r.lo + w * k / grid;
        c.gap = std::min(c.gap, r.upper(p) - r.lower(p));
    }
    if (c.gap < 1 - 1e-6) fail("gap below 1");
    return c;
}

std::vector<Point> sample_region_boundary(const LipschitzBallRegion& r, double spacing) {
    if (!(spacing > 0)) throw std::invalid_argument("sample_region_boundary: spacing must be positive");
    const auto inv = invert(r.m);
    // Lengths in (u, v) stretch by at most the operator norm of the inverse.
    const double stretch = std::sqrt(inv[0] * inv[0] + inv[1] * inv[1] + inv[2] * inv[2] + inv[3] * inv[3]);
    const double step = spacing / stretch;
    auto to_xy = [&](double u, double v) { return Point{inv[0] * u + inv[1] * v, inv[2] * u + inv[3] * v}; };
    std::vector<Point> out;
    if (r.dim == 1) return out;
    const double Lmax = std::max(r.lower.L(), r.upper.L());
    const int n = static_cast<int>(std::ceil((r.hi - r.lo) * std::sqrt(1 + Lmax * Lmax) / step)) + 1;
    for (int k = 0; k <= n; ++k) {
        double u = r.lo + (r.hi - r.lo) * k / n;
        out.push_back(to_xy(u, r.lower(u)));
        out.push_back(to_xy(u, r.upper(u)));
    }
    for (double u : {r.lo, r.hi}) {
        double a = r.lower(u), b = r.upper(u);
        int wall = static_cast<int>(std::ceil((b - a) / step)) + 1;
        for (int k = 1; k < wall; ++k) out.push_back(to_xy(u, a + (b - a) * k / wall));
    }
    return out;
}

namespace {

// Sample data goes out with the first extension that uses a sample set; later
// ones refer to it by id.
struct SampleIds {
    std::map<const void*, int> ids;
    std::set<int> emitted;
};

nlohmann::json extension_json(const LipschitzFunctionExtension& f, SampleIds* ids) {
    nlohmann::json j{{"L", f.L()}, {"offset", f.offset()}, {"samples", f.samples().size()}};
    if (!ids) return j;
    int id = ids->ids.at(static_cast<const void*>(&f.samples()));
    j["sample_set"] = id;
    if (ids->emitted.insert(id).second) {
        nlohmann::json data = nlohmann::json::array();
        for (const auto& [u, v] : f.samples()) data.push_back({u, v});
        j["data"] = std::move(data);
    }
    return j;
}

nlohmann::json region_json(const LipschitzBallRegion& r, SampleIds* ids) {
    nlohmann::json j{{"dim", r.dim}, {"frame", r.m}, {"base", {r.lo, r.hi}}};
    if (r.dim == 2) {
        j["lower"] = extension_json(r.lower, ids);
        j["upper"] = extension_json(r.upper, ids);
        j["gamma"] = certify_ball(r, 64).gap;
    }
    return j;
}

}  // namespace

nlohmann::json to_json(const LipschitzBallRegion& r) { return region_json(r, nullptr); }

nlohmann::json to_json(const SignedCombination& s) {
    SampleIds ids;
    for (const auto& t : s.terms)
        if (t.region->dim == 2)
            for (const auto* f : {&t.region->lower, &t.region->upper})
                ids.ids.emplace(static_cast<const void*>(&f->samples()), static_cast<int>(ids.ids.size()));
    nlohmann::json j = nlohmann::json::array();
    for (const auto& t : s.terms) j.push_back({{"coefficient", t.coefficient}, {"region", region_json(*t.region, &ids)}});
    return j;
}

SignedCombination signed_combination_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("signed combination: expected a list of terms");
    std::map<int, LipschitzFunctionExtension> sets;
    auto extension = [&](const nlohmann::json& e) {
        int id = e.at("sample_set").get<int>();
        const double L = e.at("L").get<double>(), offset = e.at("offset").get<double>();
        if (e.contains("data")) {
            std::vector<std::pair<double, double>> data;
            for (const auto& pt : e.at("data")) data.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
            return sets.emplace(id, LipschitzFunctionExtension(std::move(data), L, offset)).first->second;
        }
        auto it = sets.find(id);
        if (it == sets.end()) throw std::invalid_argument("signed combination: sample set " + std::to_string(id) + " used before its data");
        return LipschitzFunctionExtension::sharing(it->second, L, offset);
    };
    SignedCombination s;
    for (const auto& t : j) {
        const auto& r = t.at("region");
        auto region = std::make_shared<LipschitzBallRegion>();
        region->dim = r.at("dim").get<int>();
        region->m = r.at("frame").get<std::array<double, 4>>();
        region->lo = r.at("base").at(0).get<double>();
        region->hi = r.at("base").at(1).get<double>();
        if (region->dim == 2) {
            region->lower = extension(r.at("lower"));
            region->upper = extension(r.at("upper"));
        }
        s.terms.push_back({t.at("coefficient").get<int>(), std::move(region)});
    }
    return s;
}

}  // namespace subalip
