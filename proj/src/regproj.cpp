#include "subalip/regproj.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace subalip {

ProjectionSpec ConeSpec::projection() const {
    ProjectionSpec p = frame;
    p.shear = -from_double(xi);
    return p;
}

bool ConeSpec::contains(const Point& p) const {
    auto m = frame.matrix_double();
    double dx = p.x - apex.x, dy = p.y - apex.y;
    double u = m[0] * dx + m[1] * dy, v = m[2] * dx + m[3] * dy;
    if (v == 0.0) return false;
    return std::abs(u / v - xi) < eps;
}

namespace {

double cauchy_bound(const std::vector<double>& c) {
    double b = 0.0;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) b = std::max(b, std::abs(c[k] / c.back()));
    return b + 1.0;
}

std::vector<double> roots_on_line(const Polynomial& p, double u0, double eta, double v0, const ConeSpec& cone) {
    auto c = restrict_to_line(p, u0, eta, v0, 1.0);
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    if (c.size() < 2) return {};
    double b = cauchy_bound(c);
    auto roots = real_roots_numeric(c, -b, b);
    if (!cone.window) return roots;
    const Box& w = *cone.window;
    auto inv = cone.frame.inverse_double();
    std::vector<double> kept;
    for (double lambda : roots) {
        double u = u0 + lambda * eta, v = v0 + lambda;
        double x = inv[0] * u + inv[1] * v, y = inv[2] * u + inv[3] * v;
        if (x >= w.xlo.get_d() && x <= w.xhi.get_d() && y >= w.ylo.get_d() && y <= w.yhi.get_d()) kept.push_back(lambda);
    }
    return kept;
}

}  // namespace

std::vector<BranchTrace> trace_branches(const std::vector<Polynomial>& X, const ConeSpec& cone, int steps) {
    if (steps < 16) throw std::invalid_argument("trace_branches: steps must be at least 16");
    if (!(cone.eps > 0)) throw std::invalid_argument("trace_branches: aperture must be positive");
    auto m = cone.frame.matrix_double();
    const double u0 = m[0] * cone.apex.x + m[1] * cone.apex.y, v0 = m[2] * cone.apex.x + m[3] * cone.apex.y;
    std::vector<Polynomial> framed;
    for (const auto& p : X) {
        if (p.is_zero()) throw std::invalid_argument("trace_branches: zero polynomial");
        framed.push_back(cone.frame.transform(p));
    }
    const int n = 2 * steps;
    const double h = cone.eps / steps;
    // roots[k][i]: lambda values of polynomial i on the k-th line.
    std::vector<std::vector<std::vector<double>>> roots(static_cast<std::size_t>(n));
    std::vector<double> etas(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        etas[k] = cone.xi - cone.eps + h * (k + 0.5);
        for (const auto& p : framed) roots[k].push_back(roots_on_line(p, u0, etas[k], v0, cone));
    }

    std::map<std::pair<int, int>, BranchTrace> traces;
    for (int k = 0; k < n; ++k)
        for (std::size_t i = 0; i < framed.size(); ++i)
            for (std::size_t j = 0; j < roots[k][i].size(); ++j) {
                auto& t = traces[{static_cast<int>(i), static_cast<int>(j)}];
                t.poly = static_cast<int>(i);
                t.ordinal = static_cast<int>(j);
                t.samples.emplace_back(etas[k], roots[k][i][j]);
            }
    auto mark = [](BranchTrace& t, const std::string& issue) {
        if (t.clean) t.issue = issue;
        t.clean = false;
    };
    for (auto& [key, t] : traces) {
        if (static_cast<int>(t.samples.size()) != n) mark(t, "branch appears or vanishes inside the cone");
        for (const auto& [eta, lambda] : t.samples)
            if (std::abs(lambda) <= 1e-9) mark(t, "branch passes through the apex");
    }
    // Crossings between branches and nearest-value continuation.
    std::vector<BranchTrace*> all;
    for (auto& [key, t] : traces) all.push_back(&t);
    auto value_at = [&](const BranchTrace& t, double eta) -> std::optional<double> {
        for (const auto& [e, l] : t.samples)
            if (e == eta) return l;
        return std::nullopt;
    };
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b) {
            int sign = 0;
            for (double eta : etas) {
                auto la = value_at(*all[a], eta), lb = value_at(*all[b], eta);
                if (!la || !lb) continue;
                double d = *la - *lb;
                int s = std::abs(d) <= 1e-12 * std::max(1.0, std::abs(*la)) ? 0 : (d > 0 ? 1 : -1);
                if (s == 0 || (sign != 0 && s != sign)) {
                    mark(*all[a], "branches meet inside the cone");
                    mark(*all[b], "branches meet inside the cone");
                    break;
                }
                sign = s;
            }
        }
    for (auto* t : all) {
        for (std::size_t k = 0; k + 1 < t->samples.size(); ++k) {
            const auto [eta, lambda] = t->samples[k];
            double gap = std::numeric_limits<double>::infinity();
            for (const auto* other : all) {
                if (other == t) continue;
                if (auto l = value_at(*other, eta)) gap = std::min(gap, std::abs(*l - lambda));
            }
            double jump = std::abs(t->samples[k + 1].second - lambda);
            if (jump > 3.0 * gap) {
                mark(*t, "continuation jump exceeds 3x the inter-root gap");
                break;
            }
        }
    }
    std::vector<BranchTrace> out;
    for (auto& [key, t] : traces) out.push_back(std::move(t));
    return out;
}

RegularityReport check_regularity(const std::vector<Polynomial>& X, const ConeSpec& cone, double C, int steps) {
    RegularityReport r;
    r.C = C;
    const ProjectionSpec proj = cone.projection();
    for (const auto& p : X)
        if (!content(proj.transform(p), 1).is_constant()) r.finite = false;
    r.traces = trace_branches(X, cone, steps);
    r.branch_count = static_cast<int>(r.traces.size());
    const double h = cone.eps / steps;
    for (const auto& t : r.traces) {
        if (!t.clean) {
            r.clean = false;
            continue;
        }
        for (std::size_t k = 1; k + 1 < t.samples.size(); ++k) {
            double derivative = (t.samples[k + 1].second - t.samples[k - 1].second) / (2 * h);
            r.gradient_ratio_max = std::max(r.gradient_ratio_max, std::abs(derivative) / std::abs(t.samples[k].second));
        }
    }
    r.verdict = r.finite && r.clean && r.gradient_ratio_max <= C;
    return r;
}

std::optional<std::size_t> find_regular_direction(const std::vector<Polynomial>& X, const Point& x0,
                                                  const std::vector<double>& candidates, double C, double eps,
                                                  const ProjectionSpec& frame, int steps, const std::optional<Box>& window) {
    if (candidates.size() < 3) throw std::invalid_argument("find_regular_direction: need at least 3 candidates");
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ConeSpec cone{x0, candidates[i], eps, frame, window};
        if (check_regularity(X, cone, C, steps).verdict) return i;
    }
    return std::nullopt;
}

double choose_aperture(const std::vector<Polynomial>& X, const DiscriminantSet& disc, ConeSpec cone) {
    const ProjectionSpec proj = cone.projection();
    auto inv = proj.inverse_double();
    std::vector<Point> flagged;
    for (const auto& p : X) {
        Polynomial t = proj.transform(p);
        for (const auto& d : disc.points) {
            double u = d.to_double();
            auto c = restrict_to_line(t, u, 0.0, 0.0, 1.0);
            while (!c.empty() && c.back() == 0.0) c.pop_back();
            if (c.size() < 2) continue;
            double b = cauchy_bound(c);
            for (double v : real_roots_numeric(c, -b, b)) flagged.push_back({inv[0] * u + inv[1] * v, inv[2] * u + inv[3] * v});
        }
    }
    cone.eps = 0.25;
    while (cone.eps >= std::ldexp(1.0, -10)) {
        bool hit = false;
        for (const auto& f : flagged) hit = hit || cone.contains(f);
        if (!hit) return cone.eps;
        cone.eps /= 2;
    }
    return cone.eps;
}

ConeDistanceReport cone_distance_check(const std::vector<Point>& boundary_samples, const ConeSpec& cone,
                                       const DiscriminantSet& disc, double Ct) {
    ConeDistanceReport r;
    r.distance_outside_cone = std::numeric_limits<double>::infinity();
    for (const auto& s : boundary_samples)
        if (!cone.contains(s)) r.distance_outside_cone = std::min(r.distance_outside_cone, distance(cone.apex, s));
    if (!std::isfinite(r.distance_outside_cone)) {
        r.degenerate = true;
        r.pass = true;
        return r;
    }
    auto m = cone.projection().matrix_double();
    const double u0 = m[0] * cone.apex.x + m[1] * cone.apex.y;
    r.distance_to_discriminant = std::numeric_limits<double>::infinity();
    for (const auto& d : disc.points) r.distance_to_discriminant = std::min(r.distance_to_discriminant, std::abs(d.to_double() - u0));
    r.ratio = std::isfinite(r.distance_to_discriminant) ? r.distance_outside_cone / r.distance_to_discriminant : 0.0;
    r.pass = r.ratio <= Ct;
    return r;
}

nlohmann::json to_json(const RegularityReport& r) {
    nlohmann::json j{{"finite", r.finite},
                     {"branch_count", r.branch_count},
                     {"clean", r.clean},
                     {"gradient_ratio_max", r.gradient_ratio_max},
                     {"C", r.C},
                     {"verdict", r.verdict}};
    j["traces"] = nlohmann::json::array();
    for (const auto& t : r.traces) {
        nlohmann::json e{{"poly", t.poly}, {"ordinal", t.ordinal}, {"clean", t.clean}};
        if (!t.clean) e["issue"] = t.issue;
        for (const auto& [eta, lambda] : t.samples) e["samples"].push_back({eta, lambda});
        j["traces"].push_back(e);
    }
    return j;
}

}  // namespace subalip
