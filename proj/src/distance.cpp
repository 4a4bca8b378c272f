#include "subalip/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subalip {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

PointCloud::PointCloud(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) return;
    double x1 = points_[0].x, y1 = points_[0].y;
    x0_ = x1;
    y0_ = y1;
    for (const auto& p : points_) {
        x0_ = std::min(x0_, p.x);
        y0_ = std::min(y0_, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    }
    // About two points per bucket on average.
    double extent = std::max({x1 - x0_, y1 - y0_, 1e-12});
    double area = std::max((x1 - x0_) * (y1 - y0_), extent * extent * 1e-3);
    cell_ = std::max(std::sqrt(2.0 * area / static_cast<double>(points_.size())), extent * 1e-6);
    nx_ = static_cast<int>((x1 - x0_) / cell_) + 1;
    ny_ = static_cast<int>((y1 - y0_) / cell_) + 1;
    buckets_.assign(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_), {});
    for (std::size_t i = 0; i < points_.size(); ++i) {
        int bx = std::min(nx_ - 1, static_cast<int>((points_[i].x - x0_) / cell_));
        int by = std::min(ny_ - 1, static_cast<int>((points_[i].y - y0_) / cell_));
        buckets_[static_cast<std::size_t>(by) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(bx)].push_back(
            static_cast<int>(i));
    }
}

double PointCloud::nearest(const Point& q, Point* witness) const {
    double best = std::numeric_limits<double>::infinity();
    if (points_.empty()) return best;
    int best_index = -1;
    const int qx = static_cast<int>(std::floor((q.x - x0_) / cell_));
    const int qy = static_cast<int>(std::floor((q.y - y0_) / cell_));
    // Chebyshev distance (in buckets) from the query bucket to the grid.
    const int off_x = qx < 0 ? -qx : (qx >= nx_ ? qx - nx_ + 1 : 0);
    const int off_y = qy < 0 ? -qy : (qy >= ny_ ? qy - ny_ + 1 : 0);
    const int max_ring = std::max(nx_, ny_) + std::max(off_x, off_y) + 1;
    for (int ring = std::max(off_x, off_y); ring <= max_ring; ++ring) {
        // Every point in a ring >= r is at least (r - 1) * cell away.
        if (best_index >= 0 && (ring - 1) * cell_ > best) break;
        for (int by = qy - ring; by <= qy + ring; ++by) {
            if (by < 0 || by >= ny_) continue;
            const bool edge_row = by == qy - ring || by == qy + ring;
            for (int bx = qx - ring; bx <= qx + ring; bx += (edge_row ? 1 : 2 * ring)) {
                if (bx >= 0 && bx < nx_) {
                    for (int i : buckets_[static_cast<std::size_t>(by) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(bx)]) {
                        double d = distance(q, points_[static_cast<std::size_t>(i)]);
                        if (d < best) best = d, best_index = i;
                    }
                }
                if (ring == 0) break;
            }
        }
    }
    if (witness && best_index >= 0) *witness = points_[static_cast<std::size_t>(best_index)];
    return best;
}

std::vector<double> restrict_to_line(const Polynomial& p, double a, double b, double c, double d) {
    std::vector<double> out(static_cast<std::size_t>(p.total_degree()) + 1, 0.0);
    for (const auto& [e, coef] : p.terms()) {
        std::vector<double> term{coef.get_d()};
        auto multiply_linear = [&](double k0, double k1, int times) {
            for (int r = 0; r < times; ++r) {
                std::vector<double> next(term.size() + 1, 0.0);
                for (std::size_t i = 0; i < term.size(); ++i) {
                    next[i] += term[i] * k0;
                    next[i + 1] += term[i] * k1;
                }
                term = std::move(next);
            }
        };
        multiply_linear(a, b, e[0]);
        multiply_linear(c, d, e[1]);
        for (std::size_t i = 0; i < term.size(); ++i) out[i] += term[i];
    }
    return out;
}

std::vector<Point> sample_zero_set(const Polynomial& p, const Box& box, int lines) {
    const double xlo = box.xlo.get_d(), xhi = box.xhi.get_d(), ylo = box.ylo.get_d(), yhi = box.yhi.get_d();
    std::vector<Point> out;
    for (int i = 0; i < lines; ++i) {
        double x = xlo + (xhi - xlo) * (i + 0.5) / lines;
        for (double y : real_roots_numeric(restrict_to_line(p, x, 0, 0, 1), ylo, yhi)) out.push_back({x, y});
        double y = ylo + (yhi - ylo) * (i + 0.5) / lines;
        for (double x2 : real_roots_numeric(restrict_to_line(p, 0, 1, y, 0), xlo, xhi)) out.push_back({x2, y});
    }
    return out;
}

std::vector<Point> sample_boundary(const Formula& U, const Box& box, int lines) {
    const double r = 1e-7 * std::max(box.width().get_d(), box.height().get_d());
    std::vector<Point> out;
    for (const Polynomial& p : U.atom_polynomials()) {
        if (p.is_constant()) continue;
        for (const Point& s : sample_zero_set(p, box, lines)) {
            bool in = false, out_of = false;
            for (int k = 0; k < 8 && !(in && out_of); ++k) {
                double a = k * 0.7853981633974483;
                std::vector<double> q{s.x + r * std::cos(a), s.y + r * std::sin(a)};
                (U.contains(q) ? in : out_of) = true;
            }
            if (in && out_of) out.push_back(s);
        }
    }
    return out;
}

std::vector<Point> sample_cylinder_boundary(const CylindricalCell& c, const ProjectionSpec& proj, double spacing) {
    auto inv = proj.inverse_double();
    auto to_xy = [&](double u, double v) { return Point{inv[0] * u + inv[1] * v, inv[2] * u + inv[3] * v}; };
    BranchEvaluator lower(c.lower), upper(c.upper);
    const double a = c.base.lo.to_double(), b = c.base.hi.to_double();
    const double inset = 1e-9 * std::max(1.0, b - a);
    std::vector<Point> out;
    std::vector<double> us;
    const int n = std::max(64, static_cast<int>(std::ceil((b - a) / spacing)));
    for (int k = 0; k <= n; ++k) us.push_back(std::clamp(a + (b - a) * k / n, a + inset, b - inset));
    // Refine where a branch is steep so consecutive graph samples stay close.
    std::vector<std::pair<double, double>> lo_vals, hi_vals;
    for (std::size_t k = 0; k < us.size(); ++k) {
        lo_vals.emplace_back(us[k], lower(us[k]));
        hi_vals.emplace_back(us[k], upper(us[k]));
    }
    auto emit_graph = [&](const BranchEvaluator& f, std::vector<std::pair<double, double>>& vals) {
        for (std::size_t k = 0; k < vals.size(); ++k) {
            auto [u, v] = vals[k];
            if (std::isfinite(v)) out.push_back(to_xy(u, v));
            if (k + 1 == vals.size()) break;
            auto [u2, v2] = vals[k + 1];
            if (!std::isfinite(v) || !std::isfinite(v2)) continue;
            int extra = std::min(4096, static_cast<int>(std::abs(v2 - v) / spacing));
            for (int j = 1; j <= extra; ++j) {
                double uu = u + (u2 - u) * j / (extra + 1);
                double vv = f(uu);
                if (std::isfinite(vv)) out.push_back(to_xy(uu, vv));
            }
        }
    };
    emit_graph(lower, lo_vals);
    emit_graph(upper, hi_vals);
    for (auto [u, vl, vh] : {std::tuple{us.front(), lo_vals.front().second, hi_vals.front().second},
                             std::tuple{us.back(), lo_vals.back().second, hi_vals.back().second}}) {
        if (!std::isfinite(vl) || !std::isfinite(vh)) continue;
        int m = static_cast<int>((vh - vl) / spacing) + 1;
        for (int j = 0; j <= m; ++j) out.push_back(to_xy(u, vl + (vh - vl) * j / m));
    }
    return out;
}

DistanceField::DistanceField(std::vector<Point> samples, double tolerance)
    : cloud_(std::move(samples)), tolerance_(tolerance) {}

DistanceField boundary_distance_field(const Formula& U, const Box& box, int lines) {
    auto samples = sample_boundary(U, box, lines);
    if (samples.empty()) throw std::domain_error("the set has an empty sampled boundary");
    double spacing = std::max(box.width().get_d(), box.height().get_d()) / lines;
    return DistanceField(std::move(samples), 2.0 * spacing);
}

}  // namespace subalip
