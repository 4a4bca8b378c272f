#include "subalip/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace subalip {

namespace {

constexpr std::size_t kMaxWitnesses = 32;

void record(VerificationReport& r, const Point& p, std::string what) {
    ++r.mismatch_count;
    if (r.mismatches.size() < kMaxWitnesses) r.mismatches.push_back({p, std::move(what)});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RasterGrid::RasterGrid(int resolution, const Box& box) : n_(resolution), box_(box) {
    if (resolution < 64) throw std::invalid_argument("RasterGrid: resolution must be at least 64");
    if (box.width() <= 0 || box.height() <= 0) throw std::invalid_argument("RasterGrid: empty box");
}

Rational RasterGrid::center_x(int i) const { return box_.xlo + box_.width() * Rational(2 * i + 1, 2 * n_); }
Rational RasterGrid::center_y(int j) const { return box_.ylo + box_.height() * Rational(2 * j + 1, 2 * n_); }
Point RasterGrid::center(int i, int j) const { return {center_x(i).get_d(), center_y(j).get_d()}; }

double RasterGrid::pixel_diagonal() const {
    return std::hypot(box_.width().get_d() / n_, box_.height().get_d() / n_);
}

long Bitmap::count() const { return std::count(bits.begin(), bits.end(), std::uint8_t{1}); }

Bitmap rasterize_formula(const Formula& U, const RasterGrid& grid) {
    const int n = grid.resolution();
    Bitmap b;
    b.resolution = n;
    b.bits.assign(static_cast<std::size_t>(n) * n, 0);
    std::vector<Rational> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[i] = grid.center_x(i);
    for (int j = 0; j < n; ++j) {
        Rational y = grid.center_y(j);
        for (int i = 0; i < n; ++i) {
            std::array<Rational, 2> pt{xs[i], y};
            b.bits[static_cast<std::size_t>(j) * n + i] = formula_membership(U, pt) ? 1 : 0;
        }
    }
    return b;
}

double VerificationReport::agreement() const {
    return tested == 0 ? 1.0 : 1.0 - static_cast<double>(mismatch_count) / tested;
}

double minimum_tube_width(const SignedCombination& s, const RasterGrid& grid) {
    return std::max(4 * grid.pixel_diagonal(), 2 * s.extension_error());
}

VerificationReport compare_indicators(const Formula& U, const SignedCombination& s, const RasterGrid& grid,
                                      double delta, int random_points, std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    const double minimum = minimum_tube_width(s, grid);
    if (delta < 0) delta = minimum;
    if (delta < minimum)
        throw std::invalid_argument("compare_indicators: delta " + std::to_string(delta) + " is below the minimum tube width " +
                                    std::to_string(minimum));
    VerificationReport r;
    r.check = "indicator";
    r.delta = delta;
    Bitmap expected = rasterize_formula(U, grid);

    const int n = grid.resolution();
    auto samples = sample_boundary(U, grid.box(), std::max(2048, 4 * n));
    for (const auto& t : s.terms) {
        auto b = sample_region_boundary(*t.region, delta / 4);
        samples.insert(samples.end(), b.begin(), b.end());
    }
    PointCloud tube(std::move(samples));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Point p = grid.center(i, j);
            if (tube.nearest(p) <= delta) {
                ++r.excluded;
                continue;
            }
            ++r.tested;
            int want = expected.at(i, j) ? 1 : 0;
            int got = eval_signed_combination(s, p);
            if (got != want) record(r, p, "sum " + std::to_string(got) + ", indicator " + std::to_string(want));
        }
    // Dyadic points with 2^20 steps per unit of the box, exact as doubles.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> step(0, 1L << 20);
    for (int k = 0; k < random_points; ++k) {
        Rational x = grid.box().xlo + grid.box().width() * Rational(step(rng), 1L << 20);
        Rational y = grid.box().ylo + grid.box().height() * Rational(step(rng), 1L << 20);
        Point p{x.get_d(), y.get_d()};
        if (tube.nearest(p) <= delta) {
            ++r.excluded;
            continue;
        }
        ++r.tested;
        std::array<Rational, 2> pt{x, y};
        int want = formula_membership(U, pt) ? 1 : 0;
        int got = eval_signed_combination(s, p);
        if (got != want) record(r, p, "sum " + std::to_string(got) + ", indicator " + std::to_string(want));
    }
    r.pass = r.mismatch_count == 0;
    r.seconds = seconds_since(t0);
    return r;
}

VerificationReport verify_cover(const Formula& U, const RegularCover& cover, const RasterGrid& grid) {
    auto t0 = std::chrono::steady_clock::now();
    VerificationReport r;
    r.check = "cover";
    r.delta = cover.delta;
    Bitmap inside = rasterize_formula(U, grid);
    DistanceField field = boundary_distance_field(U, grid.box(), 4096);
    CoverEvaluator ev(cover);
    const int n = grid.resolution();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!inside.at(i, j)) continue;
            Point p = grid.center(i, j);
            double dU = field(p);
            if (dU <= cover.delta) {
                ++r.excluded;
                continue;
            }
            ++r.tested;
            double d = ev.max_piece_distance(p);
            if (d == 0.0) {
                record(r, p, "in no piece");
            } else if (dU > cover.C * d * (1 + 1e-9)) {
                std::ostringstream os;
                os << "dist to boundary " << dU << " > C " << cover.C << " x max piece distance " << d;
                record(r, p, os.str());
            }
        }
    r.pass = r.mismatch_count == 0;
    r.seconds = seconds_since(t0);
    return r;
}

namespace {

struct SvgFrame {
    double x0, y0, scale;
    double sx(double x) const { return (x - x0) * scale; }
    double sy(double y) const { return (y0 - y) * scale; }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Lower branch left to right, upper branch back; NaN samples dropped.
std::vector<Point> sector_outline(const LRegularCell& c, int n = 96) {
    SectorEvaluator ev(c);
    const double a = ev.lo(), b = ev.hi(), inset = 1e-9 * std::max(1.0, b - a);
    std::vector<Point> lo, hi;
    for (int k = 0; k <= n; ++k) {
        double u = std::clamp(a + (b - a) * k / n, a + inset, b - inset);
        double l = ev.lower(u), h = ev.upper(u);
        if (std::isfinite(l)) lo.push_back(ev.from_frame(u, l));
        if (std::isfinite(h)) hi.push_back(ev.from_frame(u, h));
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

std::string polygon(const std::vector<Point>& pts, const SvgFrame& f, const std::string& cls) {
    std::string s = "<polygon class=\"" + cls + "\" points=\"";
    for (const Point& p : pts) s += fmt(f.sx(p.x)) + "," + fmt(f.sy(p.y)) + " ";
    return s + "\"/>\n";
}

}  // namespace

std::string render_svg(const PlotArtifacts& a) {
    const double w = a.view.width().get_d(), h = a.view.height().get_d();
    SvgFrame f{a.view.xlo.get_d(), a.view.yhi.get_d(), 800.0 / std::max(w, h)};
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w * f.scale) << "\" height=\"" << fmt(h * f.scale)
       << "\" viewBox=\"0 0 " << fmt(w * f.scale) << " " << fmt(h * f.scale) << "\">\n";
    os << "<style>.set{fill:#dde6f3}.cell{fill:none;stroke:#555;stroke-width:0.8}"
          ".piece{fill:#3b7dd8;fill-opacity:0.12;stroke:#1d4f91;stroke-width:1}"
          ".boundary{fill:none;stroke:#000;stroke-width:1.5;stroke-linecap:round}"
          ".region{fill:none;stroke:#2e8b57;stroke-width:1;stroke-linecap:round}"
          ".trace{fill:none;stroke:#c0392b;stroke-width:1}</style>\n";
    if (a.set) {
        RasterGrid g(200, a.view);
        Bitmap b = rasterize_formula(*a.set, g);
        const double pw = w / 200 * f.scale, ph = h / 200 * f.scale;
        os << "<g id=\"set\">\n";
        for (int j = 0; j < 200; ++j)
            for (int i = 0; i < 200;) {
                if (!b.at(i, j)) {
                    ++i;
                    continue;
                }
                int k = i;
                while (k < 200 && b.at(k, j)) ++k;
                os << "<rect class=\"set\" x=\"" << fmt(i * pw) << "\" y=\"" << fmt((199 - j) * ph) << "\" width=\""
                   << fmt((k - i) * pw) << "\" height=\"" << fmt(ph) << "\"/>\n";
                i = k;
            }
        os << "</g>\n<g id=\"boundary\">\n";
        std::vector<Point> bd;
        try {
            bd = sample_boundary(*a.set, a.view, 400);
        } catch (const std::exception&) {
        }
        if (!bd.empty()) {
            os << "<path class=\"boundary\" d=\"";
            for (const Point& p : bd) os << "M" << fmt(f.sx(p.x)) << " " << fmt(f.sy(p.y)) << "h0 ";
            os << "\"/>\n";
        }
        os << "</g>\n";
    }
    if (!a.cells.empty()) {
        os << "<g id=\"cells\">\n";
        for (const auto& c : a.cells)
            if (c.shape == LRegularCell::Shape::Sector) os << polygon(sector_outline(c), f, "cell");
        os << "</g>\n";
    }
    if (!a.pieces.empty()) {
        os << "<g id=\"cover\">\n";
        for (const auto& c : a.pieces) os << polygon(sector_outline(c), f, "piece");
        os << "</g>\n";
    }
    if (!a.regions.empty()) {
        os << "<g id=\"regions\">\n";
        const double spacing = std::max(w, h) / 400;
        for (const auto& r : a.regions) {
            os << "<path class=\"region\" d=\"";
            for (const Point& p : sample_region_boundary(*r, spacing)) {
                if (!a.view.contains(from_double(p.x), from_double(p.y))) continue;
                os << "M" << fmt(f.sx(p.x)) << " " << fmt(f.sy(p.y)) << "h0 ";
            }
            os << "\"/>\n";
        }
        os << "</g>\n";
    }
    if (!a.traces.empty()) {
        os << "<g id=\"traces\">\n";
        for (const auto& tp : a.traces) {
            auto inv = tp.cone.frame.inverse_double();
            auto m = tp.cone.frame.matrix_double();
            const double au = m[0] * tp.cone.apex.x + m[1] * tp.cone.apex.y, av = m[2] * tp.cone.apex.x + m[3] * tp.cone.apex.y;
            for (const auto& t : tp.traces) {
                os << "<polyline class=\"trace\" points=\"";
                for (const auto& [eta, lambda] : t.samples) {
                    double u = au + lambda * eta, v = av + lambda;
                    Point p{inv[0] * u + inv[1] * v, inv[2] * u + inv[3] * v};
                    os << fmt(f.sx(p.x)) << "," << fmt(f.sy(p.y)) << " ";
                }
                os << "\"/>\n";
            }
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void plot_svg(const PlotArtifacts& a, const std::string& path) {
    std::string svg = render_svg(a);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("plot_svg: cannot open " + path);
    out << svg;
    if (!out) throw std::runtime_error("plot_svg: write failed for " + path);
}

nlohmann::json to_json(const VerificationReport& r, bool with_timing) {
    nlohmann::json j{{"check", r.check},
                     {"pass", r.pass},
                     {"tested", r.tested},
                     {"excluded", r.excluded},
                     {"mismatch_count", r.mismatch_count},
                     {"agreement", r.agreement()},
                     {"delta", r.delta}};
    auto& w = j["mismatches"] = nlohmann::json::array();
    for (const auto& m : r.mismatches) w.push_back({{"point", {m.p.x, m.p.y}}, {"what", m.what}});
    if (with_timing) j["seconds"] = r.seconds;
    return j;
}

std::vector<std::pair<std::string, std::string>> corpus() {
    return {
        {"disk", "x^2 + y^2 < 1"},
        {"square", "0 < x and x < 1 and 0 < y and y < 1"},
        {"cusp", "y^2 < x^3 and x < 1"},
        {"half-disk", "x^2 + y^2 < 1 and y > 0"},
        {"two-disks", "(x + 1/2)^2 + y^2 < 1 or (x - 1/2)^2 + y^2 < 1"},
        {"annulus", "x^2 + y^2 < 1 and not x^2 + y^2 <= 1/4"},
    };
}

}  // namespace subalip
