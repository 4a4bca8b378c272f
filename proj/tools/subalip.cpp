// subalip: command-line front end. Exit codes: 0 pass, 1 verification
// failure, 2 input error.
#include "subalip/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace subalip;
using nlohmann::json;

namespace {

constexpr int kPass = 0, kFail = 1, kInputError = 2;

// Anything the user handed us that we cannot use.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// The formula file may carry '#' comment lines.
std::string formula_text(const std::string& path) {
    std::istringstream in(slurp(path));
    std::string line, text;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        text += line + "\n";
    }
    return text;
}

Formula read_formula(const std::string& path) {
    std::string text = formula_text(path);
    try {
        Formula U = parse_formula(text);
        if (U.dimension() != 2) throw InputError(path + ": only planar sets are supported");
        return U;
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    } catch (const DimensionError& e) {
        throw InputError(path + ": " + e.what());
    }
}

json read_json(const std::string& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

Rational rational_arg(const std::string& text, const std::string& what) {
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw InputError("bad " + what + ": " + text);
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, sep)) out.push_back(part);
    return out;
}

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw InputError("cannot write " + out);
    f << j.dump(2) << "\n";
}

const Box kBox{-2, 2, -2, 2};

int cmd_decompose(const std::string& file, double c1, const std::string& out) {
    Formula U = read_formula(file);
    if (c1 < 1.0) throw InputError("--c1 must be at least 1");
    SignedCombination s = decompose_indicator(U, c1, kBox);
    int certified = 0;
    for (const auto& t : s.terms) certified += certify_ball(*t.region).certified;
    json j{{"formula", U.to_string()},
           {"C1", c1},
           {"regions", s.terms.size()},
           {"certified", certified},
           {"extension_error", s.extension_error()},
           {"terms", to_json(s)}};
    emit(j, out);
    return certified == static_cast<int>(s.terms.size()) ? kPass : kFail;
}

int cmd_cover(const std::string& file, bool lregular, double c1, int grid, std::uint64_t seed, const std::string& svg) {
    Formula U = read_formula(file);
    CoverOptions opt;
    opt.grid = grid;
    opt.seed = seed;
    RegularCover c;
    try {
        c = lregular ? lregular_cover(U, c1, opt) : regular_cover(U, opt);
    } catch (const CoverageGapError& e) {
        json j{{"pass", false}, {"error", e.what()}, {"witness", {e.witness.x, e.witness.y}}};
        std::cout << j.dump(2) << "\n";
        return kFail;
    }
    auto report = verify_cover(U, c, RasterGrid(std::max(64, grid), opt.box));
    json j = to_json(c);
    j["verification"] = to_json(report);
    if (lregular) {
        bool slopes = true;
        for (const auto& p : c.pieces) slopes = slopes && check_lregular(p.cell, 128).pass;
        j["slopes_certified"] = slopes;
        report.pass = report.pass && slopes;
    }
    std::cout << j.dump(2) << "\n";
    if (!svg.empty()) {
        PlotArtifacts a;
        a.set = U;
        for (const auto& p : c.pieces) a.pieces.push_back(p.cell);
        plot_svg(a, svg);
    }
    return report.pass ? kPass : kFail;
}

int cmd_cyl(const std::string& file, const std::string& shear, bool swap) {
    Formula U = read_formula(file);
    CylindricalDecomposition d;
    if (shear.empty() && !swap) {
        d = decompose(U, kBox);
    } else {
        ProjectionSpec p{shear.empty() ? Rational(0) : rational_arg(shear, "shear"), swap, 0};
        ensure_finite_projection(U, {p});
        d = decompose_with(U, kBox, p);
    }
    std::cout << to_json(d).dump(2) << "\n";
    return kPass;
}

int cmd_check_proj(const std::string& file, const std::string& point, const std::string& dirs, double C, double eps) {
    Formula U = read_formula(file);
    auto xy = split(point, ',');
    if (xy.size() != 2) throw InputError("--point needs x,y");
    Point x0{rational_arg(xy[0], "point").get_d(), rational_arg(xy[1], "point").get_d()};
    std::vector<double> candidates;
    for (const auto& d : split(dirs, ',')) candidates.push_back(rational_arg(d, "direction").get_d());
    if (candidates.size() < 3) throw InputError("--dirs needs at least 3 directions");
    auto X = boundary_polynomials(U, kBox);
    json reports = json::array();
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ConeSpec cone{x0, candidates[i], eps, {}, kBox};
        auto r = check_regularity(X, cone, C);
        if (r.verdict && !first) first = i;
        json e = to_json(r);
        e["direction"] = candidates[i];
        reports.push_back(std::move(e));
    }
    json j{{"point", {x0.x, x0.y}}, {"C", C}, {"eps", eps}, {"reports", reports}};
    j["regular_direction"] = first ? json(candidates[*first]) : json(nullptr);
    std::cout << j.dump(2) << "\n";
    return first ? kPass : kFail;
}

SignedCombination load_combination(const json& j) {
    try {
        return signed_combination_from_json(j.is_object() && j.contains("terms") ? j.at("terms") : j);
    } catch (const std::exception& e) {
        throw InputError(std::string("decomposition file: ") + e.what());
    }
}

int cmd_verify(const std::string& file, const std::string& against, int grid, double delta, std::uint64_t seed) {
    Formula U = read_formula(file);
    SignedCombination s = load_combination(read_json(against));
    VerificationReport r;
    try {
        r = compare_indicators(U, s, RasterGrid(grid), delta, 1000, seed);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    json j = to_json(r);
    j["seed"] = seed;
    std::cout << j.dump(2) << "\n";
    return r.pass ? kPass : kFail;
}

int cmd_plot(const std::string& file, const std::string& overlay, const std::string& svg) {
    Formula U = read_formula(file);
    PlotArtifacts a;
    a.set = U;
    if (!overlay.empty()) {
        json j = read_json(overlay);
        if (j.is_object() && j.contains("pieces")) {
            // Covers are rebuilt from their recorded options; the piece count must agree.
            CoverOptions opt;
            opt.grid = j.value("grid", 128);
            opt.seed = j.value("seed", std::uint64_t{0});
            RegularCover c = j.value("lregular", false) ? lregular_cover(U, j.value("C1", 1.0), opt) : regular_cover(U, opt);
            if (c.pieces.size() != j.at("pieces").size()) throw InputError(overlay + ": cover does not belong to " + file);
            for (const auto& p : c.pieces) a.pieces.push_back(p.cell);
        } else {
            for (const auto& t : load_combination(j).terms) a.regions.push_back(t.region);
        }
    }
    plot_svg(a, svg);
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lipschitz-ball decompositions and regular covers of planar semialgebraic sets"};
    app.require_subcommand(1);

    std::string file, out, svg, overlay, against, shear, point, dirs = "0,1,-1";
    double c1 = 1.0, C = 32.0, eps = 1.0 / 64, delta = -1.0;
    int grid = 128, vgrid = 512;
    bool lregular = false, swap = false;
    std::uint64_t seed = 0;

    auto* dec = app.add_subcommand("decompose", "signed Lipschitz-ball combination equal to the indicator");
    dec->add_option("file", file, "formula file")->required();
    dec->add_option("--c1", c1, "slope bound of the cells (>= 1)");
    dec->add_option("--out", out, "write the JSON here instead of stdout");

    auto* cov = app.add_subcommand("cover", "regular cover with its measured constant");
    cov->add_option("file", file, "formula file")->required();
    cov->add_flag("--lregular", lregular, "cover by slope-bounded cells");
    cov->add_option("--c1", c1, "slope bound for --lregular (>= 1)");
    cov->add_option("--grid", grid, "test grid resolution");
    cov->add_option("--seed", seed, "seed for random shears");
    cov->add_option("--svg", svg, "also draw the pieces over the set");

    auto* cyl = app.add_subcommand("cyl", "cylindrical decomposition");
    cyl->add_option("file", file, "formula file")->required();
    auto* sh = cyl->add_option("--shear", shear, "shear parameter t (rational)");
    cyl->add_flag("--swap", swap, "project along x instead of y")->excludes(sh);

    auto* chk = app.add_subcommand("check-proj", "(C, eps)-regularity of candidate directions at a point");
    chk->add_option("file", file, "formula file")->required();
    chk->add_option("--point", point, "apex x,y")->required();
    chk->add_option("--dirs", dirs, "candidate directions a,b,c");
    chk->add_option("--C", C, "gradient bound");
    chk->add_option("--eps", eps, "cone aperture");

    auto* ver = app.add_subcommand("verify", "check a decomposition against the raster of the set");
    ver->add_option("file", file, "formula file")->required();
    ver->add_option("--against", against, "decomposition JSON")->required();
    ver->add_option("--grid", vgrid, "raster resolution (>= 64)");
    ver->add_option("--delta", delta, "tube width (default: the minimum)");
    ver->add_option("--seed", seed, "seed for the extra random points");

    auto* plt = app.add_subcommand("plot", "SVG of the set with an optional overlay");
    plt->add_option("file", file, "formula file")->required();
    plt->add_option("--overlay", overlay, "decomposition or cover JSON");
    plt->add_option("--svg", svg, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kInputError;
    }

    try {
        if (*dec) return cmd_decompose(file, c1, out);
        if (*cov) return cmd_cover(file, lregular, c1, grid, seed, svg);
        if (*cyl) return cmd_cyl(file, shear, swap);
        if (*chk) return cmd_check_proj(file, point, dirs, C, eps);
        if (*ver) return cmd_verify(file, against, vgrid, delta, seed);
        if (*plt) return cmd_plot(file, overlay, svg);
    } catch (const InputError& e) {
        std::cerr << "subalip: " << e.what() << "\n";
        return kInputError;
    } catch (const UnboundedSetError& e) {
        std::cerr << "subalip: " << e.what() << "\n";
        return kInputError;
    } catch (const NoFiniteProjectionError& e) {
        std::cerr << "subalip: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "subalip: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "subalip: " << e.what() << "\n";
        return kFail;
    }
    return kInputError;
}
