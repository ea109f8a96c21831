// deckmap: command-line front end.

#include "deckmap/deck.hpp"
#include "deckmap/detect.hpp"
#include "deckmap/dynren.hpp"
#include "deckmap/error.hpp"
#include "deckmap/parse.hpp"
#include "deckmap/ratmap.hpp"
#include "deckmap/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace deckmap;

namespace {

struct Globals {
    std::vector<std::string> params;
    int precision = 53;
    std::string json_path;
    std::uint64_t seed = 1;
};

ParamBindings bindings(const Globals& g) {
    ParamBindings out;
    for (const auto& p : g.params) {
        out.insert(parse_binding(p));
    }
    return out;
}

Json input_echo(const Globals& g, const std::vector<std::string>& exprs) {
    Json in;
    in["expressions"] = exprs;
    Json params = Json::object();
    for (const auto& [name, value] : bindings(g)) {
        params[name] = value.to_string();
    }
    in["params"] = params;
    in["precision_bits"] = g.precision;
    return in;
}

DeckOptions deck_options(const Globals& g, std::size_t workers) {
    if (g.precision < 1 || g.precision > 113) {
        throw Error(ErrorKind::InvalidArgument, "precision must be between 1 and 113 bits");
    }
    DeckOptions o;
    o.precision_bits = g.precision;
    o.workers = workers;
    return o;
}

std::string point_text(const PointValue& p) {
    return p.to_string();
}

std::string points_text(const std::vector<PointValue>& pts) {
    std::string out = "{";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out += (i ? ", " : "") + point_text(pts[i]);
    }
    return out + "}";
}

void emit(const Globals& g, const Json& report) {
    if (g.json_path.empty()) {
        return;
    }
    if (g.json_path == "-") {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream out(g.json_path);
    if (!out) {
        throw Error(ErrorKind::InvalidArgument, "cannot write " + g.json_path);
    }
    out << report.dump(2) << "\n";
}

// Human-readable text goes to stdout unless the JSON report does.
std::ostream& text(const Globals& g) {
    static std::ostringstream sink;
    if (g.json_path == "-") {
        sink.str("");
        return sink;
    }
    return std::cout;
}

int run_analyze(const Globals& g, const std::string& expr) {
    RationalMap f = parse_map(expr, bindings(g));
    CriticalData cd = critical_data(f, Mode::Exact);
    PostcriticalOrbit po = postcritical_orbit(f);
    Json rep = report_envelope("analyze");
    rep["input"] = input_echo(g, {expr});
    rep["map"] = to_json(f);
    rep["critical_data"] = to_json(cd);
    rep["postcritical_orbit"] = to_json(po);

    auto& os = text(g);
    os << "map            " << f.to_string() << "  (degree " << f.degree() << ")\n";
    os << "critical pts   " << points_text(cd.point_set()) << "\n";
    os << "critical vals  " << points_text(cd.value_set()) << "\n";
    os << "bicritical     " << (cd.bicritical ? "yes" : "no") << "\n";
    os << "power map      " << (cd.power_map ? "yes" : "no") << "\n";
    if (cd.critically_coalescing) {
        os << "coalescing     " << (*cd.critically_coalescing ? "yes" : "no") << "\n";
    }
    os << "PCF            " << (po.postcritically_finite ? "yes" : "no") << "\n";
    for (std::size_t i = 0; i < po.orbits.size(); ++i) {
        const auto& o = po.orbits[i];
        os << "  orbit " << i << "      " << points_text(o.orbit);
        if (o.period) {
            os << "  preperiod " << *o.preperiod << " period " << *o.period;
        }
        if (o.height_cap_hit) {
            os << "  (height cap)";
        }
        os << "\n";
    }
    if (po.alpha) {
        os << "alpha, m       " << point_text(*po.alpha) << ", " << *po.m << "\n";
    }
    emit(g, rep);
    return 0;
}

int run_deck(const Globals& g, const std::string& expr, std::size_t k, std::size_t workers) {
    RationalMap f = parse_map(expr, bindings(g));
    DeckResult dr = deck_group(f, k, deck_options(g, workers));
    Json rep = report_envelope("deck");
    rep["input"] = input_echo(g, {expr});
    rep["input"]["k"] = k;
    rep["map"] = to_json(f);
    rep["deck"] = to_json(dr);

    auto& os = text(g);
    os << "Deck(f^" << k << ") = " << dr.group.iso.to_string() << "  order " << dr.group.size()
       << (dr.iso_type_confirmed ? "" : "  (unconfirmed)") << (dr.restricted_to_certified ? "  (certified subgroup)" : "")
       << "\n";
    for (const auto& e : dr.group.elements) {
        os << "  " << e.to_string() << "  order " << e.order << (e.certified ? "  certified" : "  numeric") << "\n";
    }
    if (dr.special_pairs) {
        for (const auto& sp : *dr.special_pairs) {
            os << "  special pair " << points_text({sp.points[0], sp.points[1]}) << "\n";
        }
    }
    emit(g, rep);
    return 0;
}

int run_detect(const Globals& g, const std::string& expr, std::size_t k, std::size_t d, bool iterate_first,
               std::size_t workers) {
    RationalMap F = parse_map(expr, bindings(g));
    if (iterate_first) {
        d = F.degree();
        F = ratmap_iterate(F, k);
    }
    DeckOptions opts = deck_options(g, workers);
    DetectionReport r = d == 2 ? detect_quadratic(F, k, opts) : detect_higher_degree(F, d, k, opts);
    Json rep = report_envelope("detect");
    rep["input"] = input_echo(g, {expr});
    rep["input"]["k"] = k;
    rep["input"]["degree"] = d;
    rep["input"]["iterate"] = iterate_first;
    rep["map"] = to_json(F);
    rep["detection"] = to_json(r);

    auto& os = text(g);
    os << "case           " << to_string(r.case_label) << "\n";
    os << "deck group     " << r.evidence.deck_iso.to_string() << "\n";
    os << "C_f            " << points_text({r.critical_points[0], r.critical_points[1]}) << "\n";
    os << "V_f            " << points_text({r.critical_values[0], r.critical_values[1]}) << "\n";
    if (r.evidence.alpha) {
        os << "alpha          " << point_text(*r.evidence.alpha) << "\n";
    }
    if (r.evidence.cross_ratio) {
        os << "cross ratio    " << point_text(r.evidence.cross_ratio->value) << "\n";
    }
    emit(g, rep);
    return 0;
}

int run_shared(const Globals& g, const std::string& e1, const std::string& e2, std::size_t max_k) {
    auto params = bindings(g);
    RationalMap f = parse_map(e1, params);
    RationalMap h = parse_map(e2, params);
    SharedIterateReport r = shared_iterate_analysis(f, h, max_k);
    Json rep = report_envelope("shared");
    rep["input"] = input_echo(g, {e1, e2});
    rep["input"]["max_k"] = max_k;
    rep["f"] = to_json(f);
    rep["g"] = to_json(h);
    rep["shared"] = to_json(r);

    auto& os = text(g);
    os << "minimal k      " << (r.minimal_k ? std::to_string(*r.minimal_k) : "none <= " + std::to_string(max_k)) << "\n";
    os << "C, V agree     " << (r.cv_cp_agree ? "yes" : "no") << "\n";
    os << "f^2 = g^2      " << (r.second_iterate_equal ? "yes" : "no") << "\n";
    if (r.involution_mu) {
        os << "mu             " << r.involution_mu->to_string() << (r.mu_is_involution ? "  involution" : "") << "\n";
    }
    os << "symmetry locus " << (r.symmetry_locus_member ? "yes" : "no") << "\n";
    if (r.agreement_violation) {
        os << "ALARM: shared iterate with different critical data\n";
    }
    emit(g, rep);
    return 0;
}

struct RenderArgs {
    std::string target;
    std::string expr;
    std::size_t width = 256;
    std::size_t height = 256;
    std::size_t max_iter = 200;
    double eps = 1e-6;
    std::size_t max_period = 16;
    std::string palette = "classic";
    bool overlay = false;
    std::vector<double> center;
    double half_width = 0.0;
    std::string out;
    std::size_t workers = 0;
};

int run_render(const Globals& g, const RenderArgs& a) {
    RenderSpec spec;
    spec.target = render_target_from_string(a.target);
    if (!a.expr.empty()) {
        spec.map = parse_map(a.expr, bindings(g));
    }
    spec.width = a.width;
    spec.height = a.height;
    spec.max_iter = a.max_iter;
    spec.cycle_eps = a.eps;
    spec.max_period = a.max_period;
    spec.palette = palette_from_string(a.palette);
    spec.overlay_critical_orbits = a.overlay;
    spec.workers = a.workers;
    if (!a.center.empty() || a.half_width > 0.0) {
        Window w = default_window(spec.target);
        if (a.center.size() == 2) {
            w.center_re = a.center[0];
            w.center_im = a.center[1];
        } else if (!a.center.empty()) {
            throw Error(ErrorKind::InvalidArgument, "--center takes two numbers: re,im");
        }
        if (a.half_width > 0.0) {
            w.half_width = a.half_width;
        }
        spec.window = w;
    }
    RenderResult r = render(spec);
    const bool png = a.out.size() > 4 && a.out.substr(a.out.size() - 4) == ".png";
    {
        std::ofstream img(a.out, std::ios::binary);
        if (!img) {
            throw Error(ErrorKind::InvalidArgument, "cannot write " + a.out);
        }
        img << (png ? to_png(r) : to_ppm(r));
    }
    Json meta = render_metadata(spec, r);
    {
        std::ofstream side(a.out + ".json");
        side << meta.dump(2) << "\n";
    }
    Json rep = report_envelope("render");
    rep["input"] = input_echo(g, a.expr.empty() ? std::vector<std::string>{} : std::vector<std::string>{a.expr});
    rep["image"] = a.out;
    rep["render"] = meta;

    auto& os = text(g);
    os << "wrote " << a.out << " (" << r.width << "x" << r.height << ") and " << a.out << ".json in " << r.seconds << " s\n";
    for (const auto& c : r.atlas.cycles) {
        os << "  attracting cycle period " << c.period << " |multiplier| " << c.multiplier << "\n";
    }
    emit(g, rep);
    return 0;
}

int run_sample(const Globals& g, std::size_t d, bool coalescing) {
    std::mt19937_64 rng(g.seed);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 5);
    auto coeff = [&] {
        int n = num(rng);
        return GaussianRational(Rational(n == 0 ? 1 : n, den(rng)));
    };
    RationalMap f = RationalMap::identity();
    if (coalescing) {
        GaussianRational a = coeff();
        while (a == GaussianRational(1) || a == GaussianRational(-1)) {
            a = coeff();
        }
        f = RationalMap(ComplexPoly({-a, 0, 1}), ComplexPoly({a, 0, 1}));
    } else {
        // M1 o z^d o M2 with random integer-ish Mobius maps.
        auto mob = [&] {
            for (;;) {
                MobiusTransform m(coeff(), coeff(), coeff(), coeff());
                if (!m.det().is_zero()) {
                    return m;
                }
            }
        };
        RationalMap power(ComplexPoly::monomial(1, d), ComplexPoly::constant(1));
        f = ratmap_compose(mob().to_map(), ratmap_compose(power, mob().to_map()));
    }
    Json rep = report_envelope("sample");
    rep["input"] = {{"seed", g.seed}, {"degree", d}, {"coalescing", coalescing}};
    rep["map"] = to_json(f);
    text(g) << f.to_string() << "\n";
    emit(g, rep);
    return 0;
}

// "-(z^3-1)/(z^3+1)" would otherwise be taken for a short option; the
// expression parser skips the leading space.
std::vector<std::string> protect_negative_expressions(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a.size() > 1 && a[0] == '-' && a[1] != '-' && a.find('z') != std::string::npos) {
            a.insert(a.begin(), ' ');
        }
        args.push_back(a);
    }
    std::reverse(args.begin(), args.end());
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deckmap: deck groups, critical-point detection and dynamics of bicritical rational maps"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--param", g.params, "Bind a parameter, name=value (repeatable)");
    app.add_option("--precision", g.precision, "Floating precision in bits (53 or up to 113)")->capture_default_str();
    app.add_option("--json", g.json_path, "Write the JSON report to PATH ('-' for stdout)");
    app.add_option("--seed", g.seed, "Seed for the sample command")->capture_default_str();

    std::string e1, e2;
    std::size_t k = 1, d = 2, max_k = 4, workers = 0;
    bool coalescing = false, iterate_first = false;

    auto* analyze = app.add_subcommand("analyze", "Critical data, coalescing flag and postcritical orbits");
    analyze->add_option("expr", e1, "Map expression")->required();

    auto* deck = app.add_subcommand("deck", "Deck group of the k-th iterate");
    deck->add_option("expr", e1, "Map expression")->required();
    deck->add_option("--k", k, "Iterate")->capture_default_str();
    deck->add_option("--workers", workers, "Worker threads (0 = automatic)");

    auto* detect = app.add_subcommand("detect", "Recover C_f and V_f from F = f^k");
    detect->add_option("expr", e1, "Expression for F")->required();
    detect->add_option("--k", k, "Iterate count")->required();
    detect->add_option("--deg", d, "Degree of f")->capture_default_str();
    detect->add_flag("--iterate", iterate_first, "expr is f itself; form F = f^k first (--deg is then ignored)");
    detect->add_option("--workers", workers, "Worker threads (0 = automatic)");

    auto* shared = app.add_subcommand("shared", "Search for a shared iterate of two maps");
    shared->add_option("f", e1, "First map")->required();
    shared->add_option("g", e2, "Second map")->required();
    shared->add_option("--max-k", max_k, "Largest iterate compared")->capture_default_str();

    RenderArgs ra;
    auto* rend = app.add_subcommand("render", "Render a Julia set or parameter plane");
    rend->add_option("target", ra.target, "julia, param_fa or param_sigma2")->required();
    rend->add_option("expr", ra.expr, "Map expression (julia)");
    rend->add_option("--width", ra.width)->capture_default_str();
    rend->add_option("--height", ra.height)->capture_default_str();
    rend->add_option("--max-iter", ra.max_iter)->capture_default_str();
    rend->add_option("--eps", ra.eps, "Convergence tolerance (chordal)")->capture_default_str();
    rend->add_option("--max-period", ra.max_period)->capture_default_str();
    rend->add_option("--palette", ra.palette, "classic, grayscale or pastel")->capture_default_str();
    rend->add_flag("--overlay", ra.overlay, "Mark attracting cycle points");
    rend->add_option("--center", ra.center, "Window center re,im")->delimiter(',');
    rend->add_option("--half-width", ra.half_width, "Window half-width");
    rend->add_option("--out", ra.out, "Image path (.ppm, or .png when built with libpng)")->required();
    rend->add_option("--workers", ra.workers, "Worker threads (0 = automatic)");

    auto* sample = app.add_subcommand("sample", "Print a random bicritical map");
    sample->add_option("--deg", d, "Degree")->capture_default_str();
    sample->add_flag("--coalescing", coalescing, "Draw from the critically coalescing family instead");

    try {
        app.parse(protect_negative_expressions(argc, argv));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (analyze->parsed()) {
            return run_analyze(g, e1);
        }
        if (deck->parsed()) {
            return run_deck(g, e1, k, workers);
        }
        if (detect->parsed()) {
            return run_detect(g, e1, k, d, iterate_first, workers);
        }
        if (shared->parsed()) {
            return run_shared(g, e1, e2, max_k);
        }
        if (rend->parsed()) {
            return run_render(g, ra);
        }
        if (sample->parsed()) {
            return run_sample(g, d, coalescing);
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        try {
            emit(g, error_report(e.kind(), e.what()));
        } catch (const Error&) {
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error (internal-error): " << e.what() << "\n";
        try {
            emit(g, error_report(ErrorKind::InternalError, e.what()));
        } catch (const Error&) {
        }
        return 1;
    }
    return 1;
}
