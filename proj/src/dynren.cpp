#include "deckmap/dynren.hpp"

#include "deckmap/error.hpp"
#include "deckmap/parallel.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#ifdef DECKMAP_HAVE_PNG
#include <png.h>
#endif

namespace deckmap {

std::vector<std::size_t> CycleAtlas::periods() const {
    std::vector<std::size_t> out;
    for (const auto& c : cycles) {
        out.push_back(c.period);
    }
    return out;
}

namespace {

using Pt = NumPoint<double>;
using Cx = Complex<double>;

Pt from_homogeneous(const Cx& num, const Cx& den) {
    if (den.abs() == 0.0) {
        return Pt::infinity();
    }
    Cx z = num / den;
    if (!std::isfinite(z.re) || !std::isfinite(z.im)) {
        return Pt::infinity();
    }
    return {z, false};
}

// Homogeneous coordinates [x : y] with max(|x|, |y|) = 1.
std::array<Cx, 2> homogeneous(const Pt& p) {
    if (p.inf) {
        return {Cx(1.0), Cx()};
    }
    if (p.z.abs() <= 1.0) {
        return {p.z, Cx(1.0)};
    }
    return {Cx(1.0), Cx(1.0) / p.z};
}

// Chart coordinate: z near the unit disk, 1/z outside it.
struct Chart {
    bool inverted = false;

    static Chart at(const Pt& p) { return {p.inf || p.z.abs() > 1.0}; }
    Cx coord(const Pt& p) const {
        if (!inverted) {
            return p.z;
        }
        return p.inf ? Cx() : Cx(1.0) / p.z;
    }
    Pt point(const Cx& u) const {
        if (!inverted) {
            return {u, false};
        }
        if (u.abs() == 0.0) {
            return Pt::infinity();
        }
        return {Cx(1.0) / u, false};
    }
};

std::size_t settle_period(const SphereMap& f, Pt& z, std::size_t max_period, double eps) {
    Pt q = z;
    for (std::size_t n = 1; n <= max_period; ++n) {
        q = f(q);
        if (chordal(q, z) < eps) {
            return n;
        }
    }
    return 0;
}

} // namespace

double cycle_multiplier(const SphereMap& f, const std::vector<NumPoint<double>>& cycle) {
    Cx lambda(1.0);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const Pt& p = cycle[i];
        const Pt& next = cycle[(i + 1) % cycle.size()];
        Chart in = Chart::at(p);
        Chart out = Chart::at(next);
        Cx u = in.coord(p);
        const double h = 1e-6;
        Cx plus = out.coord(f(in.point(u + Cx(h))));
        Cx minus = out.coord(f(in.point(u - Cx(h))));
        lambda *= (plus - minus) / Cx(2.0 * h);
    }
    return lambda.abs();
}

CycleAtlas find_attracting_cycles(const SphereMap& f, const std::vector<NumPoint<double>>& seeds,
                                  const CycleOptions& opts) {
    CycleAtlas atlas;
    const double dup_tol = std::max(1e-6, 100.0 * opts.cycle_eps);
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        Pt z = seeds[s];
        for (std::size_t i = 0; i < opts.max_iter; ++i) {
            z = f(z);
        }
        std::size_t period = settle_period(f, z, opts.max_period, opts.cycle_eps);
        if (period == 0) {
            continue;
        }
        bool known = false;
        for (const auto& c : atlas.cycles) {
            for (const auto& q : c.points) {
                known = known || chordal(q, z) < dup_tol;
            }
        }
        if (known) {
            continue;
        }
        Cycle cyc;
        cyc.period = period;
        cyc.seed = s;
        Pt q = z;
        for (std::size_t i = 0; i < period; ++i) {
            cyc.points.push_back(q);
            q = f(q);
        }
        cyc.multiplier = cycle_multiplier(f, cyc.points);
        if (cyc.multiplier < 1.0) {
            atlas.cycles.push_back(std::move(cyc));
        }
    }
    return atlas;
}

CycleAtlas find_attracting_cycles(const RationalMap& f, const CycleOptions& opts) {
    NumericMap<double> nf(f);
    std::vector<Pt> seeds;
    for (const auto& c : critical_data(f, Mode::Numeric).points) {
        seeds.push_back(c.point.approx);
    }
    return find_attracting_cycles([&](const Pt& z) { return nf(z); }, seeds, opts);
}

SphereMap family_fa(Complex<double> a) {
    return [a](const Pt& p) {
        auto [x, y] = homogeneous(p);
        Cx x2 = x * x;
        Cx ay2 = a * y * y;
        return from_homogeneous(x2 - ay2, x2 + ay2);
    };
}

SphereMap family_sigma2(Complex<double> c) {
    return [c](const Pt& p) {
        auto [x, y] = homogeneous(p);
        return from_homogeneous(c * (x * x + y * y), x * y);
    };
}

std::string to_string(RenderTarget t) {
    switch (t) {
    case RenderTarget::Julia:
        return "julia";
    case RenderTarget::ParamFa:
        return "param_fa";
    case RenderTarget::ParamSigma2:
        return "param_sigma2";
    }
    return "unknown";
}

RenderTarget render_target_from_string(const std::string& name) {
    for (auto t : {RenderTarget::Julia, RenderTarget::ParamFa, RenderTarget::ParamSigma2}) {
        if (to_string(t) == name) {
            return t;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown render target '" + name + "'");
}

Window default_window(RenderTarget t) {
    if (t == RenderTarget::ParamFa) {
        return {0.0, 0.0, 4.0};
    }
    return {0.0, 0.0, 2.0};
}

std::string to_string(Palette p) {
    switch (p) {
    case Palette::Classic:
        return "classic";
    case Palette::Grayscale:
        return "grayscale";
    case Palette::Pastel:
        return "pastel";
    }
    return "unknown";
}

Palette palette_from_string(const std::string& name) {
    for (auto p : {Palette::Classic, Palette::Grayscale, Palette::Pastel}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown palette '" + name + "'");
}

void RenderSpec::validate() const {
    if (width == 0 || height == 0) {
        throw Error(ErrorKind::InvalidArgument, "image size must be at least 1x1");
    }
    if (!(cycle_eps > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "cycle_eps must be positive");
    }
    if (max_period == 0) {
        throw Error(ErrorKind::InvalidArgument, "max_period must be at least 1");
    }
    if (!(effective_window().half_width > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "window half-width must be positive");
    }
    if (target == RenderTarget::Julia && !map) {
        throw Error(ErrorKind::InvalidArgument, "julia rendering needs a map");
    }
}

Complex<double> pixel_point(const RenderSpec& spec, std::size_t x, std::size_t y) {
    Window w = spec.effective_window();
    const double hw = w.half_width;
    const double hh = hw * static_cast<double>(spec.height) / static_cast<double>(spec.width);
    const double re = w.center_re - hw + (static_cast<double>(x) + 0.5) * 2.0 * hw / static_cast<double>(spec.width);
    const double im = w.center_im + hh - (static_cast<double>(y) + 0.5) * 2.0 * hh / static_cast<double>(spec.height);
    return {re, im};
}

namespace {

using Rgb = std::array<std::uint8_t, 3>;

constexpr std::array<Rgb, 12> kHues{{
    {230, 57, 70},  {69, 123, 157}, {244, 162, 97}, {42, 157, 143},  {233, 196, 106}, {131, 56, 236},
    {58, 134, 255}, {255, 0, 110},  {6, 214, 160},  {255, 190, 11}, {141, 153, 174}, {251, 86, 7},
}};

Rgb color(Palette palette, std::int32_t cls, std::uint32_t steps, std::size_t max_iter) {
    if (cls < 0) {
        return {0, 0, 0};
    }
    const double t = std::log1p(static_cast<double>(steps)) / std::log1p(static_cast<double>(std::max<std::size_t>(max_iter, 1)));
    const double shade = 1.0 - 0.65 * std::clamp(t, 0.0, 1.0);
    Rgb base = kHues[static_cast<std::size_t>(cls) % kHues.size()];
    Rgb out{};
    for (int c = 0; c < 3; ++c) {
        double v = base[c];
        if (palette == Palette::Grayscale) {
            v = 80.0 + 175.0 * static_cast<double>((cls * 5) % 11) / 10.0;
        } else if (palette == Palette::Pastel) {
            v = 0.5 * v + 0.5 * 255.0;
        }
        out[c] = static_cast<std::uint8_t>(std::lround(std::clamp(v * shade, 0.0, 255.0)));
    }
    return out;
}

void classify_julia(const RenderSpec& spec, const SphereMap& f, const CycleAtlas& atlas, RenderResult& r) {
    parallel_for(spec.height, worker_count(spec.workers), [&](std::size_t y) {
        for (std::size_t x = 0; x < spec.width; ++x) {
            Pt z{pixel_point(spec, x, y), false};
            std::int32_t cls = -1;
            std::uint32_t n = 0;
            for (; n <= spec.max_iter && cls < 0; ++n) {
                for (std::size_t c = 0; c < atlas.cycles.size() && cls < 0; ++c) {
                    for (const auto& q : atlas.cycles[c].points) {
                        if (chordal(z, q) < spec.cycle_eps) {
                            cls = static_cast<std::int32_t>(c);
                            break;
                        }
                    }
                }
                if (cls < 0) {
                    z = f(z);
                }
            }
            const std::size_t i = y * spec.width + x;
            r.classes[i] = cls;
            r.steps[i] = cls < 0 ? static_cast<std::uint32_t>(spec.max_iter) : n - 1;
        }
    });
}

void classify_parameters(const RenderSpec& spec, RenderResult& r) {
    const bool fa = spec.target == RenderTarget::ParamFa;
    const Pt seed{Cx(fa ? -1.0 : 1.0), false};
    parallel_for(spec.height, worker_count(spec.workers), [&](std::size_t y) {
        for (std::size_t x = 0; x < spec.width; ++x) {
            Cx p = pixel_point(spec, x, y);
            SphereMap f = fa ? family_fa(p) : family_sigma2(p);
            Pt z = seed;
            for (std::size_t i = 0; i < spec.max_iter; ++i) {
                z = f(z);
            }
            std::size_t period = settle_period(f, z, spec.max_period, spec.cycle_eps);
            const std::size_t i = y * spec.width + x;
            r.classes[i] = period == 0 ? -1 : static_cast<std::int32_t>(period);
            r.steps[i] = 0;
        }
    });
}

void draw_overlay(const RenderSpec& spec, RenderResult& r) {
    Window w = spec.effective_window();
    const double hw = w.half_width;
    const double hh = hw * static_cast<double>(spec.height) / static_cast<double>(spec.width);
    for (std::size_t c = 0; c < r.atlas.cycles.size(); ++c) {
        for (const auto& q : r.atlas.cycles[c].points) {
            if (q.inf) {
                continue;
            }
            double fx = (q.z.re - (w.center_re - hw)) / (2.0 * hw) * static_cast<double>(spec.width);
            double fy = ((w.center_im + hh) - q.z.im) / (2.0 * hh) * static_cast<double>(spec.height);
            if (fx < 0 || fy < 0 || fx >= static_cast<double>(spec.width) || fy >= static_cast<double>(spec.height)) {
                continue;
            }
            OverlayMark m{static_cast<std::size_t>(fx), static_cast<std::size_t>(fy), c};
            r.overlay.push_back(m);
            for (int d = -2; d <= 2; ++d) {
                for (auto [dx, dy] : {std::pair{d, 0}, std::pair{0, d}}) {
                    long px = static_cast<long>(m.x) + dx;
                    long py = static_cast<long>(m.y) + dy;
                    if (px < 0 || py < 0 || px >= static_cast<long>(spec.width) || py >= static_cast<long>(spec.height)) {
                        continue;
                    }
                    std::size_t i = (static_cast<std::size_t>(py) * spec.width + static_cast<std::size_t>(px)) * 3;
                    r.rgb[i] = r.rgb[i + 1] = r.rgb[i + 2] = 255;
                }
            }
        }
    }
}

} // namespace

RenderResult render(const RenderSpec& spec) {
    spec.validate();
    auto t0 = std::chrono::steady_clock::now();
    RenderResult r;
    r.width = spec.width;
    r.height = spec.height;
    r.classes.assign(spec.width * spec.height, -1);
    r.steps.assign(spec.width * spec.height, 0);
    if (spec.target == RenderTarget::Julia) {
        NumericMap<double> nf(*spec.map);
        SphereMap f = [&nf](const Pt& z) { return nf(z); };
        r.atlas = find_attracting_cycles(*spec.map, CycleOptions{1000, spec.max_period, 1e-9});
        classify_julia(spec, f, r.atlas, r);
    } else {
        classify_parameters(spec, r);
    }
    r.rgb.resize(spec.width * spec.height * 3);
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
        Rgb c = color(spec.palette, r.classes[i], r.steps[i], spec.max_iter);
        std::copy(c.begin(), c.end(), r.rgb.begin() + static_cast<std::ptrdiff_t>(3 * i));
    }
    if (spec.overlay_critical_orbits && spec.target == RenderTarget::Julia) {
        draw_overlay(spec, r);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string to_ppm(const RenderResult& r) {
    std::string out = "P6\n" + std::to_string(r.width) + " " + std::to_string(r.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(r.rgb.data()), r.rgb.size());
    return out;
}

#ifdef DECKMAP_HAVE_PNG

bool png_supported() {
    return true;
}

std::string to_png(const RenderResult& r) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(ErrorKind::InternalError, "libpng initialisation failed");
    }
    std::string out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::InternalError, "libpng write failed");
    }
    png_set_write_fn(
        png, &out,
        [](png_structp p, png_bytep data, png_size_t n) {
            static_cast<std::string*>(png_get_io_ptr(p))->append(reinterpret_cast<const char*>(data), n);
        },
        nullptr);
    png_set_IHDR(png, info, static_cast<png_uint_32>(r.width), static_cast<png_uint_32>(r.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t y = 0; y < r.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(r.rgb.data() + y * r.width * 3));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

#else

bool png_supported() {
    return false;
}

std::string to_png(const RenderResult&) {
    throw Error(ErrorKind::InvalidArgument, "built without PNG support; write a .ppm file instead");
}

#endif

} // namespace deckmap
