#pragma once

// Attracting cycles from critical seeds, and deterministic images of Julia
// sets and of the f_a and f_c = c(z + 1/z) parameter planes.

#include "deckmap/ratmap.hpp"
#include "deckmap/sphere.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace deckmap {

using SphereMap = std::function<NumPoint<double>(const NumPoint<double>&)>;

struct CycleOptions {
    std::size_t max_iter = 1000;
    std::size_t max_period = 64;
    double cycle_eps = 1e-9;
};

struct Cycle {
    /// In orbit order, starting from the point the seed settled on.
    std::vector<NumPoint<double>> points;
    std::size_t period = 0;
    double multiplier = 0.0;
    /// Index of the first seed attracted to this cycle.
    std::size_t seed = 0;
};

struct CycleAtlas {
    std::vector<Cycle> cycles;

    std::vector<std::size_t> periods() const;
};

/// Seeds that do not settle on an attracting cycle are skipped; an empty atlas is valid.
CycleAtlas find_attracting_cycles(const SphereMap& f, const std::vector<NumPoint<double>>& seeds,
                                  const CycleOptions& opts = {});

/// Seeds are the critical points of f.
CycleAtlas find_attracting_cycles(const RationalMap& f, const CycleOptions& opts = {});

/// Multiplier of a cycle by centered differences in the z or 1/z chart.
double cycle_multiplier(const SphereMap& f, const std::vector<NumPoint<double>>& cycle);

enum class RenderTarget { Julia, ParamFa, ParamSigma2 };

/// "julia", "param_fa", "param_sigma2"
std::string to_string(RenderTarget t);
RenderTarget render_target_from_string(const std::string& name);

struct Window {
    double center_re = 0.0;
    double center_im = 0.0;
    /// Half of the horizontal extent; the vertical extent follows the aspect ratio.
    double half_width = 2.0;
};

/// Default windows: param_fa center 0 half-width 4, param_sigma2 and julia center 0 half-width 2.
Window default_window(RenderTarget t);

enum class Palette { Classic, Grayscale, Pastel };
std::string to_string(Palette p);
Palette palette_from_string(const std::string& name);

struct RenderSpec {
    RenderTarget target = RenderTarget::ParamFa;
    /// Required for julia.
    std::optional<RationalMap> map;
    std::optional<Window> window;
    std::size_t width = 256;
    std::size_t height = 256;
    std::size_t max_iter = 200;
    double cycle_eps = 1e-6;
    std::size_t max_period = 16;
    Palette palette = Palette::Classic;
    bool overlay_critical_orbits = false;
    /// 0 = DECKMAP_THREADS or the hardware count.
    std::size_t workers = 0;

    Window effective_window() const { return window.value_or(default_window(target)); }
    /// Throws InvalidArgument on a malformed spec.
    void validate() const;
};

struct OverlayMark {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t cycle = 0;
};

struct RenderResult {
    std::size_t width = 0;
    std::size_t height = 0;
    /// Row-major, top row first, 3 bytes per pixel.
    std::vector<std::uint8_t> rgb;
    /// Julia: atlas cycle index; parameter planes: detected period. -1 = unresolved.
    std::vector<std::int32_t> classes;
    /// Iterations until the class was decided.
    std::vector<std::uint32_t> steps;
    /// Julia only.
    CycleAtlas atlas;
    std::vector<OverlayMark> overlay;
    double seconds = 0.0;
};

RenderResult render(const RenderSpec& spec);

/// Binary PPM (P6, 8-bit RGB).
std::string to_ppm(const RenderResult& r);

/// True when the library was built with libpng.
bool png_supported();
/// 8-bit RGB PNG; throws InvalidArgument when PNG support is not built in.
std::string to_png(const RenderResult& r);

/// Pixel center of (x, y) in the spec's window.
Complex<double> pixel_point(const RenderSpec& spec, std::size_t x, std::size_t y);

/// f_a(z) = (z^2 - a)/(z^2 + a) and f_c(z) = c(z + 1/z) in floating point.
SphereMap family_fa(Complex<double> a);
SphereMap family_sigma2(Complex<double> c);

} // namespace deckmap
