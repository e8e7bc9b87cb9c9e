#include "mig/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace mig {

namespace {

/// Signed antiderivative of the tapered-edge profile: integral from 0 to t
/// of a profile that is 1 for |u| <= half - s/2, falls as a raised cosine
/// over the transition of width s centered on the nominal edge, and is 0
/// beyond. Q(half + s/2) = half, so the integrated profile equals the
/// nominal width independent of the smoothing.
double profile_antiderivative(double t, double half, double s) {
    const double sign = t < 0.0 ? -1.0 : 1.0;
    const double a = std::abs(t);
    const double inner = half - s / 2.0;
    if (s == 0.0) {
        return sign * std::min(a, half);
    }
    if (a <= inner) {
        return sign * a;
    }
    if (a >= half + s / 2.0) {
        return sign * half;
    }
    const double u = a - inner;  // position inside the transition, [0, s]
    const double integral =
        inner + 0.5 * u + (s / (2.0 * std::numbers::pi)) * std::sin(std::numbers::pi * u / s);
    return sign * integral;
}

/// Cell average of the profile over [center - d/2, center + d/2].
double cell_averaged_profile(double center, double d, double half, double s) {
    return (profile_antiderivative(center + d / 2.0, half, s) -
            profile_antiderivative(center - d / 2.0, half, s)) /
           d;
}

}  // namespace

void GridSpec::validate() const {
    if (nx == 0 || ny == 0 || !(extent_x > 0.0) || !(extent_y > 0.0)) {
        raise(Errc::ConfigError, "grid must have positive sample counts and extents");
    }
}

void StripSpec::validate() const {
    if (!(width_x > 0.0) || !(length_y > 0.0)) {
        raise(Errc::ConfigError, "strip width and length must be positive");
    }
    if (edge_smoothing < 0.0 || edge_smoothing >= std::min(width_x, length_y) / 2.0) {
        std::ostringstream msg;
        msg << "edge smoothing " << edge_smoothing << " m must lie in [0, "
            << std::min(width_x, length_y) / 2.0 << ") for a " << width_x << " x " << length_y
            << " m strip";
        raise(Errc::ConfigError, msg.str());
    }
}

CurrentLayer rasterize_strip(const StripSpec& s, const GridSpec& grid, const StackGeometry& g) {
    grid.validate();
    s.validate();

    const double z = g.layer_z(s.layer);
    const double thickness = g.layer_thickness(s.layer);
    CurrentLayer layer;
    layer.layer = s.layer;
    layer.jx = ScalarField2D::zeros(grid.nx, grid.ny, grid.dx(), grid.dy(), z, ComponentTag::Jx);
    layer.jy = ScalarField2D::zeros(grid.nx, grid.ny, grid.dx(), grid.dy(), z, ComponentTag::Jy);

    const double support_x = s.width_x / 2.0 + s.edge_smoothing / 2.0;
    const double support_y = s.length_y / 2.0 + s.edge_smoothing / 2.0;
    if (std::abs(s.center_x) + support_x + s.edge_smoothing > grid.extent_x / 2.0 ||
        std::abs(s.center_y) + support_y + s.edge_smoothing > grid.extent_y / 2.0) {
        std::ostringstream msg;
        msg << "strip (center " << s.center_x << "," << s.center_y << " m, support "
            << 2.0 * support_x << " x " << 2.0 * support_y
            << " m) does not fit in the grid with one smoothing length of margin";
        raise(Errc::StripOutOfBounds, msg.str());
    }

    const double plateau = s.total_current / (s.width_x * thickness);
    std::vector<double> px(grid.nx);
    std::vector<double> py(grid.ny);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        px[ix] = cell_averaged_profile(layer.jy.x_coord(ix) - s.center_x, grid.dx(),
                                       s.width_x / 2.0, s.edge_smoothing);
    }
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        py[iy] = cell_averaged_profile(layer.jy.y_coord(iy) - s.center_y, grid.dy(),
                                       s.length_y / 2.0, s.edge_smoothing);
    }
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            layer.jy.at(ix, iy) = plateau * px[ix] * py[iy];
        }
    }
    return layer;
}

CurrentLayer rasterize_layer(std::span<const StripSpec> strips, LayerIndex which,
                             const GridSpec& grid, const StackGeometry& g) {
    CurrentLayer out;
    out.layer = which;
    const double z = g.layer_z(which);
    out.jx = ScalarField2D::zeros(grid.nx, grid.ny, grid.dx(), grid.dy(), z, ComponentTag::Jx);
    out.jy = ScalarField2D::zeros(grid.nx, grid.ny, grid.dx(), grid.dy(), z, ComponentTag::Jy);
    for (const StripSpec& s : strips) {
        if (s.layer != which) {
            continue;
        }
        const CurrentLayer one = rasterize_strip(s, grid, g);
        for (std::size_t i = 0; i < out.jy.values.size(); ++i) {
            out.jy.values[i] += one.jy.values[i];
        }
    }
    return out;
}

FieldMap add_field_noise(const FieldMap& f, double sigma, std::uint64_t seed) {
    f.ensure_consistent("add_field_noise");
    if (sigma < 0.0) {
        raise(Errc::ConfigError, "noise sigma must be non-negative");
    }
    if (sigma == 0.0) {
        return f;
    }
    FieldMap out = f;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (double& v : out.bx.values) {
        v += gauss(rng);
    }
    for (double& v : out.by.values) {
        v += gauss(rng);
    }
    return out;
}

}  // namespace mig
