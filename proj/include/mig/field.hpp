#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "mig/errors.hpp"

namespace mig {

/// Vacuum permeability, T*m/A.
inline constexpr double kVacuumPermeability = 4.0e-7 * std::numbers::pi;

/// Semantic label of a sampled component. The numeric values are part of
/// the binary grid-file format; do not reorder.
enum class ComponentTag : std::uint8_t { Bx = 0, By = 1, Jx = 2, Jy = 3 };

[[nodiscard]] const char* to_string(ComponentTag tag);
[[nodiscard]] ComponentTag component_tag_from_string(const std::string& name);

/// One real-valued component sampled on a uniform x-y lattice at a fixed
/// height z. Storage is row-major: ny rows of nx samples.
///
/// Sample (ix, iy) sits at x = (ix - (nx-1)/2) * dx and the analogous y,
/// i.e. the lattice is centered on the grid's geometric center.
struct ScalarField2D {
    std::size_t nx{0};
    std::size_t ny{0};
    double dx{0.0};  ///< sample spacing [m]
    double dy{0.0};  ///< sample spacing [m]
    double z{0.0};   ///< plane height [m]
    ComponentTag tag{ComponentTag::Bx};
    std::vector<double> values;

    static ScalarField2D zeros(std::size_t nx, std::size_t ny, double dx, double dy,
                               double z, ComponentTag tag);

    [[nodiscard]] double& at(std::size_t ix, std::size_t iy) { return values[iy * nx + ix]; }
    [[nodiscard]] double at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }

    [[nodiscard]] double x_coord(std::size_t ix) const {
        return (static_cast<double>(ix) - 0.5 * static_cast<double>(nx - 1)) * dx;
    }
    [[nodiscard]] double y_coord(std::size_t iy) const {
        return (static_cast<double>(iy) - 0.5 * static_cast<double>(ny - 1)) * dy;
    }

    /// True when shape and spacing match (z and tag may differ).
    [[nodiscard]] bool same_grid(const ScalarField2D& other) const {
        return nx == other.nx && ny == other.ny && dx == other.dx && dy == other.dy;
    }

    [[nodiscard]] double rms() const;

    /// Throws Error(NonFiniteInput) if any sample is NaN or infinite.
    void ensure_finite(const char* context) const;

    /// Throws Error(ShapeMismatch) if values.size() != nx*ny or spacing
    /// is not positive.
    void ensure_consistent(const char* context) const;
};

}  // namespace mig
