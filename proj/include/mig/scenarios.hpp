#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mig/forward.hpp"
#include "mig/geometry.hpp"

namespace mig {

/// Uniform sampling lattice: nx x ny samples spanning extent_x x extent_y
/// meters, so dx = extent_x / nx.
struct GridSpec {
    std::size_t nx{256};
    std::size_t ny{256};
    double extent_x{0.4};
    double extent_y{0.4};

    [[nodiscard]] double dx() const { return extent_x / static_cast<double>(nx); }
    [[nodiscard]] double dy() const { return extent_y / static_cast<double>(ny); }

    void validate() const;
};

/// A straight current strip in one layer, carrying total_current in +y,
/// rectangular in plan view with cosine-tapered edges. The taper of width
/// edge_smoothing is centered on the nominal edge, so the integrated
/// current is independent of the smoothing.
struct StripSpec {
    LayerIndex layer{LayerIndex::S1};
    double total_current{0.0};   ///< A, signed, +y direction
    double width_x{0.0};         ///< m
    double length_y{0.0};        ///< m
    double center_x{0.0};        ///< m
    double center_y{0.0};        ///< m
    double edge_smoothing{0.0};  ///< m, full transition width

    void validate() const;
};

/// Rasterizes one strip onto the grid as a CurrentLayer (jx identically
/// zero). Samples are cell averages of the continuous profile, so a
/// mid-strip row integrates to total_current to round-off. Throws
/// Error(StripOutOfBounds) when the strip support plus one smoothing
/// length does not fit in the grid.
[[nodiscard]] CurrentLayer rasterize_strip(const StripSpec& s, const GridSpec& grid,
                                           const StackGeometry& g);

/// Sum of all strips belonging to `layer`; a zero layer when none match.
[[nodiscard]] CurrentLayer rasterize_layer(std::span<const StripSpec> strips, LayerIndex layer,
                                           const GridSpec& grid, const StackGeometry& g);

/// Adds i.i.d. zero-mean Gaussian noise of standard deviation sigma
/// (tesla) to every sample of both components. Deterministic for a fixed
/// seed (mt19937_64 + std::normal_distribution, bx drawn before by);
/// sigma = 0 returns the input bit-for-bit.
[[nodiscard]] FieldMap add_field_noise(const FieldMap& f, double sigma, std::uint64_t seed);

/// PRNG identifier recorded in run manifests.
inline constexpr const char* kNoiseRngName = "mt19937_64+std::normal_distribution";

}  // namespace mig
