#pragma once

#include <span>
#include <vector>

#include "mig/field.hpp"
#include "mig/geometry.hpp"
#include "mig/recon_config.hpp"

namespace mig {

/// Sheet current density of one layer: in-plane components only, constant
/// across the layer thickness. Both grids live at the layer mid-plane.
struct CurrentLayer {
    LayerIndex layer{LayerIndex::S1};
    ScalarField2D jx;  ///< A/m^2
    ScalarField2D jy;  ///< A/m^2

    void ensure_consistent(const char* context) const;
};

/// In-plane magnetic flux density sampled on one measurement plane.
struct FieldMap {
    PlaneIndex plane{PlaneIndex::M1};
    ScalarField2D bx;  ///< tesla
    ScalarField2D by;  ///< tesla

    void ensure_consistent(const char* context) const;
};

/// Spectral kernel relating a layer's current spectrum to the field
/// spectrum at a plane a distance dz from the layer mid-plane:
///     (1/k) sinh(k delta / 2) exp(-k dz),
/// with the analytic limit delta/2 at k = 0. Requires dz >= delta/2 so the
/// evaluation never overflows.
[[nodiscard]] double green_kernel(double k, double delta, double dz);

/// Closed-form spectral forward model: current layer -> flux density map at
/// the requested plane, in tesla. Uses cfg.pad_factor to suppress circular
/// wrap-around; the window and filter members of cfg are not consulted.
[[nodiscard]] FieldMap forward_spectral(const CurrentLayer& layer, const StackGeometry& g,
                                        PlaneIndex target, const ReconstructionConfig& cfg);

/// Direct volume quadrature of the magnetostatic integral over the layer
/// slab, midpoint rule with quad_subdiv^3 subcells per source cell. Slow,
/// deliberately independent of the spectral path; serves as ground truth.
[[nodiscard]] FieldMap forward_direct(const CurrentLayer& layer, const StackGeometry& g,
                                      PlaneIndex target, int quad_subdiv);

/// Componentwise sum of maps sampled on the same plane and grid.
[[nodiscard]] FieldMap superpose(std::span<const FieldMap> maps);

}  // namespace mig
