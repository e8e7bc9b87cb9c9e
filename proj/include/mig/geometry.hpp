#pragma once

#include <cstddef>

namespace mig {

enum class LayerIndex { S1, S2 };
enum class PlaneIndex { M1, M2 };

/// Two parallel current layers sandwiched between two measurement planes,
/// all stacked along z. Positions are absolute (meters); every kernel in
/// the library depends only on the separations derived below, so the
/// choice of z origin is free.
struct StackGeometry {
    double z_s1{0.0};    ///< mid-plane of the lower current layer [m]
    double z_s2{0.0};    ///< mid-plane of the upper current layer [m]
    double z_m1{0.0};    ///< lower measurement plane [m]
    double z_m2{0.0};    ///< upper measurement plane [m]
    double delta1{0.0};  ///< thickness of the lower layer [m]
    double delta2{0.0};  ///< thickness of the upper layer [m]

    /// Separation between the two layer mid-planes.
    [[nodiscard]] double layer_spacing() const { return z_s2 - z_s1; }
    /// Standoff of the lower plane from its nearest layer.
    [[nodiscard]] double lower_standoff() const { return z_s1 - z_m1; }
    /// Standoff of the upper plane from its nearest layer.
    [[nodiscard]] double upper_standoff() const { return z_m2 - z_s2; }

    [[nodiscard]] double layer_z(LayerIndex s) const {
        return s == LayerIndex::S1 ? z_s1 : z_s2;
    }
    [[nodiscard]] double plane_z(PlaneIndex m) const {
        return m == PlaneIndex::M1 ? z_m1 : z_m2;
    }
    [[nodiscard]] double layer_thickness(LayerIndex s) const {
        return s == LayerIndex::S1 ? delta1 : delta2;
    }
    /// Unsigned distance between a measurement plane and a layer mid-plane.
    [[nodiscard]] double plane_layer_distance(PlaneIndex m, LayerIndex s) const {
        const double d = plane_z(m) - layer_z(s);
        return d < 0.0 ? -d : d;
    }
};

/// Relative placement of the two measurement planes with respect to the
/// layer stack. Only TwoSided geometries are invertible.
enum class PlanePlacement { TwoSided, SameSide, Invasive };

/// Classifies a raw (possibly invalid) geometry without throwing.
[[nodiscard]] PlanePlacement classify_placement(const StackGeometry& g);

/// Checks all structural invariants and returns the geometry unchanged.
/// Throws Error with code LayerOverlap, InvasivePlane or
/// NonPositiveThickness. Idempotent.
StackGeometry validate_geometry(const StackGeometry& g);

}  // namespace mig
