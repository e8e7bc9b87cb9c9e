#include "mig/geometry.hpp"

#include <cmath>
#include <sstream>

#include "mig/errors.hpp"

namespace mig {

namespace {

enum class Side { Below, Inside, Above };

Side side_of_stack(const StackGeometry& g, double z_plane) {
    if (z_plane < g.z_s1 - g.delta1 / 2.0) {
        return Side::Below;
    }
    if (z_plane > g.z_s2 + g.delta2 / 2.0) {
        return Side::Above;
    }
    return Side::Inside;
}

}  // namespace

PlanePlacement classify_placement(const StackGeometry& g) {
    const Side s1 = side_of_stack(g, g.z_m1);
    const Side s2 = side_of_stack(g, g.z_m2);
    if (s1 == Side::Inside || s2 == Side::Inside) {
        return PlanePlacement::Invasive;
    }
    if (s1 == s2) {
        return PlanePlacement::SameSide;
    }
    return PlanePlacement::TwoSided;
}

StackGeometry validate_geometry(const StackGeometry& g) {
    if (!(g.delta1 > 0.0) || !(g.delta2 > 0.0)) {
        std::ostringstream msg;
        msg << "layer thicknesses must be positive (delta1=" << g.delta1
            << " m, delta2=" << g.delta2 << " m)";
        raise(Errc::NonPositiveThickness, msg.str());
    }
    if (!(g.z_s1 < g.z_s2) || !(g.z_s2 - g.z_s1 > (g.delta1 + g.delta2) / 2.0)) {
        std::ostringstream msg;
        msg << "current layers overlap: z_s1=" << g.z_s1 << " m, z_s2=" << g.z_s2
            << " m, spacing " << g.z_s2 - g.z_s1 << " m must exceed (delta1+delta2)/2 = "
            << (g.delta1 + g.delta2) / 2.0 << " m";
        raise(Errc::LayerOverlap, msg.str());
    }
    // The lower plane must sit strictly below the stack, the upper plane
    // strictly above it; anything else cannot be measured non-invasively.
    if (!(g.z_m1 < g.z_s1 - g.delta1 / 2.0) || !(g.z_s2 + g.delta2 / 2.0 < g.z_m2)) {
        std::ostringstream msg;
        msg << "measurement planes must bracket the stack: need z_m1 < "
            << g.z_s1 - g.delta1 / 2.0 << " m (got " << g.z_m1 << " m) and z_m2 > "
            << g.z_s2 + g.delta2 / 2.0 << " m (got " << g.z_m2 << " m)";
        raise(Errc::InvasivePlane, msg.str());
    }
    if (!(g.lower_standoff() > 0.0) || !(g.upper_standoff() > 0.0) ||
        !(g.layer_spacing() > 0.0)) {
        raise(Errc::InvasivePlane, "derived separations must all be positive");
    }
    return g;
}

}  // namespace mig
