#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "mig/forward.hpp"
#include "mig/geometry.hpp"
#include "mig/recon_config.hpp"

namespace mig {

/// Per-wavenumber 2x2 kernel coupling the two layers' current spectra to
/// the field spectra observed at the two planes:
///
///   ( -Hx_M1 )   ( g11 g12 ) ( Jy_S1 )
///   ( +Hx_M2 ) = ( g21 g22 ) ( Jy_S2 )
///
/// Row i belongs to plane Mi, column j to layer Sj; each entry is the
/// green_kernel of that layer evaluated at the plane-layer distance. All
/// entries are non-negative, and det -> 0 linearly as k -> 0 (the rows
/// coincide at DC).
struct ContinuationMatrix {
    double k{0.0};
    double g11{0.0}, g12{0.0};
    double g21{0.0}, g22{0.0};

    [[nodiscard]] double det() const { return g11 * g22 - g12 * g21; }

    struct Inverse {
        double i11, i12, i21, i22;
    };

    /// Closed-form 2x2 inverse. Throws Error(SingularBin) when |det| is
    /// below the singularity threshold (always the case at k = 0).
    [[nodiscard]] Inverse invert() const;

    /// Ratio of the singular values (>= 1, infinite for a singular bin).
    [[nodiscard]] double condition_number() const;
};

/// |det| below this is treated as singular. Far below any physical value
/// for k > 0 on desk-scale geometries, yet catches the analytic zero at
/// k = 0 under round-off.
inline constexpr double kSingularDetThreshold = 1.0e-30;

[[nodiscard]] ContinuationMatrix continuation_matrix(double k, const StackGeometry& g);

/// Worst-case spectral amplification of the two-layer inversion at
/// wavenumber k: (k/2) csch(k delta_min / 2) csch(k Delta_S)
/// exp(k (Delta_max + Delta_S)). Diverges at k -> 0 and k -> inf.
[[nodiscard]] double downward_gain(double k, const StackGeometry& g);

/// Largest k whose downward_gain stays within max_gain (the upper crossing
/// of the gain curve). Deterministic, derived from geometry only.
[[nodiscard]] double auto_k_cut(const StackGeometry& g, double max_gain);

/// Closed-form per-bin two-layer solve: field spectra at (M1, M2) ->
/// current spectra at (S1, S2). h_m1/h_m2 are the raw Hx values; the sign
/// convention of the plane vector is applied internally. Requires k > 0.
[[nodiscard]] std::pair<std::complex<double>, std::complex<double>> invert_bin_closed_form(
    double k, const StackGeometry& g, std::complex<double> h_m1, std::complex<double> h_m2);

/// Same solve routed through ContinuationMatrix::invert; kept as an
/// algebraically independent formulation for cross-checking.
[[nodiscard]] std::pair<std::complex<double>, std::complex<double>> invert_bin_matrix(
    double k, const StackGeometry& g, std::complex<double> h_m1, std::complex<double> h_m2);

struct TwoLayerReconstruction {
    CurrentLayer s1;
    CurrentLayer s2;
    double applied_k_cut{0.0};  ///< the cutoff actually used [rad/m]
};

/// Full reconstruction pipeline: window, pad, transform, per-bin solve for
/// both current components, low-pass, DC policy, inverse transform, crop.
/// m1 must be the map below the stack and m2 the map above, on identical
/// grids. Input maps are in tesla; outputs in A/m^2.
[[nodiscard]] TwoLayerReconstruction reconstruct_two_layer(const FieldMap& m1, const FieldMap& m2,
                                                           const StackGeometry& g,
                                                           const ReconstructionConfig& cfg);

enum class PlacementVerdict { Invertible, RankDeficient, Invasive };

[[nodiscard]] const char* to_string(PlacementVerdict v);

struct ConditioningSample {
    double k{0.0};
    double condition{0.0};  ///< infinity for a singular bin
    double det{0.0};
};

struct ConditioningReport {
    PlacementVerdict verdict{PlacementVerdict::Invertible};
    std::vector<ConditioningSample> samples;
};

/// Conditioning diagnosis for an arbitrary (possibly invalid) plane
/// placement. Same-side placements make the rows of the continuation
/// matrix proportional, so the verdict is RankDeficient at every k; a
/// plane inside the stack yields Invasive. Never throws.
[[nodiscard]] ConditioningReport detect_rank_deficiency(const StackGeometry& raw,
                                                        std::span<const double> k_values);

}  // namespace mig
