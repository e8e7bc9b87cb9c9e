#pragma once

#include <cstddef>
#include <optional>

#include "mig/spectral.hpp"

namespace mig {

/// Handling of the degenerate kx = ky = 0 bin, where the two rows of the
/// continuation matrix coincide and only the sum of the layer DC terms is
/// observable.
enum class DcPolicy {
    MinimumNorm,  ///< distribute the consistent DC reading as the minimum-norm split
    Zero,         ///< zero both layers' DC bins
};

/// Numerical safeguards around the exact inversion. The defaults are the
/// library-wide defaults; per-run values come from the config file.
struct ReconstructionConfig {
    WindowSpec window{WindowKind::Hann};  ///< spatial window on measured maps
    std::size_t pad_factor{2};            ///< zero-padding factor for all FFTs
    std::optional<double> k_cut{};        ///< low-pass cutoff [rad/m]; nullopt = auto
    double rolloff{0.25};                 ///< cosine-taper fraction of the cutoff
    double max_gain{1.0e4};               ///< amplification bound used by auto k_cut
    DcPolicy dc_policy{DcPolicy::MinimumNorm};

    void validate() const;
};

}  // namespace mig
