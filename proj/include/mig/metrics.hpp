#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mig/field.hpp"
#include "mig/scenarios.hpp"

namespace mig {

/// RMS of (test - reference) over the centered fraction of the grid,
/// relative to the RMS of the reference over the same region.
[[nodiscard]] double relative_rms_central(const ScalarField2D& test, const ScalarField2D& reference,
                                          double fraction);

[[nodiscard]] double peak_abs_error(const ScalarField2D& test, const ScalarField2D& reference);

/// Recovered total current of a strip: sum of jy * dx * thickness across
/// the strip footprint (width plus taper), averaged over the taper-free
/// rows. Returns nullopt when no row lies fully inside the taper-free
/// span.
[[nodiscard]] std::optional<double> plateau_current_estimate(const ScalarField2D& jy,
                                                             const StripSpec& strip,
                                                             double thickness);

struct LayerReport {
    std::string label;
    double rel_rms_central{0.0};
    double peak_abs_err{0.0};
    std::optional<double> plateau_current;      ///< A
    std::optional<double> plateau_target;      ///< A
};

/// Renders reports both human-readable and as machine-readable key=value
/// lines ("metric.<label>.<name>=<value>").
[[nodiscard]] std::string format_report_text(const std::vector<LayerReport>& reports);
[[nodiscard]] std::string format_report_kv(const std::vector<LayerReport>& reports);

}  // namespace mig
