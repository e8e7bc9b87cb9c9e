#include "mig/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mig {

namespace {

struct Region {
    std::size_t x0, x1, y0, y1;  // half-open
};

Region central_region(const ScalarField2D& f, double fraction) {
    const auto margin_x = static_cast<std::size_t>(
        std::llround(static_cast<double>(f.nx) * (1.0 - fraction) / 2.0));
    const auto margin_y = static_cast<std::size_t>(
        std::llround(static_cast<double>(f.ny) * (1.0 - fraction) / 2.0));
    return {margin_x, f.nx - margin_x, margin_y, f.ny - margin_y};
}

}  // namespace

double relative_rms_central(const ScalarField2D& test, const ScalarField2D& reference,
                            double fraction) {
    test.ensure_consistent("relative_rms_central");
    reference.ensure_consistent("relative_rms_central");
    if (!test.same_grid(reference)) {
        raise(Errc::GridMismatch, "relative_rms_central: grids differ");
    }
    if (!(fraction > 0.0) || fraction > 1.0) {
        raise(Errc::ShapeMismatch, "relative_rms_central: fraction must lie in (0, 1]");
    }
    const Region r = central_region(test, fraction);
    double err_sq = 0.0;
    double ref_sq = 0.0;
    for (std::size_t iy = r.y0; iy < r.y1; ++iy) {
        for (std::size_t ix = r.x0; ix < r.x1; ++ix) {
            const double d = test.at(ix, iy) - reference.at(ix, iy);
            err_sq += d * d;
            ref_sq += reference.at(ix, iy) * reference.at(ix, iy);
        }
    }
    if (ref_sq == 0.0) {
        return err_sq == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::sqrt(err_sq / ref_sq);
}

double peak_abs_error(const ScalarField2D& test, const ScalarField2D& reference) {
    if (!test.same_grid(reference)) {
        raise(Errc::GridMismatch, "peak_abs_error: grids differ");
    }
    double peak = 0.0;
    for (std::size_t i = 0; i < test.values.size(); ++i) {
        peak = std::max(peak, std::abs(test.values[i] - reference.values[i]));
    }
    return peak;
}

std::optional<double> plateau_current_estimate(const ScalarField2D& jy, const StripSpec& strip,
                                               double thickness) {
    jy.ensure_consistent("plateau_current_estimate");
    // Integrate across the strip footprint (width plus taper) on rows that
    // lie in the taper-free span of the strip's length.
    const double x_lo = strip.center_x - strip.width_x / 2.0 - strip.edge_smoothing;
    const double x_hi = strip.center_x + strip.width_x / 2.0 + strip.edge_smoothing;
    const double y_lo = strip.center_y - (strip.length_y / 2.0 - strip.edge_smoothing);
    const double y_hi = strip.center_y + (strip.length_y / 2.0 - strip.edge_smoothing);

    double sum = 0.0;
    std::size_t rows = 0;
    for (std::size_t iy = 0; iy < jy.ny; ++iy) {
        const double y = jy.y_coord(iy);
        if (y < y_lo || y > y_hi) {
            continue;
        }
        double row = 0.0;
        for (std::size_t ix = 0; ix < jy.nx; ++ix) {
            const double x = jy.x_coord(ix);
            if (x < x_lo || x > x_hi) {
                continue;
            }
            row += jy.at(ix, iy);
        }
        sum += row * jy.dx * thickness;
        ++rows;
    }
    if (rows == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(rows);
}

std::string format_report_text(const std::vector<LayerReport>& reports) {
    std::ostringstream out;
    for (const LayerReport& r : reports) {
        out << r.label << ":\n";
        out << "  relative RMS error (central 60%): " << r.rel_rms_central * 100.0 << " %\n";
        out << "  peak absolute error:              " << r.peak_abs_err << " A/m^2\n";
        if (r.plateau_current) {
            out << "  plateau current estimate:         " << *r.plateau_current << " A";
            if (r.plateau_target) {
                out << "  (target " << *r.plateau_target << " A, deviation "
                    << (*r.plateau_current - *r.plateau_target) / *r.plateau_target * 100.0
                    << " %)";
            }
            out << "\n";
        }
    }
    return std::move(out).str();
}

std::string format_report_kv(const std::vector<LayerReport>& reports) {
    std::ostringstream out;
    out.precision(17);
    for (const LayerReport& r : reports) {
        out << "metric." << r.label << ".rel_rms_central=" << r.rel_rms_central << "\n";
        out << "metric." << r.label << ".peak_abs_err=" << r.peak_abs_err << "\n";
        if (r.plateau_current) {
            out << "metric." << r.label << ".plateau_current_a=" << *r.plateau_current << "\n";
        }
        if (r.plateau_target) {
            out << "metric." << r.label << ".plateau_target_a=" << *r.plateau_target << "\n";
        }
    }
    return std::move(out).str();
}

}  // namespace mig
