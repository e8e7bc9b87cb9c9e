#include "mig/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mig/spectral.hpp"

namespace mig {

namespace {

/// log(sinh(x)) without overflow, x > 0.
double log_sinh(double x) {
    return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
}

/// (k/2) csch(k delta/2) csch(k spacing) exp(k grow), evaluated in log
/// space so that huge growth factors saturate to inf instead of producing
/// inf * 0 artifacts.
double amplification(double k, double delta, double spacing, double grow) {
    const double log_amp = std::log(k / 2.0) - log_sinh(k * delta / 2.0) -
                           log_sinh(k * spacing) + k * grow;
    return std::exp(log_amp);
}

void ensure_valid_bin_k(double k) {
    if (!(k > 0.0)) {
        raise(Errc::SingularBin, "two-layer solve requires k > 0; the DC bin is degenerate");
    }
}

}  // namespace

ContinuationMatrix continuation_matrix(double k, const StackGeometry& g) {
    const double d1 = g.lower_standoff();
    const double d2 = g.upper_standoff();
    const double ds = g.layer_spacing();
    ContinuationMatrix m;
    m.k = k;
    m.g11 = green_kernel(k, g.delta1, d1);
    m.g12 = green_kernel(k, g.delta2, d1 + ds);
    m.g21 = green_kernel(k, g.delta1, d2 + ds);
    m.g22 = green_kernel(k, g.delta2, d2);
    return m;
}

ContinuationMatrix::Inverse ContinuationMatrix::invert() const {
    const double d = det();
    if (std::abs(d) < kSingularDetThreshold) {
        std::ostringstream msg;
        msg << "continuation matrix is singular at k=" << k << " rad/m (det=" << d
            << "); the bin must be handled by the DC policy";
        raise(Errc::SingularBin, msg.str());
    }
    return Inverse{g22 / d, -g12 / d, -g21 / d, g11 / d};
}

double ContinuationMatrix::condition_number() const {
    const double f = g11 * g11 + g12 * g12 + g21 * g21 + g22 * g22;
    const double d = det();
    const double disc = std::sqrt(std::max(f * f - 4.0 * d * d, 0.0));
    const double sigma_max = std::sqrt((f + disc) / 2.0);
    const double sigma_min_sq = (f - disc) / 2.0;
    if (!(sigma_min_sq > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return sigma_max / std::sqrt(sigma_min_sq);
}

double downward_gain(double k, const StackGeometry& g) {
    if (!(k > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    const double delta_min = std::min(g.delta1, g.delta2);
    const double standoff_max = std::max(g.lower_standoff(), g.upper_standoff());
    return amplification(k, delta_min, g.layer_spacing(), standoff_max + g.layer_spacing());
}

double auto_k_cut(const StackGeometry& g, double max_gain) {
    if (!(max_gain > 1.0)) {
        raise(Errc::ConfigError, "auto k_cut requires max_gain > 1");
    }
    // The gain curve diverges at both ends; locate its minimum by ternary
    // search, then bisect the upper crossing of max_gain.
    double lo = 1e-6;
    double hi = 1.0;
    while (downward_gain(hi, g) < downward_gain(hi * 2.0, g)) {
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (downward_gain(m1, g) < downward_gain(m2, g)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    const double k_min = 0.5 * (lo + hi);
    if (!(downward_gain(k_min, g) <= max_gain)) {
        std::ostringstream msg;
        msg << "no wavenumber satisfies the amplification bound " << max_gain
            << " for this geometry (minimum gain " << downward_gain(k_min, g) << ")";
        raise(Errc::ConfigError, msg.str());
    }
    double a = k_min;
    double b = k_min;
    while (downward_gain(b, g) <= max_gain) {
        a = b;
        b *= 2.0;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        if (downward_gain(mid, g) <= max_gain) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return a;
}

std::pair<std::complex<double>, std::complex<double>> invert_bin_closed_form(
    double k, const StackGeometry& g, std::complex<double> h_m1, std::complex<double> h_m2) {
    ensure_valid_bin_k(k);
    const double d1 = g.lower_standoff();
    const double d2 = g.upper_standoff();
    const double ds = g.layer_spacing();
    const std::complex<double> j1 =
        -(amplification(k, g.delta1, ds, d1 + ds) * h_m1 + amplification(k, g.delta1, ds, d2) * h_m2);
    const std::complex<double> j2 =
        amplification(k, g.delta2, ds, d2 + ds) * h_m2 + amplification(k, g.delta2, ds, d1) * h_m1;
    return {j1, j2};
}

std::pair<std::complex<double>, std::complex<double>> invert_bin_matrix(
    double k, const StackGeometry& g, std::complex<double> h_m1, std::complex<double> h_m2) {
    ensure_valid_bin_k(k);
    const ContinuationMatrix m = continuation_matrix(k, g);
    const ContinuationMatrix::Inverse inv = m.invert();
    // Plane vector carries (-H_M1, +H_M2).
    const std::complex<double> v1 = -h_m1;
    const std::complex<double> v2 = h_m2;
    return {inv.i11 * v1 + inv.i12 * v2, inv.i21 * v1 + inv.i22 * v2};
}

namespace {

Spectrum2D spectrum_like(const Spectrum2D& proto, ComponentTag tag, double z) {
    Spectrum2D s = proto;
    s.tag = tag;
    s.z = z;
    std::fill(s.values.begin(), s.values.end(), std::complex<double>(0.0, 0.0));
    return s;
}

struct DcReadings {
    std::complex<double> r1;
    std::complex<double> r2;
};

void apply_dc_policy(Spectrum2D& j1, Spectrum2D& j2, const DcReadings& dc,
                     const StackGeometry& g, DcPolicy policy) {
    if (policy == DcPolicy::Zero) {
        j1.at(0, 0) = 0.0;
        j2.at(0, 0) = 0.0;
        return;
    }
    // At k = 0 both planes read (delta1/2) J1 + (delta2/2) J2; distribute
    // the averaged reading as the minimum-norm split.
    const std::complex<double> mean = 0.5 * (dc.r1 + dc.r2);
    const double w1 = g.delta1 / 2.0;
    const double w2 = g.delta2 / 2.0;
    const double norm = w1 * w1 + w2 * w2;
    j1.at(0, 0) = mean * (w1 / norm);
    j2.at(0, 0) = mean * (w2 / norm);
}

}  // namespace

TwoLayerReconstruction reconstruct_two_layer(const FieldMap& m1, const FieldMap& m2,
                                             const StackGeometry& g,
                                             const ReconstructionConfig& cfg) {
    m1.ensure_consistent("reconstruct_two_layer");
    m2.ensure_consistent("reconstruct_two_layer");
    if (m1.plane != PlaneIndex::M1 || m2.plane != PlaneIndex::M2) {
        raise(Errc::InvalidPlane,
              "reconstruct_two_layer: expected the lower-plane map first and the upper second");
    }
    if (!m1.bx.same_grid(m2.bx)) {
        raise(Errc::GridMismatch, "reconstruct_two_layer: plane maps must share the same grid");
    }
    m1.bx.ensure_finite("reconstruct_two_layer");
    m1.by.ensure_finite("reconstruct_two_layer");
    m2.bx.ensure_finite("reconstruct_two_layer");
    m2.by.ensure_finite("reconstruct_two_layer");
    if (classify_placement(g) == PlanePlacement::SameSide) {
        raise(Errc::SameSidePlanes,
              "reconstruct_two_layer: both measurement planes lie on the same side of the stack; "
              "the continuation matrix is rank-deficient at every wavenumber");
    }
    validate_geometry(g);
    cfg.validate();

    const double k_cut = cfg.k_cut ? *cfg.k_cut : auto_k_cut(g, cfg.max_gain);
    const std::size_t nx = m1.bx.nx;
    const std::size_t ny = m1.bx.ny;

    const auto prepare = [&](const ScalarField2D& b) {
        ScalarField2D h = apply_window(b, cfg.window);
        for (double& v : h.values) {
            v /= kVacuumPermeability;
        }
        return forward_transform(zero_pad(h, cfg.pad_factor));
    };
    const Spectrum2D hx1 = prepare(m1.bx);
    const Spectrum2D hx2 = prepare(m2.bx);
    const Spectrum2D hy1 = prepare(m1.by);
    const Spectrum2D hy2 = prepare(m2.by);

    Spectrum2D jy1 = spectrum_like(hx1, ComponentTag::Jy, g.z_s1);
    Spectrum2D jy2 = spectrum_like(hx1, ComponentTag::Jy, g.z_s2);
    Spectrum2D jx1 = spectrum_like(hx1, ComponentTag::Jx, g.z_s1);
    Spectrum2D jx2 = spectrum_like(hx1, ComponentTag::Jx, g.z_s2);

    for (std::size_t iky = 0; iky < hx1.nky; ++iky) {
        for (std::size_t ikx = 0; ikx < hx1.nkx; ++ikx) {
            if (ikx == 0 && iky == 0) {
                continue;  // degenerate bin, handled by the DC policy below
            }
            const double k = hx1.k_mag(ikx, iky);
            const double t = lowpass_gain(k, k_cut, cfg.rolloff);
            if (t == 0.0) {
                continue;  // suppressed bin; never evaluate the growing terms
            }
            const auto [y1, y2] = invert_bin_closed_form(k, g, hx1.at(ikx, iky), hx2.at(ikx, iky));
            const auto [x1, x2] =
                invert_bin_closed_form(k, g, -hy1.at(ikx, iky), -hy2.at(ikx, iky));
            jy1.at(ikx, iky) = t * y1;
            jy2.at(ikx, iky) = t * y2;
            jx1.at(ikx, iky) = t * x1;
            jx2.at(ikx, iky) = t * x2;
            if (!std::isfinite(y1.real()) || !std::isfinite(y1.imag()) ||
                !std::isfinite(y2.real()) || !std::isfinite(y2.imag()) ||
                !std::isfinite(x1.real()) || !std::isfinite(x1.imag()) ||
                !std::isfinite(x2.real()) || !std::isfinite(x2.imag())) {
                std::ostringstream msg;
                msg << "reconstruction overflowed at k=" << k
                    << " rad/m; lower k_cut (currently " << k_cut << " rad/m)";
                raise(Errc::NonFiniteResult, msg.str());
            }
        }
    }

    // DC readings follow the plane-vector sign convention; the Jx system
    // substitutes H_x -> -H_y.
    apply_dc_policy(jy1, jy2, DcReadings{-hx1.at(0, 0), hx2.at(0, 0)}, g, cfg.dc_policy);
    apply_dc_policy(jx1, jx2, DcReadings{hy1.at(0, 0), -hy2.at(0, 0)}, g, cfg.dc_policy);

    TwoLayerReconstruction out;
    out.applied_k_cut = k_cut;
    out.s1.layer = LayerIndex::S1;
    out.s2.layer = LayerIndex::S2;
    out.s1.jy = crop_center(inverse_transform(jy1), nx, ny);
    out.s1.jx = crop_center(inverse_transform(jx1), nx, ny);
    out.s2.jy = crop_center(inverse_transform(jy2), nx, ny);
    out.s2.jx = crop_center(inverse_transform(jx2), nx, ny);
    for (ScalarField2D* f : {&out.s1.jx, &out.s1.jy}) {
        f->z = g.z_s1;
    }
    for (ScalarField2D* f : {&out.s2.jx, &out.s2.jy}) {
        f->z = g.z_s2;
    }
    return out;
}

const char* to_string(PlacementVerdict v) {
    switch (v) {
        case PlacementVerdict::Invertible: return "Invertible";
        case PlacementVerdict::RankDeficient: return "RankDeficient";
        case PlacementVerdict::Invasive: return "Invasive";
    }
    return "?";
}

ConditioningReport detect_rank_deficiency(const StackGeometry& raw,
                                          std::span<const double> k_values) {
    ConditioningReport report;
    switch (classify_placement(raw)) {
        case PlanePlacement::TwoSided: report.verdict = PlacementVerdict::Invertible; break;
        case PlanePlacement::SameSide: report.verdict = PlacementVerdict::RankDeficient; break;
        case PlanePlacement::Invasive: report.verdict = PlacementVerdict::Invasive; break;
    }
    report.samples.reserve(k_values.size());
    for (double k : k_values) {
        // Distances are taken to the raw plane positions, so same-side
        // placements produce exactly proportional rows here.
        ContinuationMatrix m;
        m.k = k;
        m.g11 = green_kernel(k, raw.delta1, std::abs(raw.z_m1 - raw.z_s1));
        m.g12 = green_kernel(k, raw.delta2, std::abs(raw.z_m1 - raw.z_s2));
        m.g21 = green_kernel(k, raw.delta1, std::abs(raw.z_m2 - raw.z_s1));
        m.g22 = green_kernel(k, raw.delta2, std::abs(raw.z_m2 - raw.z_s2));
        report.samples.push_back({k, m.condition_number(), m.det()});
    }
    return report;
}

void ReconstructionConfig::validate() const {
    if (pad_factor < 1) {
        raise(Errc::ConfigError, "pad_factor must be >= 1");
    }
    if (!(max_gain > 1.0)) {
        raise(Errc::ConfigError, "max_gain must exceed 1");
    }
    if (rolloff < 0.0 || rolloff >= 1.0) {
        raise(Errc::ConfigError, "rolloff must lie in [0, 1)");
    }
    if (k_cut && !(*k_cut > 0.0)) {
        raise(Errc::ConfigError, "explicit k_cut must be positive");
    }
}

}  // namespace mig
