#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "mig/field.hpp"

namespace mig {

enum class WindowKind { None, Hann, BlackmanHarris4Term };

/// Separable spatial window, applied identically along x and y.
struct WindowSpec {
    WindowKind kind{WindowKind::None};
};

/// Periodic (DFT-symmetric) window weights of length n: weight 1 at the
/// center sample n/2, and for Hann exactly 0 at sample 0.
[[nodiscard]] std::vector<double> window_weights(WindowKind kind, std::size_t n);

/// Complex k-space samples of a ScalarField2D under the continuous-transform
/// convention: forward_transform approximates
///     fhat(kx, ky) = integral f(x, y) exp(-i (kx x + ky y)) dx dy
/// as a DFT scaled by dx*dy, and inverse_transform carries the matching
/// 1/(2 pi)^2 measure so that the pair round-trips to round-off.
///
/// kx_axis / ky_axis hold the angular wavenumber of every bin in standard
/// DFT order (non-negative frequencies first); downstream code must use the
/// axes and never infer the bin -> k mapping.
struct Spectrum2D {
    std::size_t nkx{0};
    std::size_t nky{0};
    std::vector<double> kx_axis;  ///< rad/m, length nkx
    std::vector<double> ky_axis;  ///< rad/m, length nky
    std::vector<std::complex<double>> values;  ///< row-major, nky rows of nkx

    // Provenance of the source grid, carried through kernel application.
    double dx{0.0};
    double dy{0.0};
    double z{0.0};
    ComponentTag tag{ComponentTag::Bx};

    [[nodiscard]] std::complex<double>& at(std::size_t ikx, std::size_t iky) {
        return values[iky * nkx + ikx];
    }
    [[nodiscard]] std::complex<double> at(std::size_t ikx, std::size_t iky) const {
        return values[iky * nkx + ikx];
    }

    /// |k| of a bin.
    [[nodiscard]] double k_mag(std::size_t ikx, std::size_t iky) const;

    /// Largest |k| present on the grid (the corner bin).
    [[nodiscard]] double max_k() const;

    void ensure_consistent(const char* context) const;
};

/// Angular-wavenumber axis for an n-point grid of spacing d, DFT order.
[[nodiscard]] std::vector<double> wavenumber_axis(std::size_t n, double d);

[[nodiscard]] Spectrum2D forward_transform(const ScalarField2D& f);
[[nodiscard]] ScalarField2D inverse_transform(const Spectrum2D& s);

/// Inverse transform without discarding the imaginary part; used by
/// diagnostics and tests that check Hermitian symmetry.
[[nodiscard]] std::vector<std::complex<double>> inverse_transform_complex(const Spectrum2D& s);

[[nodiscard]] ScalarField2D apply_window(const ScalarField2D& f, const WindowSpec& w);

/// Embeds the field centered in a (factor*nx) x (factor*ny) grid of zeros.
[[nodiscard]] ScalarField2D zero_pad(const ScalarField2D& f, std::size_t factor);

/// Extracts the centered nx x ny sub-grid; inverse of zero_pad.
[[nodiscard]] ScalarField2D crop_center(const ScalarField2D& f, std::size_t nx, std::size_t ny);

/// Radially symmetric low-pass: 1 below k_cut*(1-rolloff), 0 at and above
/// k_cut, cosine taper between.
[[nodiscard]] double lowpass_gain(double k, double k_cut, double rolloff);
[[nodiscard]] Spectrum2D lowpass_filter(const Spectrum2D& s, double k_cut, double rolloff);

}  // namespace mig
