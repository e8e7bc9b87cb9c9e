#include "mig/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

namespace mig {

namespace {

// FFTW's planner mutates global state; execution does not. Guarding the
// plan create/destroy calls keeps the transform functions callable from
// multiple threads.
std::mutex g_planner_mutex;

void run_dft(std::size_t nx, std::size_t ny, std::complex<double>* data, int sign) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        plan = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx),
                                reinterpret_cast<fftw_complex*>(data),
                                reinterpret_cast<fftw_complex*>(data), sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        fftw_destroy_plan(plan);
    }
}

}  // namespace

std::vector<double> wavenumber_axis(std::size_t n, double d) {
    std::vector<double> axis(n);
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * d);
    for (std::size_t i = 0; i < n; ++i) {
        const double freq_index = (i <= (n - 1) / 2)
                                      ? static_cast<double>(i)
                                      : static_cast<double>(i) - static_cast<double>(n);
        axis[i] = dk * freq_index;
    }
    return axis;
}

double Spectrum2D::k_mag(std::size_t ikx, std::size_t iky) const {
    return std::hypot(kx_axis[ikx], ky_axis[iky]);
}

double Spectrum2D::max_k() const {
    double kx_max = 0.0;
    double ky_max = 0.0;
    for (double k : kx_axis) kx_max = std::max(kx_max, std::abs(k));
    for (double k : ky_axis) ky_max = std::max(ky_max, std::abs(k));
    return std::hypot(kx_max, ky_max);
}

void Spectrum2D::ensure_consistent(const char* context) const {
    if (nkx == 0 || nky == 0 || values.size() != nkx * nky || kx_axis.size() != nkx ||
        ky_axis.size() != nky) {
        std::ostringstream msg;
        msg << context << ": spectrum stores " << values.size() << " bins for a " << nkx << "x"
            << nky << " grid (axes " << kx_axis.size() << ", " << ky_axis.size() << ")";
        raise(Errc::ShapeMismatch, msg.str());
    }
    if (!(dx > 0.0) || !(dy > 0.0)) {
        raise(Errc::ShapeMismatch, std::string(context) + ": source spacing must be positive");
    }
}

Spectrum2D forward_transform(const ScalarField2D& f) {
    f.ensure_consistent("forward_transform");
    f.ensure_finite("forward_transform");

    Spectrum2D s;
    s.nkx = f.nx;
    s.nky = f.ny;
    s.kx_axis = wavenumber_axis(f.nx, f.dx);
    s.ky_axis = wavenumber_axis(f.ny, f.dy);
    s.dx = f.dx;
    s.dy = f.dy;
    s.z = f.z;
    s.tag = f.tag;

    s.values.resize(f.values.size());
    const double scale = f.dx * f.dy;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        s.values[i] = std::complex<double>(f.values[i] * scale, 0.0);
    }
    run_dft(s.nkx, s.nky, s.values.data(), FFTW_FORWARD);
    return s;
}

std::vector<std::complex<double>> inverse_transform_complex(const Spectrum2D& s) {
    s.ensure_consistent("inverse_transform");
    std::vector<std::complex<double>> buffer = s.values;
    run_dft(s.nkx, s.nky, buffer.data(), FFTW_BACKWARD);
    const double scale =
        1.0 / (static_cast<double>(s.nkx) * static_cast<double>(s.nky) * s.dx * s.dy);
    for (auto& v : buffer) {
        v *= scale;
    }
    return buffer;
}

ScalarField2D inverse_transform(const Spectrum2D& s) {
    const std::vector<std::complex<double>> buffer = inverse_transform_complex(s);
    ScalarField2D f = ScalarField2D::zeros(s.nkx, s.nky, s.dx, s.dy, s.z, s.tag);
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        f.values[i] = buffer[i].real();
    }
    return f;
}

std::vector<double> window_weights(WindowKind kind, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (kind == WindowKind::None || n == 0) {
        return w;
    }
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    if (kind == WindowKind::Hann) {
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = 0.5 - 0.5 * std::cos(step * static_cast<double>(i));
        }
    } else {
        // 4-term Blackman-Harris, canonical coefficient set.
        constexpr double a0 = 0.35875, a1 = 0.48829, a2 = 0.14128, a3 = 0.01168;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = step * static_cast<double>(i);
            w[i] = a0 - a1 * std::cos(t) + a2 * std::cos(2.0 * t) - a3 * std::cos(3.0 * t);
            w[i] = std::clamp(w[i], 0.0, 1.0);
        }
    }
    return w;
}

ScalarField2D apply_window(const ScalarField2D& f, const WindowSpec& spec) {
    f.ensure_consistent("apply_window");
    if (spec.kind == WindowKind::None) {
        return f;
    }
    const std::vector<double> wx = window_weights(spec.kind, f.nx);
    const std::vector<double> wy = window_weights(spec.kind, f.ny);
    ScalarField2D out = f;
    for (std::size_t iy = 0; iy < f.ny; ++iy) {
        for (std::size_t ix = 0; ix < f.nx; ++ix) {
            out.at(ix, iy) = f.at(ix, iy) * wx[ix] * wy[iy];
        }
    }
    return out;
}

ScalarField2D zero_pad(const ScalarField2D& f, std::size_t factor) {
    f.ensure_consistent("zero_pad");
    if (factor == 0) {
        raise(Errc::ShapeMismatch, "zero_pad: factor must be >= 1");
    }
    if (factor == 1) {
        return f;
    }
    const std::size_t nx = f.nx * factor;
    const std::size_t ny = f.ny * factor;
    ScalarField2D out = ScalarField2D::zeros(nx, ny, f.dx, f.dy, f.z, f.tag);
    const std::size_t ox = (nx - f.nx) / 2;
    const std::size_t oy = (ny - f.ny) / 2;
    for (std::size_t iy = 0; iy < f.ny; ++iy) {
        for (std::size_t ix = 0; ix < f.nx; ++ix) {
            out.at(ox + ix, oy + iy) = f.at(ix, iy);
        }
    }
    return out;
}

ScalarField2D crop_center(const ScalarField2D& f, std::size_t nx, std::size_t ny) {
    f.ensure_consistent("crop_center");
    if (nx > f.nx || ny > f.ny || nx == 0 || ny == 0) {
        std::ostringstream msg;
        msg << "crop_center: cannot crop " << f.nx << "x" << f.ny << " to " << nx << "x" << ny;
        raise(Errc::ShapeMismatch, msg.str());
    }
    ScalarField2D out = ScalarField2D::zeros(nx, ny, f.dx, f.dy, f.z, f.tag);
    const std::size_t ox = (f.nx - nx) / 2;
    const std::size_t oy = (f.ny - ny) / 2;
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            out.at(ix, iy) = f.at(ox + ix, oy + iy);
        }
    }
    return out;
}

double lowpass_gain(double k, double k_cut, double rolloff) {
    const double k0 = k_cut * (1.0 - rolloff);
    if (k >= k_cut) {
        return 0.0;
    }
    if (k <= k0) {
        return 1.0;
    }
    return 0.5 * (1.0 + std::cos(std::numbers::pi * (k - k0) / (k_cut - k0)));
}

Spectrum2D lowpass_filter(const Spectrum2D& s, double k_cut, double rolloff) {
    s.ensure_consistent("lowpass_filter");
    if (!(k_cut > 0.0) || rolloff < 0.0 || rolloff >= 1.0) {
        std::ostringstream msg;
        msg << "lowpass_filter: need k_cut > 0 and rolloff in [0,1), got k_cut=" << k_cut
            << ", rolloff=" << rolloff;
        raise(Errc::ShapeMismatch, msg.str());
    }
    Spectrum2D out = s;
    for (std::size_t iky = 0; iky < s.nky; ++iky) {
        for (std::size_t ikx = 0; ikx < s.nkx; ++ikx) {
            out.at(ikx, iky) *= lowpass_gain(s.k_mag(ikx, iky), k_cut, rolloff);
        }
    }
    return out;
}

}  // namespace mig
