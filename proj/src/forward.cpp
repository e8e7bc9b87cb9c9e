#include "mig/forward.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "mig/spectral.hpp"

namespace mig {

namespace {

/// +1 when the plane lies above the layer mid-plane, -1 below. The x-field
/// of a +y current flips sign across the layer; the y-field of a +x
/// current flips the other way.
double side_sign(const StackGeometry& g, PlaneIndex plane, LayerIndex layer) {
    return g.plane_z(plane) > g.layer_z(layer) ? 1.0 : -1.0;
}

}  // namespace

void CurrentLayer::ensure_consistent(const char* context) const {
    jx.ensure_consistent(context);
    jy.ensure_consistent(context);
    if (!jx.same_grid(jy) || jx.z != jy.z) {
        raise(Errc::GridMismatch,
              std::string(context) + ": jx and jy must share grid shape, spacing and z");
    }
}

void FieldMap::ensure_consistent(const char* context) const {
    bx.ensure_consistent(context);
    by.ensure_consistent(context);
    if (!bx.same_grid(by) || bx.z != by.z) {
        raise(Errc::GridMismatch,
              std::string(context) + ": bx and by must share grid shape, spacing and z");
    }
}

double green_kernel(double k, double delta, double dz) {
    if (k == 0.0) {
        return delta / 2.0;
    }
    // (1/k) sinh(k delta/2) exp(-k dz), rewritten so no intermediate can
    // overflow: dz >= delta/2 makes both exponents non-positive.
    const double a = k * delta / 2.0;
    const double b = k * dz;
    return -std::exp(a - b) * std::expm1(-2.0 * a) / (2.0 * k);
}

FieldMap forward_spectral(const CurrentLayer& layer, const StackGeometry& g, PlaneIndex target,
                          const ReconstructionConfig& cfg) {
    layer.ensure_consistent("forward_spectral");
    layer.jx.ensure_finite("forward_spectral");
    layer.jy.ensure_finite("forward_spectral");
    validate_geometry(g);
    if (cfg.pad_factor < 1) {
        raise(Errc::InvalidPlane, "forward_spectral: pad_factor must be >= 1");
    }

    const double delta = g.layer_thickness(layer.layer);
    const double dist = g.plane_layer_distance(target, layer.layer);
    const double sign = side_sign(g, target, layer.layer);

    Spectrum2D jy_hat = forward_transform(zero_pad(layer.jy, cfg.pad_factor));
    Spectrum2D jx_hat = forward_transform(zero_pad(layer.jx, cfg.pad_factor));

    // Hx = sign * G * Jy ;  Hy = -sign * G * Jx ;  B = mu0 H.
    for (std::size_t iky = 0; iky < jy_hat.nky; ++iky) {
        for (std::size_t ikx = 0; ikx < jy_hat.nkx; ++ikx) {
            const double kernel =
                kVacuumPermeability * green_kernel(jy_hat.k_mag(ikx, iky), delta, dist);
            jy_hat.at(ikx, iky) *= sign * kernel;
            jx_hat.at(ikx, iky) *= -sign * kernel;
        }
    }

    FieldMap out;
    out.plane = target;
    out.bx = crop_center(inverse_transform(jy_hat), layer.jy.nx, layer.jy.ny);
    out.by = crop_center(inverse_transform(jx_hat), layer.jx.nx, layer.jx.ny);
    out.bx.z = g.plane_z(target);
    out.by.z = g.plane_z(target);
    out.bx.tag = ComponentTag::Bx;
    out.by.tag = ComponentTag::By;
    return out;
}

FieldMap forward_direct(const CurrentLayer& layer, const StackGeometry& g, PlaneIndex target,
                        int quad_subdiv) {
    layer.ensure_consistent("forward_direct");
    layer.jx.ensure_finite("forward_direct");
    layer.jy.ensure_finite("forward_direct");
    if (quad_subdiv < 1) {
        raise(Errc::InvalidPlane, "forward_direct: quad_subdiv must be >= 1");
    }

    const double delta = g.layer_thickness(layer.layer);
    const double z_src = g.layer_z(layer.layer);
    const double z_tgt = g.plane_z(target);
    if (z_tgt >= z_src - delta / 2.0 && z_tgt <= z_src + delta / 2.0) {
        std::ostringstream msg;
        msg << "forward_direct: target plane z=" << z_tgt << " m lies inside the source slab ["
            << z_src - delta / 2.0 << ", " << z_src + delta / 2.0 << "] m";
        raise(Errc::TargetInsideSource, msg.str());
    }

    const ScalarField2D& jx = layer.jx;
    const ScalarField2D& jy = layer.jy;
    const std::size_t nx = jx.nx;
    const std::size_t ny = jx.ny;
    const int sub = quad_subdiv;

    // Flatten the occupied source cells once; each expands into sub^2
    // in-plane quadrature points sharing the cell's current density.
    struct SourcePoint {
        double x, y, jx, jy;
    };
    std::vector<SourcePoint> sources;
    std::vector<double> offsets(static_cast<std::size_t>(sub));
    for (int i = 0; i < sub; ++i) {
        offsets[static_cast<std::size_t>(i)] = (static_cast<double>(i) + 0.5) / sub - 0.5;
    }
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double cjx = jx.at(ix, iy);
            const double cjy = jy.at(ix, iy);
            if (cjx == 0.0 && cjy == 0.0) {
                continue;
            }
            const double cx = jx.x_coord(ix);
            const double cy = jx.y_coord(iy);
            for (double oy : offsets) {
                for (double ox : offsets) {
                    sources.push_back({cx + ox * jx.dx, cy + oy * jx.dy, cjx, cjy});
                }
            }
        }
    }

    const double sub_volume = (jx.dx / sub) * (jx.dy / sub) * (delta / sub);
    const double prefactor = kVacuumPermeability / (4.0 * std::numbers::pi) * sub_volume;

    FieldMap out;
    out.plane = target;
    out.bx = ScalarField2D::zeros(nx, ny, jx.dx, jx.dy, z_tgt, ComponentTag::Bx);
    out.by = ScalarField2D::zeros(nx, ny, jx.dx, jx.dy, z_tgt, ComponentTag::By);

    for (int iz = 0; iz < sub; ++iz) {
        const double rz = z_tgt - (z_src + offsets[static_cast<std::size_t>(iz)] * delta);
        const double rz2 = rz * rz;
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const double ty = jx.y_coord(iy);
            for (std::size_t ix = 0; ix < nx; ++ix) {
                const double tx = jx.x_coord(ix);
                double bx_acc = 0.0;
                double by_acc = 0.0;
                for (const SourcePoint& s : sources) {
                    const double rx = tx - s.x;
                    const double ry = ty - s.y;
                    const double r2 = rx * rx + ry * ry + rz2;
                    const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
                    bx_acc += s.jy * rz * inv_r3;
                    by_acc -= s.jx * rz * inv_r3;
                }
                out.bx.at(ix, iy) += prefactor * bx_acc;
                out.by.at(ix, iy) += prefactor * by_acc;
            }
        }
    }
    return out;
}

FieldMap superpose(std::span<const FieldMap> maps) {
    if (maps.empty()) {
        raise(Errc::GridMismatch, "superpose: need at least one field map");
    }
    FieldMap out = maps.front();
    out.ensure_consistent("superpose");
    for (std::size_t i = 1; i < maps.size(); ++i) {
        const FieldMap& m = maps[i];
        m.ensure_consistent("superpose");
        if (m.plane != out.plane || !m.bx.same_grid(out.bx) || m.bx.z != out.bx.z) {
            raise(Errc::GridMismatch, "superpose: maps must share plane, grid and z");
        }
        for (std::size_t j = 0; j < out.bx.values.size(); ++j) {
            out.bx.values[j] += m.bx.values[j];
            out.by.values[j] += m.by.values[j];
        }
    }
    return out;
}

}  // namespace mig
