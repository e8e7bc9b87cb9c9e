#include "mig/field.hpp"

#include <cmath>
#include <sstream>

namespace mig {

const char* to_string(ComponentTag tag) {
    switch (tag) {
        case ComponentTag::Bx: return "Bx";
        case ComponentTag::By: return "By";
        case ComponentTag::Jx: return "Jx";
        case ComponentTag::Jy: return "Jy";
    }
    return "?";
}

ComponentTag component_tag_from_string(const std::string& name) {
    if (name == "Bx") return ComponentTag::Bx;
    if (name == "By") return ComponentTag::By;
    if (name == "Jx") return ComponentTag::Jx;
    if (name == "Jy") return ComponentTag::Jy;
    raise(Errc::IoError, "unknown component tag '" + name + "'");
}

ScalarField2D ScalarField2D::zeros(std::size_t nx, std::size_t ny, double dx, double dy,
                                   double z, ComponentTag tag) {
    ScalarField2D f;
    f.nx = nx;
    f.ny = ny;
    f.dx = dx;
    f.dy = dy;
    f.z = z;
    f.tag = tag;
    f.values.assign(nx * ny, 0.0);
    return f;
}

double ScalarField2D::rms() const {
    if (values.empty()) {
        return 0.0;
    }
    double sum_sq = 0.0;
    for (double v : values) {
        sum_sq += v * v;
    }
    return std::sqrt(sum_sq / static_cast<double>(values.size()));
}

void ScalarField2D::ensure_finite(const char* context) const {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            std::ostringstream msg;
            msg << context << ": non-finite sample at flat index " << i;
            raise(Errc::NonFiniteInput, msg.str());
        }
    }
}

void ScalarField2D::ensure_consistent(const char* context) const {
    if (nx == 0 || ny == 0 || values.size() != nx * ny) {
        std::ostringstream msg;
        msg << context << ": field stores " << values.size() << " samples for a " << nx << "x"
            << ny << " grid";
        raise(Errc::ShapeMismatch, msg.str());
    }
    if (!(dx > 0.0) || !(dy > 0.0)) {
        std::ostringstream msg;
        msg << context << ": grid spacing must be positive (dx=" << dx << ", dy=" << dy << ")";
        raise(Errc::ShapeMismatch, msg.str());
    }
}

}  // namespace mig
