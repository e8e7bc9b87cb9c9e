#pragma once

#include <stdexcept>
#include <string>

namespace mig {

/// Error categories surfaced by the library. The CLI maps these onto
/// process exit codes, so additions here should stay coarse-grained.
enum class Errc {
    LayerOverlap,
    InvasivePlane,
    NonPositiveThickness,
    NonFiniteInput,
    ShapeMismatch,
    GridMismatch,
    InvalidPlane,
    TargetInsideSource,
    SingularBin,
    SameSidePlanes,
    NonFiniteResult,
    StripOutOfBounds,
    ConfigError,
    IoError,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace mig
