#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mig/geometry.hpp"
#include "mig/grid_io.hpp"
#include "mig/recon_config.hpp"
#include "mig/scenarios.hpp"

namespace mig {

struct NoiseConfig {
    double sigma{0.0};       ///< tesla
    std::uint64_t seed{1};   ///< per-plane streams derive from this
};

struct OutputConfig {
    std::filesystem::path dir{"out"};
    GridFileFormat format{GridFileFormat::Binary};
    bool write_truth{true};
};

/// Fully parsed run configuration. Lengths in the file are millimeters
/// (keys carry an _mm suffix); everything here is SI.
struct RunConfig {
    StackGeometry geometry;
    GridSpec grid;
    std::vector<StripSpec> strips;
    ReconstructionConfig recon;
    NoiseConfig noise;
    OutputConfig output;

    std::string tool_version;  ///< populated when loading a manifest
    std::string rng_name;
};

/// Strict INI-style parser: unknown sections or keys are fatal, values
/// must parse completely. [strip] sections may repeat. Geometry is parsed
/// but NOT validated here, so diagnostic commands can accept deliberately
/// degenerate placements.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Writes the fully resolved configuration (every default materialized,
/// auto k_cut replaced by its numeric value for the given geometry when
/// resolvable) plus run metadata. The output is itself a loadable config,
/// and re-running from it reproduces the original outputs bit-identically.
void write_manifest(const std::filesystem::path& path, const RunConfig& cfg);

[[nodiscard]] const char* tool_version();

}  // namespace mig
