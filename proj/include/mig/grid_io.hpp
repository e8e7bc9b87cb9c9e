#pragma once

#include <filesystem>

#include "mig/field.hpp"

namespace mig {

enum class GridFileFormat { Binary, Csv };

/// Binary layout: magic "MIG1", little-endian u32 nx, u32 ny, f64 dx_m,
/// f64 dy_m, f64 z_m, u8 component tag, then nx*ny f64 values row-major.
/// CSV layout: one `# nx=.. ny=.. dx_m=.. dy_m=.. z_m=.. tag=..` header
/// line, then ny rows of nx comma-separated values at 17 significant
/// digits (lossless for doubles).
///
/// Writes go through a temp file and rename, so readers never observe a
/// partial grid.
void write_grid(const std::filesystem::path& path, const ScalarField2D& f, GridFileFormat format);

/// Reads either format, sniffing the binary magic. Throws Error(IoError)
/// on missing files, bad magic, truncation, or malformed headers.
[[nodiscard]] ScalarField2D read_grid(const std::filesystem::path& path);

[[nodiscard]] const char* grid_file_extension(GridFileFormat format);

}  // namespace mig
