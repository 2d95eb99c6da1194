#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "shg/acquisition.hpp"
#include "shg/geometry.hpp"
#include "shg/gomodel.hpp"
#include "shg/imaging.hpp"
#include "shg/stats.hpp"

namespace shg::io {

/// Thrown for any file-system failure; the CLI maps it to exit code 4.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void ensure_dir(const std::filesystem::path& dir);

// --- grid fields -----------------------------------------------------------

/// CSV, row-major: '#' header lines with origin/spacing, then one line per
/// grid row (j ascending).
void write_field_csv(const std::filesystem::path& path, const Grid2D& grid,
                     std::span<const double> values);

/// Raw little-endian float64 grid plus a JSON sidecar (<path>.json) with the
/// grid descriptor and any extra metadata (a JSON object as text).
void write_field_raw(const std::filesystem::path& path, const Grid2D& grid,
                     std::span<const double> values, const std::string& extra_json = "{}");

/// Complex field as interleaved re/im little-endian float64 + sidecar.
void write_field_raw(const std::filesystem::path& path, const Grid2D& grid,
                     std::span<const cplx> values, const std::string& extra_json = "{}");

/// 16-bit binary PGM; values are mapped linearly from [0, max] to [0, 65535].
/// Rows are written top (largest y) first.
void write_pgm16(const std::filesystem::path& path, const Grid2D& grid,
                 std::span<const double> values);

// --- array data ------------------------------------------------------------

/// dir/arraydata.json + dir/d1.bin + dir/d2.bin (column-major complex128);
/// small matrices (<= 4096 entries) additionally get d1.csv/d2.csv.
void write_array_data(const std::filesystem::path& dir, const ArrayData& data);
ArrayData read_array_data(const std::filesystem::path& dir);

// --- images ----------------------------------------------------------------

/// <prefix>.csv, <prefix>.pgm and <prefix>.json (method, params, normalization).
void write_image(const std::filesystem::path& prefix, const ImageGrid& image);
ImageGrid read_image(const std::filesystem::path& prefix);

// --- reports ---------------------------------------------------------------

std::string theory_to_json(const TheoryPrediction& t);
void write_theory(const std::filesystem::path& path, const TheoryPrediction& t);

void write_stability_report(const std::filesystem::path& dir, const StabilityReport& rep);

void write_moment_report(const std::filesystem::path& dir, const MomentReport& rep);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace shg::io
