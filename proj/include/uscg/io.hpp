#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uscg/metrics.hpp"
#include "uscg/phantom.hpp"
#include "uscg/solver.hpp"

namespace uscg {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Human-readable `key = value` companion written next to every binary
/// artifact; preserves insertion order.
class Sidecar {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);
    const std::string* find(const std::string& key) const;
    std::string get(const std::string& key) const;          // throws IoError when missing
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    static std::filesystem::path path_for(const std::filesystem::path& artifact);
    void save(const std::filesystem::path& artifact_path) const;
    static Sidecar load(const std::filesystem::path& artifact_path);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

// Field file: 16-byte header (8-byte magic "USCGFLD\0", u32 version, u32
// reserved), then u64 slices, u64 n, then slices*n*n float32 values in polar
// flat order, all little-endian. The sidecar carries mode, n, ring_spacing,
// slice_height and the producing configuration.
void write_field(const std::filesystem::path& path, const Field& field, Sidecar sidecar);
std::pair<Field, Sidecar> read_field(const std::filesystem::path& path);

// Projection file: same header style with magic "USCGPRJ\0", then u64 views,
// u64 det_u, u64 det_v, then view-major float32 values. The sidecar carries
// the full scan geometry.
void write_projections(const std::filesystem::path& path, const ProjectionSet& proj, Sidecar sidecar);
std::pair<ProjectionSet, Sidecar> read_projections(const std::filesystem::path& path);

// 16-bit binary PGM (P5, maxval 65535, most significant byte first), one
// image per file, rows written top to bottom. Values are windowed linearly
// from [window_min, window_max] onto [0, 65535]; the window goes into the
// sidecar so readers can undo it.
void write_pgm16(const std::filesystem::path& path, const Image& image, double window_min,
                 double window_max, Sidecar sidecar);
std::pair<Image, Sidecar> read_pgm16(const std::filesystem::path& path);  // dewindowed when possible

/// Raw little-endian float32 stream, used for user-supplied volumes.
std::vector<double> read_raw_f32(const std::filesystem::path& path, std::size_t expected);

/// Phantom parameter table: a `uscg-phantom-table v1` header, a mode line,
/// then one shape per line: intensity ax ay az cx cy cz angle_deg.
void write_phantom_table(const std::filesystem::path& path, GridMode mode,
                         const std::vector<EllipsoidParam>& table);
std::pair<GridMode, std::vector<EllipsoidParam>> read_phantom_table(const std::filesystem::path& path);

/// Convergence/metric report as `key = value` text.
void write_report(const std::filesystem::path& path, const Sidecar& report);

}  // namespace uscg
