#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uscg/grid.hpp"

namespace uscg {

struct Point3 {
    double x = 0, y = 0, z = 0;
};

inline Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(double s, const Point3& p) { return {s * p.x, s * p.y, s * p.z}; }

double norm(const Point3& p);
double distance(const Point3& a, const Point3& b);

/// Geometric tolerance for duplicate merging and tangency, relative to the
/// image radius.
double geom_eps(const GridSpec& spec);

/// True when the XY projection of the line degenerates to a point.
bool is_axial(const Point3& s, const Point3& d);

/// Perpendicular distance of the XY-projected line to the origin, plus the
/// foot-of-perpendicular parameter t along s -> d.
struct LineFoot {
    double distance = 0;
    double t = 0;
};
LineFoot line_xy_distance(const Point3& s, const Point3& d);  // throws on axial lines

/// Points where the line s -> d crosses the cylinder x^2 + y^2 = radius^2.
/// Empty when the line passes farther than radius from the axis; a single
/// point at tangency.
std::vector<Point3> cylinder_intersections(const Point3& s, const Point3& d, double radius);

/// Crossings of the segment s -> d with the slice boundary planes that fall
/// inside the outer cylinder. Empty in 2D mode or for in-plane rays.
std::vector<Point3> axial_plane_intersections(const Point3& s, const Point3& d, const GridSpec& spec);

/**
 * All boundary crossings of the segment s -> d with the grid: every ring
 * radius and (in 3D) every slice plane, clipped to the volume, sorted by
 * distance to s, with near-coincident points merged. Consecutive entries
 * bound chords that each lie inside exactly one (slice, ring).
 */
std::vector<Point3> build_sorted_intersections(const Point3& s, const Point3& d, const GridSpec& spec);

/// One chord of the first view: the containing slice and ring plus the
/// azimuths of its two endpoints. Rotating a view only shifts the azimuths.
struct SegmentRecord {
    double phi_a = 0;  // degrees in [0, 360)
    double phi_b = 0;
    std::uint16_t slice = 0;
    std::uint16_t ring = 0;  // 1-based

    bool operator==(const SegmentRecord&) const = default;
};

/// Azimuth of (x, y) in degrees, normalized to [0, 360).
double azimuth_deg(double x, double y);

/// Wrap an angle in degrees into [0, 360).
double norm360(double deg);

/// Classify a chord by its midpoint into (slice, ring) and record the
/// endpoint azimuths. Returns nullopt for grazing chords (shorter than the
/// geometric tolerance or with a midpoint outside the volume).
std::optional<SegmentRecord> classify_chord(const Point3& pk, const Point3& pk1, const GridSpec& spec);

/// Exact length of segment s -> d inside one cell (slice, ring, sector),
/// obtained by interval clipping. Used by the length-weighted forward model
/// and as the grazing-chord measure in verification.
double cell_chord_length(const Point3& s, const Point3& d, const GridSpec& spec,
                         int slice, int ring, int sector);

namespace detail {
/// Running count of boundary-crossing builds; lets tests confirm that
/// per-view tracing never re-enters the sqrt/sort geometry kernels.
std::uint64_t geometry_build_count();
}  // namespace detail

}  // namespace uscg
