#pragma once

#include <utility>

#include "uscg/geometry.hpp"

namespace uscg {

/**
 * Divergent-beam acquisition: a point source and a flat detector panel on
 * opposite sides of the grid, rotated together through `views` equal angular
 * steps of 360/views degrees. The stored positions are those of the first
 * view, with the source on the rotation circle at azimuth 180 degrees.
 *
 * Detector element (iu, iv) sits at
 *   center + (iu - (det_u-1)/2) * spacing_u * u_dir
 *          + (iv - (det_v-1)/2) * spacing_v * v_dir
 * where u_dir is the in-plane direction perpendicular to the central ray and
 * v_dir is the +z axis. Lines are indexed in detector order, line = iv*det_u + iu.
 */
struct ScanGeometry {
    Point3 source;
    Point3 detector_center;
    int det_u = 1;
    int det_v = 1;  // 1 for fan beam
    double spacing_u = 0;
    double spacing_v = 0;
    int views = 1;

    double step_deg() const { return 360.0 / views; }
    int lines() const { return det_u * det_v; }

    void validate() const;
    Point3 detector_position(int iu, int iv) const;
    std::pair<Point3, Point3> line_endpoints(int line) const;

    /// True when the first-view panel is mirror-symmetric about both the
    /// source-center axis (y -> -y) and the central transverse plane
    /// (z -> -z): odd detector counts with source and center on the x axis.
    bool quarter_symmetric() const;
};

/// Rotate a point about the z axis by the given angle in degrees.
Point3 rotate_z_deg(const Point3& p, double deg);

}  // namespace uscg
