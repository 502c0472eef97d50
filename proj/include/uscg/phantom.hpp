#pragma once

#include <string>
#include <vector>

#include "uscg/metrics.hpp"
#include "uscg/solver.hpp"

namespace uscg {

/// One additive ellipse/ellipsoid: rotation is about the z axis, intensity
/// adds wherever the point falls inside.
struct EllipsoidParam {
    double intensity = 0;
    double ax = 0, ay = 0, az = 0;  // semi-axes (az ignored in 2D)
    double cx = 0, cy = 0, cz = 0;  // center (cz ignored in 2D)
    double angle_deg = 0;
};

enum class PhantomKind { SheppLogan2D, SheppLogan3D, RawVolume };

struct PhantomSpec {
    PhantomKind kind = PhantomKind::SheppLogan2D;
    int n = 0;
    std::vector<EllipsoidParam> table;  // empty selects the built-in table
    std::vector<double> raw;            // RawVolume: Cartesian values, row-major per slice
};

/// Built-in parameter tables in the coordinates of the unit-radius image.
const std::vector<EllipsoidParam>& shepp_logan_2d_table();
const std::vector<EllipsoidParam>& shepp_logan_3d_table();

/// Phantom function value at a point: the sum of the intensities of the
/// shapes containing it (negatives are clipped at field assembly).
double phantom_value(const std::vector<EllipsoidParam>& table, bool volume,
                     double x, double y, double z);

struct PhantomResult {
    Field field;                   // cell-centroid samples in polar flat order
    std::vector<Image> cartesian;  // pixel-center samples, one image per slice
    bool clipped_negative = false;
};

PhantomResult generate_phantom(const PhantomSpec& phantom, const GridSpec& spec);

enum class ForwardModel { Binary, LengthWeighted };

/// Simulate projections. The binary model sums the field over the same
/// active cells the reconstruction traces; the length-weighted model
/// integrates chord lengths through each cell from the sorted crossing list.
ProjectionSet generate_projections(const Field& field, const ScanGeometry& geom,
                                   ForwardModel model, const Tracer* tracer = nullptr);

/// Convert a polar field to Cartesian rasters through the one-to-one map,
/// one image per slice.
std::vector<Image> field_to_cartesian(const Field& field);

/// Inverse of field_to_cartesian: Cartesian rasters to a polar field.
Field cartesian_to_field(const std::vector<Image>& slices, const GridSpec& spec);

}  // namespace uscg
