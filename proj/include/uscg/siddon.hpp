#pragma once

#include <cstdint>
#include <vector>

#include "uscg/solver.hpp"

namespace uscg {

/// Axis-aligned Cartesian voxel grid with cubic voxels.
struct CartesianSpec {
    int nx = 0, ny = 0, nz = 1;
    double voxel = 0;
    Point3 origin;  // minimum corner

    void validate() const;
    std::size_t voxel_count() const { return std::size_t(nx) * ny * std::size_t(nz); }
    std::uint32_t flat(int ix, int iy, int iz) const {
        return (static_cast<std::uint32_t>(iz) * ny + iy) * nx + ix;
    }

    /// Grid of n x n voxels (x 1 slice in 2D) covering the same square/cube
    /// as a polar grid of radius (n/2)*r.
    static CartesianSpec like(const GridSpec& spec);
};

/// Exact radiological path of segment s -> d: every crossed voxel with its
/// chord length. Output vectors are cleared first.
void siddon_trace(const Point3& s, const Point3& d, const CartesianSpec& cspec,
                  std::vector<std::uint32_t>& idx, std::vector<double>& len);

/// Precomputed Siddon coefficients for every (view, line) of a scan; the
/// memory-heavy comparator whose footprint grows linearly with the view count.
struct CartesianSystem {
    std::vector<std::uint64_t> offsets;  // (view*lines + line) -> first entry
    std::vector<std::uint32_t> idx;
    std::vector<double> weight;

    std::size_t byte_size() const {
        return offsets.size() * sizeof(std::uint64_t) + idx.size() * sizeof(std::uint32_t)
               + weight.size() * sizeof(double);
    }
};

CartesianSystem precompute_cartesian_system(const ScanGeometry& geom, const CartesianSpec& cspec);

struct CartesianMartResult {
    std::vector<double> values;
    int sweeps = 0;
    double seconds = 0;
};

/// Row-action MART on the Cartesian grid with length-weighted forward
/// projection; coefficients recomputed with Siddon on every pass.
CartesianMartResult cartesian_mart_otf(const ProjectionSet& proj, const CartesianSpec& cspec,
                                       const SolverConfig& cfg);

/// Same solve driven from precomputed coefficients.
CartesianMartResult cartesian_mart_stored(const ProjectionSet& proj, const CartesianSpec& cspec,
                                          const CartesianSystem& system, const SolverConfig& cfg);

}  // namespace uscg
