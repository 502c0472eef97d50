#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace uscg {

enum class GridMode { Slice2D, Volume3D };

/**
 * Geometry of a uniformly sampled polar (2D) or cylindrical (3D) grid.
 *
 * The image space is a disk/cylinder of radius (n/2)*ring_spacing centred on
 * the origin. Ring k (1-based, k <= n/2) is the annulus between radii
 * (k-1)*ring_spacing and k*ring_spacing and holds 4(2k-1) cells, so every
 * cell covers the same area and the grid has constant spatial resolution.
 * In 3D the cylinder is cut into n slices of thickness slice_height,
 * centred on z = 0; a slice is one contiguous block of n*n cells.
 */
struct GridSpec {
    int n = 0;                 // image size; n/2 rings, n slices in 3D
    double ring_spacing = 0;   // radial width of every ring
    double slice_height = 0;   // axial thickness of a slice
    GridMode mode = GridMode::Slice2D;

    void validate() const;     // throws std::invalid_argument

    int rings() const { return n / 2; }
    int slices() const { return mode == GridMode::Volume3D ? n : 1; }
    double radius() const { return 0.5 * n * ring_spacing; }
    double z_extent() const { return mode == GridMode::Volume3D ? n * slice_height : slice_height; }
    // slice classification happens in [0, z_extent) after adding this offset
    double z_offset() const { return 0.5 * z_extent(); }
    std::size_t cells_per_slice() const { return std::size_t(n) * std::size_t(n); }
    std::size_t cell_count() const { return cells_per_slice() * std::size_t(slices()); }

    static GridSpec square_2d(int n) {
        return GridSpec{n, 2.0 / n, 2.0 / n, GridMode::Slice2D};
    }
    static GridSpec cube_3d(int n) {
        return GridSpec{n, 2.0 / n, 2.0 / n, GridMode::Volume3D};
    }
};

/// Layout of one ring: cell count, head cell and azimuthal step.
struct RingLayout {
    int ring = 0;                  // 1-based
    std::uint32_t cell_count = 0;  // 4(2*ring - 1)
    std::uint32_t head = 0;        // flat index of the ring's first cell within a slice
    double step_deg = 0;           // 360 / cell_count
    double inv_step = 0;           // cell_count / 360, used for sector binning
};

/// Address of one cell; flat = slice*n^2 + head(ring) + local.
struct GridAddress {
    int slice = 0;  // 0-based, always 0 in 2D
    int ring = 0;   // 1-based
    int local = 0;  // position within the ring, [0, cell_count)
};

/// Number of cells in ring `ring` (1-based): 4(2*ring - 1).
int ring_grid_count(int ring);

/// Flat index of the first cell of ring `ring` within a slice: 4(ring - 1)^2.
std::uint32_t ring_head(int ring);

/// Wrap a signed circular index into [0, cell_count); negative values count
/// backward from the head, so -1 is the tail.
int resolve_index(const RingLayout& ring, long i);

std::uint32_t flat_index(const GridSpec& spec, const GridAddress& addr);

/// Inverse of flat_index.
GridAddress decode_flat(const GridSpec& spec, std::uint32_t flat);

/**
 * Permutation from polar flat indices to Cartesian pixel indices for an
 * n x n image (row-major, row 0 at the bottom, pixel size = ring spacing).
 * Circular ring k lands on the perimeter of the centred 2k x 2k pixel
 * block; the ring head maps to the perimeter pixel just above the positive
 * x half-axis at maximum column, and both rings are walked counter-clockwise.
 */
std::vector<std::uint32_t> uspg_to_cg_map(int n);

/// Per-ring layout table for one grid; immutable after construction.
class RingTable {
public:
    explicit RingTable(const GridSpec& spec);

    const RingLayout& operator[](int ring) const { return layouts_[ring - 1]; }
    int rings() const { return static_cast<int>(layouts_.size()); }

private:
    std::vector<RingLayout> layouts_;
};

}  // namespace uscg
