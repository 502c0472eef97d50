#include "uscg/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uscg {

void GridSpec::validate() const {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("grid size must be an even integer >= 2, got " + std::to_string(n));
    if (!(ring_spacing > 0))
        throw std::invalid_argument("ring spacing must be positive");
    if (!(slice_height > 0))
        throw std::invalid_argument("slice height must be positive");
}

int ring_grid_count(int ring) {
    if (ring < 1)
        throw std::domain_error("ring index must be >= 1, got " + std::to_string(ring));
    return 4 * (2 * ring - 1);
}

std::uint32_t ring_head(int ring) {
    if (ring < 1)
        throw std::domain_error("ring index must be >= 1, got " + std::to_string(ring));
    // closed form of H_1 = 0, H_{k+1} = H_k + 4(2k - 1)
    std::uint32_t m = static_cast<std::uint32_t>(ring - 1);
    return 4u * m * m;
}

int resolve_index(const RingLayout& ring, long i) {
    long ng = static_cast<long>(ring.cell_count);
    long m = i % ng;
    if (m < 0)
        m += ng;
    return static_cast<int>(m);
}

std::uint32_t flat_index(const GridSpec& spec, const GridAddress& addr) {
    return static_cast<std::uint32_t>(addr.slice) * static_cast<std::uint32_t>(spec.cells_per_slice())
           + ring_head(addr.ring) + static_cast<std::uint32_t>(addr.local);
}

GridAddress decode_flat(const GridSpec& spec, std::uint32_t flat) {
    const std::uint32_t per_slice = static_cast<std::uint32_t>(spec.cells_per_slice());
    GridAddress addr;
    addr.slice = static_cast<int>(flat / per_slice);
    std::uint32_t rem = flat % per_slice;
    // head(k) = 4(k-1)^2 <= rem < 4k^2
    int ring = static_cast<int>(std::sqrt(rem / 4.0)) + 1;
    while (ring > 1 && ring_head(ring) > rem)
        --ring;
    while (ring_head(ring + 1) <= rem)
        ++ring;
    addr.ring = ring;
    addr.local = static_cast<int>(rem - ring_head(ring));
    return addr;
}

RingTable::RingTable(const GridSpec& spec) {
    spec.validate();
    layouts_.reserve(spec.rings());
    for (int k = 1; k <= spec.rings(); ++k) {
        RingLayout layout;
        layout.ring = k;
        layout.cell_count = static_cast<std::uint32_t>(ring_grid_count(k));
        layout.head = ring_head(k);
        layout.step_deg = 360.0 / layout.cell_count;
        layout.inv_step = layout.cell_count / 360.0;
        layouts_.push_back(layout);
    }
}

std::vector<std::uint32_t> uspg_to_cg_map(int n) {
    if (n < 2 || n % 2 != 0)
        throw std::domain_error("image size must be even, got " + std::to_string(n));

    std::vector<std::uint32_t> map(std::size_t(n) * n);
    const int c = n / 2;
    auto pixel = [&](int row, int col) { return static_cast<std::uint32_t>(row) * n + col; };

    for (int k = 1; k <= c; ++k) {
        std::uint32_t flat = ring_head(k);
        // Perimeter of the centred 2k x 2k block, counter-clockwise from the
        // pixel just above the +x axis at the block's right edge.
        for (int t = 0; t < k; ++t)              // right edge, upward
            map[flat++] = pixel(c + t, c + k - 1);
        for (int t = 0; t < 2 * k - 1; ++t)      // top edge, leftward
            map[flat++] = pixel(c + k - 1, c + k - 2 - t);
        for (int t = 0; t < 2 * k - 1; ++t)      // left edge, downward
            map[flat++] = pixel(c + k - 2 - t, c - k);
        for (int t = 0; t < 2 * k - 1; ++t)      // bottom edge, rightward
            map[flat++] = pixel(c - k, c - k + 1 + t);
        for (int t = 0; t < k - 1; ++t)          // right edge again, up to the tail
            map[flat++] = pixel(c - k + 1 + t, c + k - 1);
    }
    return map;
}

}  // namespace uscg
