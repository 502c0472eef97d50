#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uscg/grid.hpp"
#include "uscg/scan.hpp"
#include "uscg/tracer.hpp"

namespace uscg {

/// Unknown cell values in polar/cylindrical flat order, one slice after another.
struct Field {
    GridSpec spec;
    std::vector<double> values;

    static Field constant(const GridSpec& spec, double value) {
        spec.validate();
        return {spec, std::vector<double>(spec.cell_count(), value)};
    }
};

/// Measured or simulated line integrals, view-major then line.
struct ProjectionSet {
    ScanGeometry geometry;
    std::vector<double> data;

    double at(int view, int line) const { return data[std::size_t(view) * geometry.lines() + line]; }
    double& at(int view, int line) { return data[std::size_t(view) * geometry.lines() + line]; }
    void validate() const;  // dimensions match, all values finite and non-negative
};

struct SolverConfig {
    double beta = 0.4;       // relaxation, in (0, 2)
    double tolerance = 1e-6; // relative-change stopping rule; <= 0 runs all sweeps
    int max_sweeps = 100;
    double f_init = 1.0;
    double p_floor = 0;      // guard for the computed projection; <= 0 picks
                             // 1e-12 * mean nonzero measurement
};

struct ReconReport {
    std::vector<double> sweep_residuals;  // max relative change per sweep over crossed cells
    int sweeps = 0;
    bool converged = false;
    bool all_zero_data = false;
    double seconds = 0;
    std::uint64_t zero_measurement_skips = 0;
    std::uint64_t factor_clamps = 0;
    std::vector<std::uint8_t> crossed;    // 1 for cells crossed by at least one line
};

struct ReconResult {
    Field field;
    ReconReport report;
};

/// Sum of the field over a line's active cells (binary coefficients).
double forward_project_line(const Field& field, std::span<const std::uint32_t> active);

struct UpdateDiag {
    bool skipped = false;  // zero measurement, no update applied
    bool clamped = false;  // correction factor fell to the floor
};

/// Apply one multiplicative row correction in place: every active cell is
/// scaled by 1 - beta*(1 - measured/computed). Zero measurements skip the
/// update; a non-positive factor is clamped to p_floor to keep the field
/// positive.
UpdateDiag mart_update_line(Field& field, std::span<const std::uint32_t> active,
                            double p_meas, double beta, double p_floor);

/// Full row-action solve: sweeps views in acquisition order and lines in
/// detector order, tracing coefficients on the fly, until the maximum
/// relative change over crossed cells drops to the tolerance or the sweep
/// budget runs out.
ReconResult reconstruct(const ProjectionSet& proj, const GridSpec& spec, const SolverConfig& cfg,
                        const Tracer& tracer);

/// Field values start at cfg.f_init everywhere except where `init` overrides them.
ReconResult reconstruct_from(const ProjectionSet& proj, const Field& init, const SolverConfig& cfg,
                             const Tracer& tracer);

}  // namespace uscg
