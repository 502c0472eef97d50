#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uscg/geometry.hpp"
#include "uscg/grid.hpp"
#include "uscg/scan.hpp"

namespace uscg {

/**
 * Chord records for every line of the first view. This is the only tracing
 * state kept for a scan: all other views reuse it by adding the source angle
 * to the stored azimuths, so its size does not depend on the number of views.
 */
class FirstViewCache {
public:
    FirstViewCache() = default;
    FirstViewCache(std::vector<std::uint32_t> offsets, std::vector<SegmentRecord> records)
        : offsets_(std::move(offsets)), records_(std::move(records)) {}

    int line_count() const { return static_cast<int>(offsets_.size()) - 1; }
    std::span<const SegmentRecord> line(int l) const {
        return {records_.data() + offsets_[l], records_.data() + offsets_[l + 1]};
    }
    std::span<const SegmentRecord> records() const { return records_; }
    std::span<const std::uint32_t> offsets() const { return offsets_; }
    std::size_t record_count() const { return records_.size(); }
    std::size_t byte_size() const {
        return records_.size() * sizeof(SegmentRecord) + offsets_.size() * sizeof(std::uint32_t);
    }
    bool operator==(const FirstViewCache&) const = default;

private:
    std::vector<std::uint32_t> offsets_;  // line l owns records [offsets_[l], offsets_[l+1])
    std::vector<SegmentRecord> records_;
};

/// Build the first-view cache: boundary crossings for every detector line,
/// sorted and classified into chords. With quarter_symmetry only one
/// quadrant of the panel is intersected; the rest is obtained by mirroring
/// the crossing points across y -> -y and z -> -z before classification.
FirstViewCache precompute_first_view(const ScanGeometry& geom, const GridSpec& spec,
                                     bool quarter_symmetry, int threads = 1);

/// Append the cells crossed by one cached chord after rotating its azimuths
/// by theta_deg. No deduplication; cell numbers are slice-offset flat indices.
void trace_chord(const SegmentRecord& rec, double theta_deg, const GridSpec& spec,
                 const RingTable& rings, std::vector<std::uint32_t>& out);

/// Reusable per-thread state for deduplicated line traces, plus counters for
/// the work done while tracing views.
class TraceScratch {
public:
    explicit TraceScratch(std::size_t cell_count) : stamp_(cell_count, 0) {}

    std::uint64_t chords = 0;
    std::uint64_t cells = 0;

private:
    friend class Tracer;
    void begin() {
        if (++gen_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            gen_ = 1;
        }
    }
    bool mark(std::uint32_t idx) {
        if (stamp_[idx] == gen_)
            return false;
        stamp_[idx] = gen_;
        return true;
    }
    std::vector<std::uint32_t> stamp_;
    std::uint32_t gen_ = 0;
};

/**
 * On-the-fly tracer: owns the first-view cache and emits the active cells of
 * any (line, view) pair with binary coefficients. After construction no
 * geometry kernel runs again; a per-view trace costs O(chords + cells).
 */
class Tracer {
public:
    Tracer(const ScanGeometry& geom, const GridSpec& spec, bool quarter_symmetry, int threads = 1);

    const ScanGeometry& geometry() const { return geom_; }
    const GridSpec& spec() const { return spec_; }
    const RingTable& rings() const { return rings_; }
    const FirstViewCache& cache() const { return cache_; }
    TraceScratch make_scratch() const { return TraceScratch(spec_.cell_count()); }

    /// Active cells of one line at source angle theta_deg, deduplicated,
    /// in emission order.
    void trace_line(int line, double theta_deg, TraceScratch& scratch,
                    std::vector<std::uint32_t>& out) const;

private:
    ScanGeometry geom_;
    GridSpec spec_;
    RingTable rings_;
    FirstViewCache cache_;
};

}  // namespace uscg
