#include "uscg/tracer.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace uscg {

namespace {

std::vector<SegmentRecord> classify_points(const std::vector<Point3>& pts, const GridSpec& spec) {
    std::vector<SegmentRecord> recs;
    if (pts.size() < 2)
        return recs;
    recs.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (auto rec = classify_chord(pts[i], pts[i + 1], spec))
            recs.push_back(*rec);
    }
    return recs;
}

enum MirrorBits { kMirrorY = 1, kMirrorZ = 2 };

std::vector<Point3> mirror_points(const std::vector<Point3>& pts, int bits) {
    std::vector<Point3> out = pts;
    if (bits & kMirrorY)
        for (Point3& p : out)
            p.y = -p.y;
    if (bits & kMirrorZ)
        for (Point3& p : out)
            p.z = -p.z;
    return out;
}

}  // namespace

FirstViewCache precompute_first_view(const ScanGeometry& geom, const GridSpec& spec,
                                     bool quarter_symmetry, int threads) {
    geom.validate();
    spec.validate();
    if (quarter_symmetry && !geom.quarter_symmetric())
        throw std::invalid_argument(
            "quarter symmetry requires odd detector counts with source and detector center on the x axis");

    const int nu = geom.det_u;
    const int nv = geom.det_v;
    std::vector<std::vector<SegmentRecord>> per_line(geom.lines());

    // with quarter symmetry only the panel quadrant iu >= cu, iv >= cv is intersected
    const int iu_begin = quarter_symmetry ? (nu - 1) / 2 : 0;
    const int iv_begin = quarter_symmetry ? (nv - 1) / 2 : 0;

    auto run = [&](int v_lo, int v_hi) {
        for (int iv = v_lo; iv < v_hi; ++iv) {
            for (int iu = iu_begin; iu < nu; ++iu) {
                const Point3 det = geom.detector_position(iu, iv);
                const std::vector<Point3> pts = build_sorted_intersections(geom.source, det, spec);
                per_line[iv * nu + iu] = classify_points(pts, spec);
                if (!quarter_symmetry)
                    continue;
                const int mu = nu - 1 - iu;
                const int mv = nv - 1 - iv;
                if (mu != iu)
                    per_line[iv * nu + mu] = classify_points(mirror_points(pts, kMirrorY), spec);
                if (mv != iv)
                    per_line[mv * nu + iu] = classify_points(mirror_points(pts, kMirrorZ), spec);
                if (mu != iu && mv != iv)
                    per_line[mv * nu + mu] = classify_points(mirror_points(pts, kMirrorY | kMirrorZ), spec);
            }
        }
    };

    const int v_count = nv - iv_begin;
    if (threads > 1 && v_count > 1) {
        const int workers = std::min(threads, v_count);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            const int lo = iv_begin + v_count * w / workers;
            const int hi = iv_begin + v_count * (w + 1) / workers;
            pool.emplace_back(run, lo, hi);
        }
        for (std::thread& t : pool)
            t.join();
    } else {
        run(iv_begin, nv);
    }

    std::vector<std::uint32_t> offsets(per_line.size() + 1, 0);
    std::size_t total = 0;
    for (std::size_t l = 0; l < per_line.size(); ++l) {
        total += per_line[l].size();
        offsets[l + 1] = static_cast<std::uint32_t>(total);
    }
    std::vector<SegmentRecord> records;
    records.reserve(total);
    for (const auto& recs : per_line)
        records.insert(records.end(), recs.begin(), recs.end());

    return FirstViewCache(std::move(offsets), std::move(records));
}

void trace_chord(const SegmentRecord& rec, double theta_deg, const GridSpec& spec,
                 const RingTable& rings, std::vector<std::uint32_t>& out) {
    const RingLayout& rl = rings[rec.ring];
    const double theta = norm360(theta_deg);
    const int ng = static_cast<int>(rl.cell_count);

    double a = rec.phi_a + theta;
    if (a >= 360.0)
        a -= 360.0;
    double b = rec.phi_b + theta;
    if (b >= 360.0)
        b -= 360.0;

    int ga = static_cast<int>(a * rl.inv_step);
    if (ga >= ng)
        ga = ng - 1;
    int gb = static_cast<int>(b * rl.inv_step);
    if (gb >= ng)
        gb = ng - 1;

    const std::uint32_t base =
        static_cast<std::uint32_t>(rec.slice) * static_cast<std::uint32_t>(spec.cells_per_slice()) + rl.head;

    if (std::abs(a - b) <= 180.0) {
        const int lo = std::min(ga, gb);
        const int hi = std::max(ga, gb);
        for (int g = lo; g <= hi; ++g)
            out.push_back(base + g);
    } else {
        // the chord straddles the ring's head/tail seam: walk from the high
        // endpoint through the seam to the low one
        const int hi = std::max(ga, gb);
        const int lo = std::min(ga, gb);
        for (int g = hi; g < ng; ++g)
            out.push_back(base + g);
        for (int g = 0; g <= lo; ++g)
            out.push_back(base + g);
    }
}

Tracer::Tracer(const ScanGeometry& geom, const GridSpec& spec, bool quarter_symmetry, int threads)
    : geom_(geom), spec_(spec), rings_(spec),
      cache_(precompute_first_view(geom, spec, quarter_symmetry, threads)) {}

void Tracer::trace_line(int line, double theta_deg, TraceScratch& scratch,
                        std::vector<std::uint32_t>& out) const {
    out.clear();
    scratch.begin();

    const double theta = norm360(theta_deg);
    const std::uint32_t per_slice = static_cast<std::uint32_t>(spec_.cells_per_slice());

    for (const SegmentRecord& rec : cache_.line(line)) {
        const RingLayout& rl = rings_[rec.ring];
        const int ng = static_cast<int>(rl.cell_count);

        double a = rec.phi_a + theta;
        if (a >= 360.0)
            a -= 360.0;
        double b = rec.phi_b + theta;
        if (b >= 360.0)
            b -= 360.0;

        int ga = static_cast<int>(a * rl.inv_step);
        if (ga >= ng)
            ga = ng - 1;
        int gb = static_cast<int>(b * rl.inv_step);
        if (gb >= ng)
            gb = ng - 1;

        const std::uint32_t base = rec.slice * per_slice + rl.head;

        if (std::abs(a - b) <= 180.0) {
            const int lo = std::min(ga, gb);
            const int hi = std::max(ga, gb);
            for (int g = lo; g <= hi; ++g) {
                const std::uint32_t idx = base + g;
                if (scratch.mark(idx))
                    out.push_back(idx);
            }
        } else {
            const int hi = std::max(ga, gb);
            const int lo = std::min(ga, gb);
            for (int g = hi; g < ng; ++g) {
                const std::uint32_t idx = base + g;
                if (scratch.mark(idx))
                    out.push_back(idx);
            }
            for (int g = 0; g <= lo; ++g) {
                const std::uint32_t idx = base + g;
                if (scratch.mark(idx))
                    out.push_back(idx);
            }
        }
        ++scratch.chords;
    }
    scratch.cells += out.size();
}

}  // namespace uscg
