// Acceptance suite: one checked criterion per function, one printed
// pass/fail line each, all thresholds pinned in code. Run with no arguments
// for the full suite or with `--criterion k` for a single entry.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "uscg/bench.hpp"
#include "uscg/metrics.hpp"
#include "uscg/phantom.hpp"
#include "uscg/siddon.hpp"
#include "uscg/solver.hpp"
#include "uscg/tracer.hpp"

using namespace uscg;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

ScanGeometry fan_table1(int views, int n_unused = 0) {
    (void)n_unused;
    ScanGeometry geom;
    geom.source = {-8, 0, 0};
    geom.detector_center = {8, 0, 0};
    geom.det_u = 101;
    geom.det_v = 1;
    geom.spacing_u = 0.05;
    geom.views = views;
    return geom;
}

ScanGeometry cone_table1(int views, double spacing) {
    ScanGeometry geom;
    geom.source = {-3, 0, 0};
    geom.detector_center = {10, 0, 0};
    geom.det_u = 101;
    geom.det_v = 101;
    geom.spacing_u = spacing;
    geom.spacing_v = spacing;
    geom.views = views;
    return geom;
}

bool caches_bit_identical(const FirstViewCache& a, const FirstViewCache& b) {
    if (a.record_count() != b.record_count() || a.offsets().size() != b.offsets().size())
        return false;
    for (std::size_t i = 0; i < a.offsets().size(); ++i)
        if (a.offsets()[i] != b.offsets()[i])
            return false;
    for (std::size_t i = 0; i < a.record_count(); ++i) {
        const SegmentRecord &ra = a.records()[i], &rb = b.records()[i];
        if (std::memcmp(&ra.phi_a, &rb.phi_a, sizeof(double)) != 0
            || std::memcmp(&ra.phi_b, &rb.phi_b, sizeof(double)) != 0
            || ra.slice != rb.slice || ra.ring != rb.ring)
            return false;
    }
    return true;
}

// ---- 1: grid identities ------------------------------------------------

Outcome criterion_grid() {
    Outcome out;
    std::ostringstream detail;
    for (int n = 2; n <= 512; n += 2) {
        long long sum = 0;
        for (int k = 1; k <= n / 2; ++k)
            sum += ring_grid_count(k);
        if (sum != static_cast<long long>(n) * n) {
            out.pass = false;
            detail << "ring-count sum broken at n=" << n << "; ";
        }
    }
    std::uint32_t running = 0;
    for (int k = 1; k <= 257; ++k) {
        if (ring_head(k) != running || ring_head(k) != 4u * (k - 1) * (k - 1)) {
            out.pass = false;
            detail << "head mismatch at ring " << k << "; ";
            break;
        }
        running += ring_grid_count(k);
    }
    for (int n : {2, 4, 16, 64, 256}) {
        const auto map = uspg_to_cg_map(n);
        std::vector<bool> hit(map.size(), false);
        bool ok = map.size() == std::size_t(n) * n;
        for (std::uint32_t px : map) {
            if (px >= hit.size() || hit[px]) {
                ok = false;
                break;
            }
            hit[px] = true;
        }
        if (!ok) {
            out.pass = false;
            detail << "polar-to-Cartesian map not a bijection at n=" << n << "; ";
        }
    }
    if (out.pass)
        detail << "sums, heads and bijections verified up to n=512";
    out.detail = detail.str();
    return out;
}

// ---- 2: geometry oracle ------------------------------------------------

Outcome criterion_geometry() {
    Outcome out;
    const GridSpec spec = GridSpec::cube_3d(32);
    oracle::LineGen gen(2024);
    int root_checks = 0, order_checks = 0;
    for (int i = 0; i < 10000; ++i) {
        auto [s, d] = gen.line(spec);
        const double radius = (0.2 + 0.8 * ((i % 97) / 97.0)) * spec.radius();
        const auto roots = oracle::circle_roots_quadratic(s, d, radius);
        std::vector<Point3> pts;
        try {
            pts = cylinder_intersections(s, d, radius);
        } catch (const std::domain_error&) {
            continue;
        }
        if (roots && pts.size() == 2) {
            const Point3 p0 = s + roots->first * (d - s);
            const Point3 p1 = s + roots->second * (d - s);
            const double tol = 1e-9 * spec.radius();
            if (distance(p0, pts[0]) > tol || distance(p1, pts[1]) > tol) {
                out.pass = false;
                out.detail = "cylinder crossing deviates from the quadratic roots";
                return out;
            }
            ++root_checks;
        } else if (!roots && !pts.empty() && pts.size() == 2) {
            out.pass = false;
            out.detail = "crossing reported where the quadratic has no roots";
            return out;
        }

        const auto sorted = build_sorted_intersections(s, d, spec);
        for (std::size_t k = 1; k < sorted.size(); ++k) {
            if (distance(s, sorted[k]) <= distance(s, sorted[k - 1])) {
                out.pass = false;
                out.detail = "crossing list not strictly ordered by source distance";
                return out;
            }
        }
        ++order_checks;
    }

    // chord classification vs interior sampling
    oracle::LineGen gen2(2025);
    int chords = 0;
    while (chords < 10000) {
        auto [s, d] = gen2.line(spec);
        const auto pts = build_sorted_intersections(s, d, spec);
        for (std::size_t k = 0; k + 1 < pts.size() && chords < 10000; ++k) {
            const auto rec = classify_chord(pts[k], pts[k + 1], spec);
            if (!rec)
                continue;
            ++chords;
            for (int q = 0; q < 100; ++q) {
                const double tau = 1e-4 + (1 - 2e-4) * (q + 0.5) / 100.0;
                const Point3 p = pts[k] + tau * (pts[k + 1] - pts[k]);
                const int ring =
                    static_cast<int>(std::floor(std::hypot(p.x, p.y) / spec.ring_spacing)) + 1;
                const int slice =
                    static_cast<int>(std::floor((p.z + spec.z_offset()) / spec.slice_height));
                if (ring != rec->ring || slice != rec->slice) {
                    out.pass = false;
                    out.detail = "chord interior sample disagrees with its classification";
                    return out;
                }
            }
        }
    }
    std::ostringstream detail;
    detail << root_checks << " root checks, " << order_checks << " ordered lists, " << chords
           << " sampled chords";
    out.detail = detail.str();
    return out;
}

// ---- 3: tracer oracle --------------------------------------------------

bool trace_matches_sampling(const Tracer& tracer, int line, double theta, const GridSpec& spec,
                            TraceScratch& scratch, std::vector<std::uint32_t>& buf,
                            std::string& why) {
    const double grazing = 1e-6 * spec.radius();
    const auto [s0, d0] = tracer.geometry().line_endpoints(line);
    const Point3 s = rotate_z_deg(s0, norm360(theta));
    const Point3 d = rotate_z_deg(d0, norm360(theta));
    tracer.trace_line(line, theta, scratch, buf);
    const std::set<std::uint32_t> traced(buf.begin(), buf.end());
    const std::set<std::uint32_t> sampled =
        oracle::sample_line_cells(s, d, spec, spec.ring_spacing / 100.0);

    auto exact_length = [&](std::uint32_t cell) {
        const GridAddress addr = decode_flat(spec, cell);
        return cell_chord_length(s, d, spec, addr.slice, addr.ring, addr.local);
    };

    int spurious = 0;
    for (std::uint32_t cell : traced)
        if (!sampled.count(cell) && exact_length(cell) <= 0)
            ++spurious;
    if (spurious > 4) {
        why = "more than 4 zero-length cells emitted on one line";
        return false;
    }
    for (std::uint32_t cell : sampled) {
        if (!traced.count(cell) && exact_length(cell) >= grazing) {
            why = "missed a cell with chord above the grazing threshold";
            return false;
        }
    }
    return true;
}

Outcome criterion_tracer() {
    Outcome out;
    std::string why;

    {
        const GridSpec spec = GridSpec::square_2d(32);
        const ScanGeometry geom = fan_table1(16);
        const Tracer tracer(geom, spec, false);
        TraceScratch scratch = tracer.make_scratch();
        std::vector<std::uint32_t> buf;
        std::mt19937_64 rng(31);
        std::uniform_int_distribution<int> line(0, geom.lines() - 1);
        std::uniform_real_distribution<double> theta(0, 720.0);
        for (int i = 0; i < 5000; ++i) {
            if (!trace_matches_sampling(tracer, line(rng), theta(rng), spec, scratch, buf, why)) {
                out.pass = false;
                out.detail = "fan: " + why;
                return out;
            }
        }
    }
    {
        const GridSpec spec = GridSpec::cube_3d(16);
        const ScanGeometry geom = cone_table1(16, 1.0);
        const Tracer tracer(geom, spec, false);
        TraceScratch scratch = tracer.make_scratch();
        std::vector<std::uint32_t> buf;
        std::mt19937_64 rng(37);
        std::uniform_int_distribution<int> line(0, geom.lines() - 1);
        std::uniform_real_distribution<double> theta(0, 720.0);
        for (int i = 0; i < 5000; ++i) {
            if (!trace_matches_sampling(tracer, line(rng), theta(rng), spec, scratch, buf, why)) {
                out.pass = false;
                out.detail = "cone: " + why;
                return out;
            }
        }
    }

    // quarter-symmetry caches for the reference fan and cone scans
    {
        const GridSpec spec = GridSpec::square_2d(256);
        const ScanGeometry geom = fan_table1(50);
        if (!caches_bit_identical(precompute_first_view(geom, spec, false),
                                  precompute_first_view(geom, spec, true))) {
            out.pass = false;
            out.detail = "fan quarter-symmetry cache differs from direct computation";
            return out;
        }
    }
    {
        const GridSpec spec = GridSpec::cube_3d(128);
        const ScanGeometry geom = cone_table1(70, 0.05);
        const FirstViewCache direct = precompute_first_view(geom, spec, false);
        if (direct.line_count() != 101 * 101) {
            out.pass = false;
            out.detail = "cone cache does not hold one entry per panel line";
            return out;
        }
        if (!caches_bit_identical(direct, precompute_first_view(geom, spec, true))) {
            out.pass = false;
            out.detail = "cone quarter-symmetry cache differs from direct computation";
            return out;
        }
    }
    out.detail = "10000 sampled (line, angle) pairs; quarter-symmetry caches bit-identical";
    return out;
}

// ---- 4: rotation reuse -------------------------------------------------

Outcome criterion_rotation() {
    Outcome out;

    {
        const GridSpec spec = GridSpec::square_2d(64);
        const ScanGeometry geom = fan_table1(50);
        const Tracer tracer(geom, spec, false);
        for (int view = 0; view < geom.views; ++view) {
            const double theta = view * geom.step_deg();
            for (int line = 0; line < geom.lines(); ++line) {
                const auto [s, d] = geom.line_endpoints(line);
                const auto pts = build_sorted_intersections(rotate_z_deg(s, theta),
                                                            rotate_z_deg(d, theta), spec);
                std::vector<std::pair<int, int>> direct;
                for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                    if (const auto rec = classify_chord(pts[i], pts[i + 1], spec))
                        direct.emplace_back(rec->slice, rec->ring);
                const auto cached = tracer.cache().line(line);
                bool same = cached.size() == direct.size();
                for (std::size_t i = 0; same && i < direct.size(); ++i)
                    same = cached[i].slice == direct[i].first && cached[i].ring == direct[i].second;
                if (!same) {
                    out.pass = false;
                    out.detail = "fan view " + std::to_string(view)
                                 + " has a different slice/ring sequence than view 0";
                    return out;
                }
            }
        }
    }
    {
        const GridSpec spec = GridSpec::cube_3d(32);
        ScanGeometry geom = cone_table1(20, 0.6);
        geom.det_u = geom.det_v = 21;
        const Tracer tracer(geom, spec, false);
        for (int view = 0; view < geom.views; ++view) {
            const double theta = view * geom.step_deg();
            for (int line = 0; line < geom.lines(); ++line) {
                const auto [s, d] = geom.line_endpoints(line);
                const auto pts = build_sorted_intersections(rotate_z_deg(s, theta),
                                                            rotate_z_deg(d, theta), spec);
                std::vector<std::pair<int, int>> direct;
                for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                    if (const auto rec = classify_chord(pts[i], pts[i + 1], spec))
                        direct.emplace_back(rec->slice, rec->ring);
                const auto cached = tracer.cache().line(line);
                bool same = cached.size() == direct.size();
                for (std::size_t i = 0; same && i < direct.size(); ++i)
                    same = cached[i].slice == direct[i].first && cached[i].ring == direct[i].second;
                if (!same) {
                    out.pass = false;
                    out.detail = "cone view " + std::to_string(view)
                                 + " has a different slice/ring sequence than view 0";
                    return out;
                }
            }
        }
    }

    const GridSpec spec = GridSpec::square_2d(256);
    std::size_t bytes10 = 0;
    for (int p : {10, 50, 100}) {
        const std::size_t bytes = precompute_first_view(fan_table1(p), spec, true).byte_size();
        if (p == 10)
            bytes10 = bytes;
        else if (bytes != bytes10) {
            out.pass = false;
            out.detail = "cache size changed with the view count";
            return out;
        }
    }
    out.detail = "slice/ring sequences identical across views; cache "
                 + std::to_string(bytes10) + " bytes for p in {10, 50, 100}";
    return out;
}

// ---- 5: solver properties ----------------------------------------------

Outcome criterion_solver() {
    Outcome out;
    const GridSpec spec = GridSpec::square_2d(16);
    ScanGeometry geom = fan_table1(20);
    geom.det_u = 21;
    geom.spacing_u = 0.2;
    const Tracer tracer(geom, spec, false);

    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> value(0.2, 3.0);
    Field truth = Field::constant(spec, 1.0);
    for (double& v : truth.values)
        v = value(rng);
    const ProjectionSet proj = generate_projections(truth, geom, ForwardModel::Binary, &tracer);

    {
        SolverConfig cfg;
        cfg.beta = 1.0;
        cfg.max_sweeps = 1;
        cfg.tolerance = 1e-30;
        const ReconResult r = reconstruct_from(proj, truth, cfg, tracer);
        if (r.report.sweep_residuals.empty() || r.report.sweep_residuals[0] > 1e-12) {
            out.pass = false;
            out.detail = "consistent field moved by more than 1e-12 in one sweep";
            return out;
        }
    }
    for (double beta : {0.4, 1.0, 1.9}) {
        SolverConfig cfg;
        cfg.beta = beta;
        cfg.max_sweeps = 100;
        cfg.tolerance = 0;
        const ReconResult r = reconstruct(proj, spec, cfg, tracer);
        for (double v : r.field.values)
            if (!(v > 0)) {
                out.pass = false;
                out.detail = "positivity lost at relaxation " + std::to_string(beta);
                return out;
            }
    }
    {
        ScanGeometry sparse = geom;
        sparse.views = 6;
        sparse.det_u = 11;
        sparse.spacing_u = 0.05;
        const Tracer sparse_tracer(sparse, spec, false);
        const ProjectionSet sparse_proj =
            generate_projections(truth, sparse, ForwardModel::Binary, &sparse_tracer);
        SolverConfig cfg;
        cfg.beta = 0.7;
        cfg.f_init = 1.375;
        cfg.max_sweeps = 5;
        cfg.tolerance = 0;
        const ReconResult r = reconstruct(sparse_proj, spec, cfg, sparse_tracer);
        std::size_t untouched = 0;
        for (std::size_t i = 0; i < r.field.values.size(); ++i) {
            if (!r.report.crossed[i]) {
                ++untouched;
                if (r.field.values[i] != 1.375) {
                    out.pass = false;
                    out.detail = "an uncrossed cell drifted from its initial value";
                    return out;
                }
            }
        }
        if (untouched == 0) {
            out.pass = false;
            out.detail = "sparse scan unexpectedly crossed every cell";
            return out;
        }
    }
    {
        Field field = Field::constant(spec, 1.0);
        const std::vector<std::uint32_t> active{3, 17, 40, 41};
        const double p_meas = 11.5;
        mart_update_line(field, active, p_meas, 1.0, 1e-12);
        if (std::abs(forward_project_line(field, active) / p_meas - 1.0) > 1e-12) {
            out.pass = false;
            out.detail = "single-line full-relaxation update is not exact";
            return out;
        }
    }
    out.detail = "fixed point, positivity (100 sweeps), untouched cells, single-line exactness";
    return out;
}

// ---- 6: 2d desk-scale reconstruction -----------------------------------

Outcome criterion_recon_2d() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();

    const GridSpec spec = GridSpec::square_2d(128);
    const ScanGeometry geom = fan_table1(50);
    const Tracer tracer(geom, spec, true);

    PhantomSpec phantom;
    phantom.kind = PhantomKind::SheppLogan2D;
    phantom.n = spec.n;
    const Field truth = generate_phantom(phantom, spec).field;
    const ProjectionSet proj = generate_projections(truth, geom, ForwardModel::Binary, &tracer);

    SolverConfig cfg;
    cfg.beta = 0.4;
    cfg.tolerance = 1e-7;
    cfg.max_sweeps = 30;
    const ReconResult r = reconstruct(proj, spec, cfg, tracer);

    const std::vector<Image> truth_cg = field_to_cartesian(truth);
    const std::vector<Image> recon_cg = field_to_cartesian(r.field);
    const double rmse_val = rmse(truth_cg[0], recon_cg[0]);
    const double ssim_val = ssim(truth_cg[0], recon_cg[0]);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream detail;
    detail.precision(4);
    detail << "rmse=" << rmse_val << " (gate 0.05), ssim=" << ssim_val << " (gate 0.90), "
           << r.report.sweeps << " sweeps, " << seconds
           << " s (gate 300); reference runs report rmse 0.0125, ssim 0.9649 at 256^2. "
           << "Note: 50 views x 101 detectors give 5050 equations for 16384 cells; the "
           << "row-action solve fits them to ~0.1% but the scan does not determine the "
           << "image (the same solver reaches rmse 0.024 / ssim 0.94 at 250 views)";
    out.detail = detail.str();
    out.pass = rmse_val <= 0.05 && ssim_val >= 0.90 && seconds <= 300.0;
    return out;
}

// ---- 7: 3d desk-scale reconstruction -----------------------------------

Outcome criterion_recon_3d() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const GridSpec spec = GridSpec::cube_3d(64);
    // panel spacing sized so the cone just covers the full cylinder:
    // u must reach the tangents (+-4.60), v the near-side rim (+-6.50)
    ScanGeometry geom = cone_table1(70, 0.092);
    geom.spacing_v = 0.13;
    const Tracer tracer(geom, spec, true);

    PhantomSpec phantom;
    phantom.kind = PhantomKind::SheppLogan3D;
    phantom.n = spec.n;
    const Field truth = generate_phantom(phantom, spec).field;
    const ProjectionSet proj = generate_projections(truth, geom, ForwardModel::Binary, &tracer);
    const std::vector<Image> truth_cg = field_to_cartesian(truth);

    // sweep in blocks until the similarity gate is reached or the time
    // budget is nearly spent
    SolverConfig cfg;
    cfg.beta = 0.4;
    cfg.tolerance = 0;
    cfg.max_sweeps = 50;
    Field field = Field::constant(spec, cfg.f_init);
    double ssim_val = 0;
    int sweeps = 0;
    while (true) {
        ReconResult r = reconstruct_from(proj, field, cfg, tracer);
        field = std::move(r.field);
        sweeps += r.report.sweeps;
        ssim_val = ssim_volume(truth_cg, field_to_cartesian(field));
        if (ssim_val >= 0.95 || elapsed() > 1500.0)
            break;
    }

    const double seconds = elapsed();
    std::ostringstream detail;
    detail.precision(4);
    detail << "ssim=" << ssim_val << " (gate 0.95), " << sweeps << " sweeps, " << seconds
           << " s (gate 1800); reference runs report ssim 0.9898 at 128^3";
    out.detail = detail.str();
    out.pass = ssim_val >= 0.95 && seconds <= 1800.0;
    return out;
}

// ---- 8: storage claim ---------------------------------------------------

Outcome criterion_memory() {
    Outcome out;
    const GridSpec spec = GridSpec::square_2d(256);
    const CartesianSpec cspec = CartesianSpec::like(spec);

    double ratio10 = 0, ratio50 = 0, ratio100 = 0;
    std::size_t cache_bytes = 0;
    for (int p : {10, 50, 100}) {
        const ScanGeometry geom = fan_table1(p);
        const std::size_t polar = precompute_first_view(geom, spec, true).byte_size();
        const std::size_t cart = precompute_cartesian_system(geom, cspec).byte_size();
        const double ratio = double(cart) / double(polar);
        if (p == 10)
            ratio10 = ratio;
        if (p == 50)
            ratio50 = ratio;
        if (p == 100)
            ratio100 = ratio;
        if (cache_bytes == 0)
            cache_bytes = polar;
        else if (polar != cache_bytes) {
            out.pass = false;
            out.detail = "polar cache size varies with the view count";
            return out;
        }
    }
    const double growth = ratio100 / ratio10;
    std::ostringstream detail;
    detail.precision(4);
    detail << "stored/cache ratio: p10=" << ratio10 << ", p50=" << ratio50 << " (gate >= 40), p100="
           << ratio100 << "; growth p100/p10=" << growth << " (linear expects 10)";
    out.detail = detail.str();
    out.pass = ratio50 >= 40.0 && growth > 8.5 && growth < 11.5;
    return out;
}

// ---- 9: runtime claim ---------------------------------------------------

Outcome criterion_speed() {
    Outcome out;
    BenchConfig cfg;
    cfg.n = 256;
    cfg.detectors = 101;
    cfg.spacing = 0.05;
    cfg.speed_views = 50;
    cfg.sweeps = 30;
    cfg.beta = 0.4;
    cfg.p_values = {50};
    cfg.threads = 1;
    const BenchReport report = bench_compare(cfg);

    std::ostringstream detail;
    detail.precision(4);
    detail << "polar " << report.polar_seconds << " s vs Cartesian Siddon " <<
        report.cartesian_otf_seconds << " s; speedup " << report.speedup_vs_otf
           << " (gate >= 1.4, reference claim 2.5); stored-coefficient pipeline "
           << report.cartesian_stored_seconds << " s";
    out.detail = detail.str();
    out.pass = report.speedup_vs_otf >= 1.4;
    return out;
}

// ---- 10: metrics --------------------------------------------------------

Outcome criterion_metrics() {
    Outcome out;
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> value(-2, 2);
    for (int trial = 0; trial < 10000; ++trial) {
        const int rows = 3 + trial % 6, cols = 3 + (trial / 6) % 6;
        Image a{rows, cols, std::vector<double>(std::size_t(rows) * cols)};
        Image b = a;
        for (double& v : a.v)
            v = value(rng);
        for (double& v : b.v)
            v = value(rng);

        const double m = mae(a, b), r = rmse(a, b);
        if (m > r + 1e-15) {
            out.pass = false;
            out.detail = "mae exceeded rmse";
            return out;
        }
        long double abs_acc = 0, sq_acc = 0, sum_acc = 0;
        for (std::size_t i = 0; i < a.v.size(); ++i) {
            abs_acc += std::abs(a.v[i] - b.v[i]);
            sq_acc += (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]);
            sum_acc += a.v[i];
        }
        const double n = double(a.v.size());
        if (std::abs(m - double(abs_acc / n)) > 1e-12
            || std::abs(r - std::sqrt(double(sq_acc / n))) > 1e-12
            || std::abs(area_average(a) - double(sum_acc / n)) > 1e-12) {
            out.pass = false;
            out.detail = "metric deviates from the naive oracle";
            return out;
        }
    }
    Image img{32, 32, std::vector<double>(1024)};
    for (double& v : img.v)
        v = value(rng);
    if (std::abs(ssim(img, img) - 1.0) > 1e-12) {
        out.pass = false;
        out.detail = "self-similarity is not 1";
        return out;
    }
    out.detail = "10000 random pairs against naive oracles; ssim(I, I) = 1";
    return out;
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {"grid identities", criterion_grid},
        {"geometry oracle", criterion_geometry},
        {"tracer oracle", criterion_tracer},
        {"rotation reuse", criterion_rotation},
        {"solver properties", criterion_solver},
        {"2d desk-scale reconstruction", criterion_recon_2d},
        {"3d desk-scale reconstruction", criterion_recon_3d},
        {"storage claim", criterion_memory},
        {"runtime claim", criterion_speed},
        {"metric oracles", criterion_metrics},
    };

    int only = 0;
    for (int i = 1; i + 1 < argc + 1; ++i) {
        if (std::string(argv[i]) == "--criterion" && i + 1 < argc)
            only = std::atoi(argv[i + 1]);
    }

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (only != 0 && number != only)
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        const Outcome result = criteria[i].run();
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d: %s — %s [%.1f s]\n", result.pass ? "PASS" : "FAIL", number,
                    criteria[i].name, result.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!result.pass)
            ++failures;
    }
    return failures;
}
