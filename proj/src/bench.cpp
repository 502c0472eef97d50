#include "uscg/bench.hpp"

#include <chrono>
#include <sstream>

#include "uscg/phantom.hpp"

namespace uscg {

namespace {

ScanGeometry make_geometry(const BenchConfig& cfg, int views) {
    ScanGeometry geom;
    geom.source = cfg.source;
    geom.detector_center = cfg.center;
    geom.det_u = cfg.detectors;
    geom.det_v = 1;
    geom.spacing_u = cfg.spacing;
    geom.views = views;
    return geom;
}

}  // namespace

BenchReport bench_compare(const BenchConfig& cfg) {
    BenchReport report;
    report.config = cfg;

    const GridSpec spec = GridSpec::square_2d(cfg.n);
    const CartesianSpec cspec = CartesianSpec::like(spec);

    for (int p : cfg.p_values) {
        const ScanGeometry geom = make_geometry(cfg, p);
        BenchMemoryRow row;
        row.views = p;
        row.polar_cache_bytes =
            precompute_first_view(geom, spec, geom.quarter_symmetric(), cfg.threads).byte_size();
        row.cartesian_stored_bytes = precompute_cartesian_system(geom, cspec).byte_size();
        row.ratio = double(row.cartesian_stored_bytes) / double(row.polar_cache_bytes);
        report.memory.push_back(row);
    }

    // speed: identical scans, phantom data from the binary forward model,
    // a fixed number of sweeps on each pipeline
    const ScanGeometry geom = make_geometry(cfg, cfg.speed_views);
    PhantomSpec phantom;
    phantom.kind = PhantomKind::SheppLogan2D;
    phantom.n = cfg.n;
    const Field truth = generate_phantom(phantom, spec).field;

    Tracer tracer(geom, spec, geom.quarter_symmetric(), cfg.threads);
    const ProjectionSet proj = generate_projections(truth, geom, ForwardModel::Binary, &tracer);

    SolverConfig scfg;
    scfg.beta = cfg.beta;
    scfg.max_sweeps = cfg.sweeps;
    scfg.tolerance = 0;  // fixed sweep count on both sides

    {
        const auto t0 = std::chrono::steady_clock::now();
        Tracer timed_tracer(geom, spec, geom.quarter_symmetric(), cfg.threads);
        ReconResult r = reconstruct(proj, spec, scfg, timed_tracer);
        report.polar_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        (void)r;
    }
    {
        CartesianMartResult r = cartesian_mart_otf(proj, cspec, scfg);
        report.cartesian_otf_seconds = r.seconds;
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const CartesianSystem sys = precompute_cartesian_system(geom, cspec);
        CartesianMartResult r = cartesian_mart_stored(proj, cspec, sys, scfg);
        report.cartesian_stored_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        (void)r;
    }

    report.speedup_vs_otf = report.cartesian_otf_seconds / report.polar_seconds;
    report.speedup_vs_stored = report.cartesian_stored_seconds / report.polar_seconds;
    return report;
}

std::string BenchReport::to_text() const {
    std::ostringstream out;
    out << "n = " << config.n << "\n"
        << "detectors = " << config.detectors << "\n"
        << "spacing = " << config.spacing << "\n"
        << "sweeps = " << config.sweeps << "\n"
        << "speed_views = " << config.speed_views << "\n";
    for (const BenchMemoryRow& row : memory) {
        out << "memory.p" << row.views << ".polar_cache_bytes = " << row.polar_cache_bytes << "\n"
            << "memory.p" << row.views << ".cartesian_stored_bytes = " << row.cartesian_stored_bytes
            << "\n"
            << "memory.p" << row.views << ".ratio = " << row.ratio << "\n";
    }
    out << "speed.polar_seconds = " << polar_seconds << "\n"
        << "speed.cartesian_otf_seconds = " << cartesian_otf_seconds << "\n"
        << "speed.cartesian_stored_seconds = " << cartesian_stored_seconds << "\n"
        << "speed.speedup_vs_otf = " << speedup_vs_otf << "\n"
        << "speed.speedup_vs_stored = " << speedup_vs_stored << "\n";
    return out.str();
}

}  // namespace uscg
