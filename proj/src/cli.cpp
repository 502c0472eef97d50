#include "uscg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uscg/bench.hpp"
#include "uscg/io.hpp"
#include "uscg/metrics.hpp"
#include "uscg/phantom.hpp"
#include "uscg/siddon.hpp"
#include "uscg/solver.hpp"
#include "uscg/tracer.hpp"

namespace uscg {

namespace {

struct GlobalOpts {
    int threads = 1;
    std::uint64_t seed = 0;
};

Point3 parse_point(const std::vector<double>& v, const std::string& name) {
    if (v.size() == 2)
        return {v[0], v[1], 0};
    if (v.size() == 3)
        return {v[0], v[1], v[2]};
    throw CLI::ValidationError(name + " needs 2 or 3 comma-separated coordinates");
}

std::filesystem::path slice_path(const std::filesystem::path& base, int slice, int slices) {
    if (slices == 1)
        return base;
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "_s%03d", slice);
    std::filesystem::path p = base;
    const std::string ext = p.extension().string();
    p.replace_extension();
    return p.string() + suffix + ext;
}

std::pair<double, double> value_range(const std::vector<double>& values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    double wmin = *lo, wmax = *hi;
    if (!(wmax > wmin))
        wmax = wmin + 1;
    return {wmin, wmax};
}

void write_slices(const std::filesystem::path& base, const std::vector<Image>& slices,
                  double wmin, double wmax, const Sidecar& config_echo) {
    for (std::size_t s = 0; s < slices.size(); ++s) {
        Sidecar side = config_echo;
        side.set("slice", static_cast<std::int64_t>(s));
        side.set("slices", static_cast<std::int64_t>(slices.size()));
        write_pgm16(slice_path(base, static_cast<int>(s), static_cast<int>(slices.size())),
                    slices[s], wmin, wmax, side);
    }
}

void check_finite(const std::vector<double>& values, const std::string& what) {
    for (double v : values)
        if (!std::isfinite(v))
            throw NumericalError(what + " contains non-finite values");
}

GridSpec make_grid(int n, double r, double h, GridMode mode) {
    GridSpec spec;
    spec.n = n;
    spec.ring_spacing = r > 0 ? r : 2.0 / n;
    spec.slice_height = h > 0 ? h : 2.0 / n;
    spec.mode = mode;
    spec.validate();
    return spec;
}

// ---- phantom ----------------------------------------------------------

struct PhantomArgs {
    std::string kind = "shepp-logan-2d";
    int n = 128;
    double r = 0;
    double h = 0;
    std::string table_path;
    std::string raw_path;
    std::string raw_mode = "2d";
    std::string out;
    std::string cg_out;
    std::string pixel_out;
    bool no_cg = false;
};

int run_phantom(const PhantomArgs& a, const GlobalOpts& g) {
    PhantomSpec phantom;
    phantom.n = a.n;
    GridMode mode;
    if (a.kind == "shepp-logan-2d") {
        phantom.kind = PhantomKind::SheppLogan2D;
        mode = GridMode::Slice2D;
    } else if (a.kind == "shepp-logan-3d") {
        phantom.kind = PhantomKind::SheppLogan3D;
        mode = GridMode::Volume3D;
    } else if (a.kind == "raw-volume") {
        phantom.kind = PhantomKind::RawVolume;
        mode = a.raw_mode == "3d" ? GridMode::Volume3D : GridMode::Slice2D;
    } else {
        throw std::invalid_argument("unknown phantom kind '" + a.kind + "'");
    }

    if (!a.table_path.empty()) {
        auto [table_mode, table] = read_phantom_table(a.table_path);
        mode = table_mode;
        phantom.table = std::move(table);
    }
    const GridSpec spec = make_grid(a.n, a.r, a.h, mode);
    if (phantom.kind == PhantomKind::RawVolume) {
        if (a.raw_path.empty())
            throw std::invalid_argument("raw-volume needs --raw with float32 data in Cartesian order");
        phantom.raw = read_raw_f32(a.raw_path, spec.cell_count());
    }

    const PhantomResult result = generate_phantom(phantom, spec);

    Sidecar echo;
    echo.set("provenance", "phantom " + a.kind);
    echo.set("config.kind", a.kind);
    echo.set("config.n", static_cast<std::int64_t>(a.n));
    echo.set("config.ring_spacing", spec.ring_spacing);
    echo.set("config.slice_height", spec.slice_height);
    if (!a.table_path.empty())
        echo.set("config.table", a.table_path);
    if (!a.raw_path.empty())
        echo.set("config.raw", a.raw_path);
    echo.set("config.threads", static_cast<std::int64_t>(g.threads));
    echo.set("config.seed", static_cast<std::int64_t>(g.seed));
    echo.set("clipped_negative", result.clipped_negative ? "true" : "false");

    write_field(a.out, result.field, echo);

    const auto [wmin, wmax] = value_range(result.field.values);
    if (!a.no_cg) {
        const std::filesystem::path cg =
            a.cg_out.empty() ? std::filesystem::path(a.out).replace_extension(".cg.pgm")
                             : std::filesystem::path(a.cg_out);
        write_slices(cg, field_to_cartesian(result.field), wmin, wmax, echo);
    }
    if (!a.pixel_out.empty())
        write_slices(a.pixel_out, result.cartesian, wmin, wmax, echo);
    return 0;
}

// ---- project ----------------------------------------------------------

struct ProjectArgs {
    std::string field_path;
    int views = 50;
    int det_u = 101;
    int det_v = 1;
    double spacing_u = 0.05;
    double spacing_v = 0;
    std::vector<double> source{-8, 0, 0};
    std::vector<double> center{8, 0, 0};
    std::string model = "binary";
    std::string out;
};

int run_project(const ProjectArgs& a, const GlobalOpts& g) {
    auto [field, field_side] = read_field(a.field_path);

    ScanGeometry geom;
    geom.source = parse_point(a.source, "--source");
    geom.detector_center = parse_point(a.center, "--center");
    geom.det_u = a.det_u;
    geom.det_v = a.det_v;
    geom.spacing_u = a.spacing_u;
    geom.spacing_v = a.spacing_v > 0 ? a.spacing_v : a.spacing_u;
    geom.views = a.views;
    geom.validate();

    ForwardModel model;
    if (a.model == "binary")
        model = ForwardModel::Binary;
    else if (a.model == "length")
        model = ForwardModel::LengthWeighted;
    else
        throw std::invalid_argument("unknown forward model '" + a.model + "'");

    std::optional<Tracer> tracer;
    if (model == ForwardModel::Binary)
        tracer.emplace(geom, field.spec, geom.quarter_symmetric(), g.threads);
    const ProjectionSet proj =
        generate_projections(field, geom, model, tracer ? &*tracer : nullptr);

    Sidecar echo;
    echo.set("provenance", "project " + a.model + " from " + a.field_path);
    echo.set("grid_mode", field.spec.mode == GridMode::Volume3D ? "3d" : "2d");
    echo.set("grid_n", static_cast<std::int64_t>(field.spec.n));
    echo.set("grid_ring_spacing", field.spec.ring_spacing);
    echo.set("grid_slice_height", field.spec.slice_height);
    echo.set("config.model", a.model);
    echo.set("config.views", static_cast<std::int64_t>(a.views));
    echo.set("config.threads", static_cast<std::int64_t>(g.threads));
    echo.set("config.seed", static_cast<std::int64_t>(g.seed));
    if (tracer)
        echo.set("cache_bytes", static_cast<std::int64_t>(tracer->cache().byte_size()));

    write_projections(a.out, proj, echo);
    return 0;
}

// ---- reconstruct ------------------------------------------------------

struct ReconstructArgs {
    std::string proj_path;
    int n = 0;
    double r = 0;
    double h = 0;
    std::string mode = "auto";
    double beta = 0.4;
    double tol = 1e-6;
    int sweeps = 100;
    double f_init = 1.0;
    std::string quarter = "auto";
    std::string out;
    std::string report_path;
};

int run_reconstruct(const ReconstructArgs& a, const GlobalOpts& g) {
    auto [proj, proj_side] = read_projections(a.proj_path);

    GridMode mode;
    if (a.mode == "2d")
        mode = GridMode::Slice2D;
    else if (a.mode == "3d")
        mode = GridMode::Volume3D;
    else if (a.mode == "auto")
        mode = proj.geometry.det_v > 1 ? GridMode::Volume3D : GridMode::Slice2D;
    else
        throw std::invalid_argument("unknown mode '" + a.mode + "'");

    int n = a.n;
    if (n == 0 && proj_side.find("grid_n"))
        n = static_cast<int>(proj_side.get_int("grid_n"));
    if (n == 0)
        throw std::invalid_argument("--n is required when the projection sidecar has no grid_n");
    const GridSpec spec = make_grid(n, a.r, a.h, mode);

    bool quarter;
    if (a.quarter == "on")
        quarter = true;
    else if (a.quarter == "off")
        quarter = false;
    else if (a.quarter == "auto")
        quarter = proj.geometry.quarter_symmetric();
    else
        throw std::invalid_argument("--quarter must be on, off or auto");

    SolverConfig cfg;
    cfg.beta = a.beta;
    cfg.tolerance = a.tol;
    cfg.max_sweeps = a.sweeps;
    cfg.f_init = a.f_init;

    const Tracer tracer(proj.geometry, spec, quarter, g.threads);
    const ReconResult result = reconstruct(proj, spec, cfg, tracer);
    check_finite(result.field.values, "reconstructed field");

    Sidecar echo;
    echo.set("provenance", "reconstruct from " + a.proj_path);
    echo.set("config.beta", a.beta);
    echo.set("config.tolerance", a.tol);
    echo.set("config.max_sweeps", static_cast<std::int64_t>(a.sweeps));
    echo.set("config.f_init", a.f_init);
    echo.set("config.quarter_symmetry", quarter ? "on" : "off");
    echo.set("config.threads", static_cast<std::int64_t>(g.threads));
    echo.set("config.seed", static_cast<std::int64_t>(g.seed));
    echo.set("cache_bytes", static_cast<std::int64_t>(tracer.cache().byte_size()));
    echo.set("cache_records", static_cast<std::int64_t>(tracer.cache().record_count()));
    echo.set("sweeps", static_cast<std::int64_t>(result.report.sweeps));
    echo.set("converged", result.report.converged ? "true" : "false");
    echo.set("seconds", result.report.seconds);

    write_field(a.out, result.field, echo);

    Sidecar report = echo;
    report.set("all_zero_data", result.report.all_zero_data ? "true" : "false");
    report.set("zero_measurement_skips",
               static_cast<std::int64_t>(result.report.zero_measurement_skips));
    report.set("factor_clamps", static_cast<std::int64_t>(result.report.factor_clamps));
    std::size_t crossed = 0;
    for (std::uint8_t c : result.report.crossed)
        crossed += c;
    report.set("crossed_cells", static_cast<std::int64_t>(crossed));
    for (std::size_t i = 0; i < result.report.sweep_residuals.size(); ++i)
        report.set("sweep." + std::to_string(i + 1) + ".residual", result.report.sweep_residuals[i]);
    const std::filesystem::path rpath =
        a.report_path.empty() ? std::filesystem::path(a.out).replace_extension(".report.txt")
                              : std::filesystem::path(a.report_path);
    write_report(rpath, report);

    if (result.report.all_zero_data)
        std::cerr << "warning: all measurements are zero; returning the initial field\n";
    return 0;
}

// ---- map --------------------------------------------------------------

struct MapArgs {
    std::string field_path;
    std::string out;
    double window_min = 0;
    double window_max = 0;
    bool have_window = false;
};

int run_map(const MapArgs& a, const GlobalOpts& g) {
    auto [field, field_side] = read_field(a.field_path);
    double wmin = a.window_min, wmax = a.window_max;
    if (!a.have_window) {
        std::tie(wmin, wmax) = value_range(field.values);
    } else if (!(wmax > wmin)) {
        throw std::invalid_argument("--window-max must exceed --window-min");
    }

    Sidecar echo;
    echo.set("provenance", "map from " + a.field_path);
    echo.set("config.threads", static_cast<std::int64_t>(g.threads));
    echo.set("config.seed", static_cast<std::int64_t>(g.seed));
    write_slices(a.out, field_to_cartesian(field), wmin, wmax, echo);
    return 0;
}

// ---- metrics ----------------------------------------------------------

struct MetricsArgs {
    std::string ref_path;
    std::string test_path;
    std::string out;
    int profile_row = -1;
};

int run_metrics(const MetricsArgs& a, const GlobalOpts& g) {
    auto [ref, ref_side] = read_pgm16(a.ref_path);
    auto [test, test_side] = read_pgm16(a.test_path);

    Sidecar report;
    report.set("ref", a.ref_path);
    report.set("test", a.test_path);
    report.set("mae", mae(ref, test));
    report.set("rmse", rmse(ref, test));
    report.set("ssim", ssim(ref, test, -1, g.threads));
    report.set("area_average.ref", area_average(ref));
    report.set("area_average.test", area_average(test));
    report.set("sharpness.ref", sharpness(ref));
    report.set("sharpness.test", sharpness(test));
    if (a.profile_row >= 0) {
        auto join = [](const std::vector<double>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? " " : "") + std::to_string(v[i]);
            return s;
        };
        report.set("profile.row", static_cast<std::int64_t>(a.profile_row));
        report.set("profile.ref", join(intensity_profile(ref, a.profile_row)));
        report.set("profile.test", join(intensity_profile(test, a.profile_row)));
    }

    for (const auto& [k, v] : report.entries())
        std::cout << k << " = " << v << "\n";
    if (!a.out.empty())
        write_report(a.out, report);
    return 0;
}

// ---- bench ------------------------------------------------------------

struct BenchArgs {
    int n = 256;
    int detectors = 101;
    double spacing = 0.05;
    int views = 50;
    std::vector<int> p_list{10, 50, 100};
    int sweeps = 5;
    double beta = 0.4;
    std::string out;
};

int run_bench(const BenchArgs& a, const GlobalOpts& g) {
    BenchConfig cfg;
    cfg.n = a.n;
    cfg.detectors = a.detectors;
    cfg.spacing = a.spacing;
    cfg.speed_views = a.views;
    cfg.p_values = a.p_list;
    cfg.sweeps = a.sweeps;
    cfg.beta = a.beta;
    cfg.threads = g.threads;

    const BenchReport report = bench_compare(cfg);
    std::cout << report.to_text();
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::trunc);
        if (!f)
            throw IoError("cannot open " + a.out + " for writing");
        f << report.to_text();
    }
    return 0;
}

}  // namespace

int cli(int argc, const char* const* argv) {
    CLI::App app{"algebraic CT reconstruction on uniformly sampled polar/cylindrical grids"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help and exit");

    GlobalOpts global;
    app.add_option("--threads", global.threads, "parallelism budget for tracer/metrics stages")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", global.seed, "seed recorded for randomized data generation");

    PhantomArgs pa;
    CLI::App* phantom = app.add_subcommand("phantom", "generate a test field");
    phantom->set_help_flag("--help", "print help and exit");
    phantom->add_option("--kind", pa.kind, "shepp-logan-2d | shepp-logan-3d | raw-volume");
    phantom->add_option("--n", pa.n, "image size (even)")->required();
    phantom->add_option("--r", pa.r, "ring spacing (default 2/n)");
    phantom->add_option("--h", pa.h, "slice thickness (default 2/n)");
    phantom->add_option("--table", pa.table_path, "phantom parameter table file");
    phantom->add_option("--raw", pa.raw_path, "float32 Cartesian volume for raw-volume");
    phantom->add_option("--raw-mode", pa.raw_mode, "2d | 3d for raw-volume input");
    phantom->add_option("--out", pa.out, "output field file")->required();
    phantom->add_option("--cg", pa.cg_out, "Cartesian companion raster path (default <out>.cg.pgm)");
    phantom->add_option("--pixel-raster", pa.pixel_out, "pixel-center rasterization path");
    phantom->add_flag("--no-cg", pa.no_cg, "skip the Cartesian companion raster");

    ProjectArgs pra;
    CLI::App* project = app.add_subcommand("project", "simulate projections of a field");
    project->set_help_flag("--help", "print help and exit");
    project->add_option("--field", pra.field_path, "input field file")->required();
    project->add_option("--views", pra.views, "number of projections");
    project->add_option("--det-u", pra.det_u, "detector columns");
    project->add_option("--det-v", pra.det_v, "detector rows (1 = fan beam)");
    project->add_option("--spacing-u", pra.spacing_u, "detector column spacing");
    project->add_option("--spacing-v", pra.spacing_v, "detector row spacing (default spacing-u)");
    project->add_option("--source", pra.source, "first-view source position x,y[,z]")
        ->delimiter(',')->expected(2, 3);
    project->add_option("--center", pra.center, "detector panel center x,y[,z]")
        ->delimiter(',')->expected(2, 3);
    project->add_option("--model", pra.model, "binary | length");
    project->add_option("--out", pra.out, "output projection file")->required();

    ReconstructArgs ra;
    CLI::App* recon = app.add_subcommand("reconstruct", "solve for the field from projections");
    recon->set_help_flag("--help", "print help and exit");
    recon->add_option("--proj", ra.proj_path, "input projection file")->required();
    recon->add_option("--n", ra.n, "grid size (default: generating grid from the sidecar)");
    recon->add_option("--r", ra.r, "ring spacing (default 2/n)");
    recon->add_option("--h", ra.h, "slice thickness (default 2/n)");
    recon->add_option("--mode", ra.mode, "2d | 3d | auto");
    recon->add_option("--beta", ra.beta, "relaxation in (0, 2)");
    recon->add_option("--tol", ra.tol, "relative-change stopping tolerance");
    recon->add_option("--sweeps", ra.sweeps, "sweep budget");
    recon->add_option("--f-init", ra.f_init, "initial field value");
    recon->add_option("--quarter", ra.quarter, "quarter-symmetry precompute: on | off | auto");
    recon->add_option("--out", ra.out, "output field file")->required();
    recon->add_option("--report", ra.report_path, "convergence report path");

    MapArgs ma;
    CLI::App* map_cmd = app.add_subcommand("map", "convert a polar field to Cartesian rasters");
    map_cmd->set_help_flag("--help", "print help and exit");
    map_cmd->add_option("--field", ma.field_path, "input field file")->required();
    map_cmd->add_option("--out", ma.out, "output PGM path (per slice in 3D)")->required();
    CLI::Option* wmin_opt = map_cmd->add_option("--window-min", ma.window_min, "raster window minimum");
    map_cmd->add_option("--window-max", ma.window_max, "raster window maximum")->needs(wmin_opt);

    MetricsArgs mea;
    CLI::App* metrics_cmd = app.add_subcommand("metrics", "compare two rasters");
    metrics_cmd->set_help_flag("--help", "print help and exit");
    metrics_cmd->add_option("--ref", mea.ref_path, "reference PGM")->required();
    metrics_cmd->add_option("--test", mea.test_path, "test PGM")->required();
    metrics_cmd->add_option("--out", mea.out, "metric report path");
    metrics_cmd->add_option("--profile-row", mea.profile_row, "also emit this row's intensity profile");

    BenchArgs ba;
    CLI::App* bench_cmd = app.add_subcommand("bench", "compare against the Cartesian baselines");
    bench_cmd->set_help_flag("--help", "print help and exit");
    bench_cmd->add_option("--n", ba.n, "image size");
    bench_cmd->add_option("--detectors", ba.detectors, "detector count");
    bench_cmd->add_option("--spacing", ba.spacing, "detector spacing");
    bench_cmd->add_option("--views", ba.views, "views for the speed comparison");
    bench_cmd->add_option("--p-list", ba.p_list, "view counts for the storage comparison")
        ->delimiter(',');
    bench_cmd->add_option("--sweeps", ba.sweeps, "sweeps per pipeline");
    bench_cmd->add_option("--beta", ba.beta, "relaxation");
    bench_cmd->add_option("--out", ba.out, "report path");

    try {
        app.parse(argc, argv);
        if (wmin_opt->count() > 0)
            ma.have_window = true;

        if (phantom->parsed())
            return run_phantom(pa, global);
        if (project->parsed())
            return run_project(pra, global);
        if (recon->parsed())
            return run_reconstruct(ra, global);
        if (map_cmd->parsed())
            return run_map(ma, global);
        if (metrics_cmd->parsed())
            return run_metrics(mea, global);
        if (bench_cmd->parsed())
            return run_bench(ba, global);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace uscg
