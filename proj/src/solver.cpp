#include "uscg/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uscg {

void ProjectionSet::validate() const {
    geometry.validate();
    const std::size_t expected = std::size_t(geometry.views) * geometry.lines();
    if (data.size() != expected)
        throw std::invalid_argument("projection data size does not match geometry: got "
                                    + std::to_string(data.size()) + ", expected "
                                    + std::to_string(expected));
    for (double v : data) {
        if (!std::isfinite(v))
            throw std::invalid_argument("projection data contains a non-finite measurement");
        if (v < 0)
            throw std::invalid_argument("projection data contains a negative measurement");
    }
}

double forward_project_line(const Field& field, std::span<const std::uint32_t> active) {
    double sum = 0;
    const double* f = field.values.data();
    for (std::uint32_t idx : active)
        sum += f[idx];
    return sum;
}

UpdateDiag mart_update_line(Field& field, std::span<const std::uint32_t> active,
                            double p_meas, double beta, double p_floor) {
    UpdateDiag diag;
    if (p_meas == 0) {
        diag.skipped = true;
        return diag;
    }
    const double p_bar = forward_project_line(field, active);
    const double ratio = p_meas / std::max(p_bar, p_floor);
    double factor = 1.0 - beta * (1.0 - ratio);
    if (factor <= 0) {
        factor = p_floor;
        diag.clamped = true;
    }
    double* f = field.values.data();
    for (std::uint32_t idx : active)
        f[idx] *= factor;
    return diag;
}

namespace {

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.beta > 0 && cfg.beta < 2))
        throw std::invalid_argument("relaxation must lie in (0, 2)");
    if (!(cfg.f_init > 0))
        throw std::invalid_argument("initial field value must be positive");
    if (cfg.max_sweeps < 1)
        throw std::invalid_argument("sweep budget must be >= 1");
}

double auto_p_floor(const ProjectionSet& proj) {
    double sum = 0;
    std::size_t count = 0;
    for (double v : proj.data) {
        if (v > 0) {
            sum += v;
            ++count;
        }
    }
    return count == 0 ? 1e-12 : 1e-12 * (sum / count);
}

ReconResult run(const ProjectionSet& proj, Field field, const SolverConfig& cfg, const Tracer& tracer) {
    validate_config(cfg);
    proj.validate();
    const GridSpec& spec = field.spec;
    if (tracer.cache().line_count() != proj.geometry.lines())
        throw std::invalid_argument("tracer cache does not match the projection geometry");

    ReconResult result;
    result.report.crossed.assign(spec.cell_count(), 0);

    bool any_data = false;
    for (double v : proj.data)
        if (v != 0) {
            any_data = true;
            break;
        }
    if (!any_data) {
        result.field = std::move(field);
        result.report.all_zero_data = true;
        return result;
    }

    const double p_floor = cfg.p_floor > 0 ? cfg.p_floor : auto_p_floor(proj);
    const int views = proj.geometry.views;
    const int lines = proj.geometry.lines();
    const double step = proj.geometry.step_deg();
    const bool track_residual = cfg.tolerance > 0;

    TraceScratch scratch = tracer.make_scratch();
    std::vector<std::uint32_t> active;
    std::vector<double> prev;
    std::uint8_t* crossed = result.report.crossed.data();

    const auto t0 = std::chrono::steady_clock::now();

    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
        if (track_residual)
            prev = field.values;

        for (int view = 0; view < views; ++view) {
            const double theta = norm360(view * step);
            for (int line = 0; line < lines; ++line) {
                const double p_meas = proj.at(view, line);
                if (p_meas == 0) {
                    if (sweep == 0) {
                        tracer.trace_line(line, theta, scratch, active);
                        for (std::uint32_t idx : active)
                            crossed[idx] = 1;
                    }
                    ++result.report.zero_measurement_skips;
                    continue;
                }
                tracer.trace_line(line, theta, scratch, active);
                if (sweep == 0)
                    for (std::uint32_t idx : active)
                        crossed[idx] = 1;
                const UpdateDiag diag = mart_update_line(field, active, p_meas, cfg.beta, p_floor);
                if (diag.clamped)
                    ++result.report.factor_clamps;
            }
        }
        ++result.report.sweeps;

        if (track_residual) {
            double residual = 0;
            const double* f = field.values.data();
            const double* p = prev.data();
            for (std::size_t i = 0; i < field.values.size(); ++i) {
                if (!crossed[i])
                    continue;
                const double rel = std::abs(f[i] - p[i]) / p[i];
                if (rel > residual)
                    residual = rel;
            }
            result.report.sweep_residuals.push_back(residual);
            if (residual <= cfg.tolerance) {
                result.report.converged = true;
                break;
            }
        }
    }

    result.report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.field = std::move(field);
    return result;
}

}  // namespace

ReconResult reconstruct(const ProjectionSet& proj, const GridSpec& spec, const SolverConfig& cfg,
                        const Tracer& tracer) {
    return run(proj, Field::constant(spec, cfg.f_init), cfg, tracer);
}

ReconResult reconstruct_from(const ProjectionSet& proj, const Field& init, const SolverConfig& cfg,
                             const Tracer& tracer) {
    for (double v : init.values)
        if (!(v > 0))
            throw std::invalid_argument("initial field must be strictly positive");
    return run(proj, init, cfg, tracer);
}

}  // namespace uscg
