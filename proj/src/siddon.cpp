#include "uscg/siddon.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uscg {

void CartesianSpec::validate() const {
    if (nx < 1 || ny < 1 || nz < 1)
        throw std::invalid_argument("voxel counts must be >= 1");
    if (!(voxel > 0))
        throw std::invalid_argument("voxel size must be positive");
}

CartesianSpec CartesianSpec::like(const GridSpec& spec) {
    spec.validate();
    CartesianSpec c;
    c.nx = c.ny = spec.n;
    c.voxel = spec.ring_spacing;
    if (spec.mode == GridMode::Volume3D) {
        c.nz = spec.n;
        c.origin = {-spec.radius(), -spec.radius(), -spec.z_offset()};
    } else {
        c.nz = 1;
        c.origin = {-spec.radius(), -spec.radius(), -0.5 * spec.ring_spacing};
    }
    return c;
}

void siddon_trace(const Point3& s, const Point3& d, const CartesianSpec& cspec,
                  std::vector<std::uint32_t>& idx, std::vector<double>& len) {
    idx.clear();
    len.clear();

    const double dir[3] = {d.x - s.x, d.y - s.y, d.z - s.z};
    const double pos[3] = {s.x, s.y, s.z};
    const double lo[3] = {cspec.origin.x, cspec.origin.y, cspec.origin.z};
    const int count[3] = {cspec.nx, cspec.ny, cspec.nz};
    const double length = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    if (length == 0)
        return;

    double tau_min = 0.0, tau_max = 1.0;
    for (int a = 0; a < 3; ++a) {
        const double hi = lo[a] + count[a] * cspec.voxel;
        if (dir[a] == 0) {
            if (pos[a] < lo[a] || pos[a] > hi)
                return;
            continue;
        }
        double t0 = (lo[a] - pos[a]) / dir[a];
        double t1 = (hi - pos[a]) / dir[a];
        if (t0 > t1)
            std::swap(t0, t1);
        tau_min = std::max(tau_min, t0);
        tau_max = std::min(tau_max, t1);
    }
    if (tau_min >= tau_max)
        return;

    int voxel[3];
    double next[3], delta[3];
    int step[3];
    for (int a = 0; a < 3; ++a) {
        const double entry = pos[a] + tau_min * dir[a];
        int i = static_cast<int>(std::floor((entry - lo[a]) / cspec.voxel));
        i = std::clamp(i, 0, count[a] - 1);
        voxel[a] = i;
        if (dir[a] == 0) {
            step[a] = 0;
            delta[a] = 0;
            next[a] = std::numeric_limits<double>::infinity();
        } else {
            step[a] = dir[a] > 0 ? 1 : -1;
            delta[a] = cspec.voxel / std::abs(dir[a]);
            const double boundary = lo[a] + (i + (dir[a] > 0 ? 1 : 0)) * cspec.voxel;
            next[a] = (boundary - pos[a]) / dir[a];
        }
    }

    double tau = tau_min;
    while (true) {
        int axis = 0;
        if (next[1] < next[axis])
            axis = 1;
        if (next[2] < next[axis])
            axis = 2;
        const double tau_next = std::min(next[axis], tau_max);
        if (tau_next > tau) {
            idx.push_back(cspec.flat(voxel[0], voxel[1], voxel[2]));
            len.push_back((tau_next - tau) * length);
        }
        if (tau_next >= tau_max)
            break;
        voxel[axis] += step[axis];
        if (voxel[axis] < 0 || voxel[axis] >= count[axis])
            break;
        next[axis] += delta[axis];
        tau = tau_next;
    }
}

CartesianSystem precompute_cartesian_system(const ScanGeometry& geom, const CartesianSpec& cspec) {
    geom.validate();
    cspec.validate();
    CartesianSystem sys;
    const std::size_t rows = std::size_t(geom.views) * geom.lines();
    sys.offsets.reserve(rows + 1);
    sys.offsets.push_back(0);
    std::vector<std::uint32_t> row_idx;
    std::vector<double> row_len;
    for (int view = 0; view < geom.views; ++view) {
        const double theta = norm360(view * geom.step_deg());
        for (int line = 0; line < geom.lines(); ++line) {
            auto [s0, d0] = geom.line_endpoints(line);
            siddon_trace(rotate_z_deg(s0, theta), rotate_z_deg(d0, theta), cspec, row_idx, row_len);
            sys.idx.insert(sys.idx.end(), row_idx.begin(), row_idx.end());
            sys.weight.insert(sys.weight.end(), row_len.begin(), row_len.end());
            sys.offsets.push_back(sys.idx.size());
        }
    }
    return sys;
}

namespace {

double auto_p_floor(const ProjectionSet& proj) {
    double sum = 0;
    std::size_t count = 0;
    for (double v : proj.data)
        if (v > 0) {
            sum += v;
            ++count;
        }
    return count == 0 ? 1e-12 : 1e-12 * (sum / count);
}

inline void weighted_update(std::vector<double>& f, const std::uint32_t* idx, const double* w,
                            std::size_t count, double p_meas, double beta, double p_floor) {
    if (p_meas == 0 || count == 0)
        return;
    double p_bar = 0;
    for (std::size_t i = 0; i < count; ++i)
        p_bar += w[i] * f[idx[i]];
    const double ratio = p_meas / std::max(p_bar, p_floor);
    double factor = 1.0 - beta * (1.0 - ratio);
    if (factor <= 0)
        factor = p_floor;
    for (std::size_t i = 0; i < count; ++i)
        f[idx[i]] *= factor;
}

}  // namespace

CartesianMartResult cartesian_mart_otf(const ProjectionSet& proj, const CartesianSpec& cspec,
                                       const SolverConfig& cfg) {
    proj.validate();
    cspec.validate();
    CartesianMartResult result;
    result.values.assign(cspec.voxel_count(), cfg.f_init);
    const double p_floor = cfg.p_floor > 0 ? cfg.p_floor : auto_p_floor(proj);
    std::vector<std::uint32_t> idx;
    std::vector<double> len;

    const auto t0 = std::chrono::steady_clock::now();
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
        for (int view = 0; view < proj.geometry.views; ++view) {
            const double theta = norm360(view * proj.geometry.step_deg());
            for (int line = 0; line < proj.geometry.lines(); ++line) {
                auto [s0, d0] = proj.geometry.line_endpoints(line);
                siddon_trace(rotate_z_deg(s0, theta), rotate_z_deg(d0, theta), cspec, idx, len);
                weighted_update(result.values, idx.data(), len.data(), idx.size(),
                                proj.at(view, line), cfg.beta, p_floor);
            }
        }
        ++result.sweeps;
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

CartesianMartResult cartesian_mart_stored(const ProjectionSet& proj, const CartesianSpec& cspec,
                                          const CartesianSystem& system, const SolverConfig& cfg) {
    proj.validate();
    cspec.validate();
    CartesianMartResult result;
    result.values.assign(cspec.voxel_count(), cfg.f_init);
    const double p_floor = cfg.p_floor > 0 ? cfg.p_floor : auto_p_floor(proj);

    const auto t0 = std::chrono::steady_clock::now();
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
        std::size_t row = 0;
        for (int view = 0; view < proj.geometry.views; ++view) {
            for (int line = 0; line < proj.geometry.lines(); ++line, ++row) {
                const std::uint64_t begin = system.offsets[row];
                const std::uint64_t end = system.offsets[row + 1];
                weighted_update(result.values, system.idx.data() + begin,
                                system.weight.data() + begin, end - begin,
                                proj.at(view, line), cfg.beta, p_floor);
            }
        }
        ++result.sweeps;
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace uscg
