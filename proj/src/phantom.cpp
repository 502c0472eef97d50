#include "uscg/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace uscg {

namespace {

constexpr double kRadPerDeg = std::numbers::pi / 180.0;

// Standard Shepp-Logan head phantom (Shepp & Logan 1974, as tabulated by
// Kak & Slaney), unit-radius coordinates.
const std::vector<EllipsoidParam> kSheppLogan2D = {
    {2.00, 0.6900, 0.9200, 0, 0.00, 0.0000, 0, 0},
    {-0.98, 0.6624, 0.8740, 0, 0.00, -0.0184, 0, 0},
    {-0.02, 0.1100, 0.3100, 0, 0.22, 0.0000, 0, -18},
    {-0.02, 0.1600, 0.4100, 0, -0.22, 0.0000, 0, 18},
    {0.01, 0.2100, 0.2500, 0, 0.00, 0.3500, 0, 0},
    {0.01, 0.0460, 0.0460, 0, 0.00, 0.1000, 0, 0},
    {0.01, 0.0460, 0.0460, 0, 0.00, -0.1000, 0, 0},
    {0.01, 0.0460, 0.0230, 0, -0.08, -0.6050, 0, 0},
    {0.01, 0.0230, 0.0230, 0, 0.00, -0.6060, 0, 0},
    {0.01, 0.0230, 0.0460, 0, 0.06, -0.6050, 0, 0},
};

// 3D variant with the ellipsoid table of Cheng, Sarlls & Ozarslan (2007).
const std::vector<EllipsoidParam> kSheppLogan3D = {
    {2.00, 0.6900, 0.920, 0.90, 0.00, 0.000, 0.000, 0},
    {-0.80, 0.6624, 0.874, 0.88, 0.00, 0.000, 0.000, 0},
    {-0.20, 0.4100, 0.160, 0.21, -0.22, 0.000, -0.250, 108},
    {-0.20, 0.3100, 0.110, 0.22, 0.22, 0.000, -0.250, 72},
    {0.20, 0.2100, 0.250, 0.50, 0.00, 0.350, -0.250, 0},
    {0.20, 0.0460, 0.046, 0.046, 0.00, 0.100, -0.250, 0},
    {0.10, 0.0460, 0.023, 0.02, -0.08, -0.650, -0.250, 0},
    {0.10, 0.0460, 0.023, 0.02, 0.06, -0.650, -0.250, 90},
    {0.20, 0.0560, 0.040, 0.10, 0.06, -0.105, 0.625, 90},
    {-0.20, 0.0560, 0.056, 0.10, 0.00, 0.100, 0.625, 0},
};

}  // namespace

const std::vector<EllipsoidParam>& shepp_logan_2d_table() { return kSheppLogan2D; }
const std::vector<EllipsoidParam>& shepp_logan_3d_table() { return kSheppLogan3D; }

double phantom_value(const std::vector<EllipsoidParam>& table, bool volume,
                     double x, double y, double z) {
    double value = 0;
    for (const EllipsoidParam& e : table) {
        const double px = x - e.cx;
        const double py = y - e.cy;
        const double rad = e.angle_deg * kRadPerDeg;
        const double c = std::cos(rad), s = std::sin(rad);
        // rotate into the shape frame
        const double qx = c * px + s * py;
        const double qy = -s * px + c * py;
        double q = (qx / e.ax) * (qx / e.ax) + (qy / e.ay) * (qy / e.ay);
        if (volume) {
            const double qz = (z - e.cz) / e.az;
            q += qz * qz;
        }
        if (q < 1.0)
            value += e.intensity;
    }
    return value;
}

PhantomResult generate_phantom(const PhantomSpec& phantom, const GridSpec& spec) {
    spec.validate();
    if (phantom.n != spec.n)
        throw std::invalid_argument("phantom size does not match the grid");

    const bool volume = spec.mode == GridMode::Volume3D;
    const int slices = spec.slices();
    const int n = spec.n;

    if (phantom.kind == PhantomKind::RawVolume) {
        const std::size_t expected = std::size_t(slices) * n * n;
        if (phantom.raw.size() != expected)
            throw std::invalid_argument("raw volume has " + std::to_string(phantom.raw.size())
                                        + " values, expected " + std::to_string(expected));
        PhantomResult result;
        result.cartesian.reserve(slices);
        for (int s = 0; s < slices; ++s) {
            Image img{n, n, {phantom.raw.begin() + std::size_t(s) * n * n,
                             phantom.raw.begin() + std::size_t(s + 1) * n * n}};
            result.cartesian.push_back(std::move(img));
        }
        result.field = cartesian_to_field(result.cartesian, spec);
        return result;
    }

    const std::vector<EllipsoidParam>* table = &phantom.table;
    if (table->empty())
        table = phantom.kind == PhantomKind::SheppLogan3D ? &kSheppLogan3D : &kSheppLogan2D;
    // tables are written for a unit-radius image; scale to this grid
    const double scale = spec.radius();

    PhantomResult result;
    result.field.spec = spec;
    result.field.values.resize(spec.cell_count());

    const RingTable rings(spec);
    const double zoff = spec.z_offset();

    auto sample = [&](double x, double y, double z) {
        double v = phantom_value(*table, volume, x / scale, y / scale, z / scale);
        if (v < 0) {
            v = 0;
            result.clipped_negative = true;
        }
        return v;
    };

    std::size_t flat = 0;
    for (int s = 0; s < slices; ++s) {
        const double z = volume ? (s + 0.5) * spec.slice_height - zoff : 0.0;
        for (int ring = 1; ring <= spec.rings(); ++ring) {
            const RingLayout& rl = rings[ring];
            const double radius = (ring - 0.5) * spec.ring_spacing;
            for (std::uint32_t j = 0; j < rl.cell_count; ++j) {
                const double ang = (j + 0.5) * rl.step_deg * kRadPerDeg;
                result.field.values[flat++] = sample(radius * std::cos(ang), radius * std::sin(ang), z);
            }
        }
    }

    result.cartesian.reserve(slices);
    const double px = spec.ring_spacing;  // pixel size equals the ring spacing
    for (int s = 0; s < slices; ++s) {
        const double z = volume ? (s + 0.5) * spec.slice_height - zoff : 0.0;
        Image img{n, n, std::vector<double>(std::size_t(n) * n)};
        for (int row = 0; row < n; ++row) {
            const double y = (row + 0.5 - n / 2) * px;
            for (int col = 0; col < n; ++col) {
                const double x = (col + 0.5 - n / 2) * px;
                img.at(row, col) = sample(x, y, z);
            }
        }
        result.cartesian.push_back(std::move(img));
    }
    return result;
}

std::vector<Image> field_to_cartesian(const Field& field) {
    const GridSpec& spec = field.spec;
    const int n = spec.n;
    const std::vector<std::uint32_t> map = uspg_to_cg_map(n);
    std::vector<Image> out;
    out.reserve(spec.slices());
    for (int s = 0; s < spec.slices(); ++s) {
        Image img{n, n, std::vector<double>(std::size_t(n) * n)};
        const double* src = field.values.data() + std::size_t(s) * spec.cells_per_slice();
        for (std::size_t flat = 0; flat < map.size(); ++flat)
            img.v[map[flat]] = src[flat];
        out.push_back(std::move(img));
    }
    return out;
}

Field cartesian_to_field(const std::vector<Image>& slices, const GridSpec& spec) {
    spec.validate();
    if (static_cast<int>(slices.size()) != spec.slices())
        throw std::invalid_argument("slice count does not match the grid");
    const std::vector<std::uint32_t> map = uspg_to_cg_map(spec.n);
    Field field{spec, std::vector<double>(spec.cell_count())};
    for (int s = 0; s < spec.slices(); ++s) {
        const Image& img = slices[s];
        if (img.rows != spec.n || img.cols != spec.n)
            throw std::invalid_argument("slice shape does not match the grid");
        double* dst = field.values.data() + std::size_t(s) * spec.cells_per_slice();
        for (std::size_t flat = 0; flat < map.size(); ++flat)
            dst[flat] = img.v[map[flat]];
    }
    return field;
}

ProjectionSet generate_projections(const Field& field, const ScanGeometry& geom,
                                   ForwardModel model, const Tracer* tracer) {
    field.spec.validate();
    geom.validate();
    if (field.values.size() != field.spec.cell_count())
        throw std::invalid_argument("field length does not match its grid");

    ProjectionSet proj;
    proj.geometry = geom;
    proj.data.assign(std::size_t(geom.views) * geom.lines(), 0.0);

    if (model == ForwardModel::Binary) {
        std::optional<Tracer> local;
        if (!tracer) {
            local.emplace(geom, field.spec, geom.quarter_symmetric());
            tracer = &*local;
        }
        if (tracer->cache().line_count() != geom.lines())
            throw std::invalid_argument("tracer cache does not match the scan geometry");
        TraceScratch scratch = tracer->make_scratch();
        std::vector<std::uint32_t> active;
        for (int view = 0; view < geom.views; ++view) {
            const double theta = norm360(view * geom.step_deg());
            for (int line = 0; line < geom.lines(); ++line) {
                tracer->trace_line(line, theta, scratch, active);
                proj.at(view, line) = forward_project_line(field, active);
            }
        }
        return proj;
    }

    // length-weighted model: split every chord at the crossings with the
    // ring's radial boundary planes and attribute each piece to the sector
    // of its midpoint. The pieces partition the chord, so the integrated
    // length is conserved by construction even for boundary-degenerate rays.
    const GridSpec& spec = field.spec;
    const RingTable rings(spec);
    std::vector<double> cuts;
    for (int view = 0; view < geom.views; ++view) {
        const double theta = norm360(view * geom.step_deg());
        for (int line = 0; line < geom.lines(); ++line) {
            auto [s0, d0] = geom.line_endpoints(line);
            const Point3 s = rotate_z_deg(s0, theta);
            const Point3 d = rotate_z_deg(d0, theta);
            const std::vector<Point3> pts = build_sorted_intersections(s, d, spec);
            double total = 0;
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                const auto rec = classify_chord(pts[i], pts[i + 1], spec);
                if (!rec)
                    continue;
                const Point3& a = pts[i];
                const Point3 u = pts[i + 1] - a;
                const double chord_len = norm(u);
                const RingLayout& rl = rings[rec->ring];
                cuts.assign({0.0, 1.0});
                for (std::uint32_t j = 0; j < rl.cell_count; ++j) {
                    // crossing with the radial plane at azimuth j * step
                    const double psi = j * rl.step_deg * (std::numbers::pi / 180.0);
                    const double ex = std::cos(psi), ey = std::sin(psi);
                    const double g0 = ex * a.y - ey * a.x;
                    const double g1 = ex * u.y - ey * u.x;
                    if (g1 == 0.0)
                        continue;
                    const double tau = -g0 / g1;
                    if (tau > 0.0 && tau < 1.0)
                        cuts.push_back(tau);
                }
                std::sort(cuts.begin(), cuts.end());
                const std::uint32_t base =
                    static_cast<std::uint32_t>(rec->slice)
                        * static_cast<std::uint32_t>(spec.cells_per_slice())
                    + rl.head;
                for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                    const double piece = (cuts[c + 1] - cuts[c]) * chord_len;
                    if (piece <= 0)
                        continue;
                    const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
                    const double phi = azimuth_deg(a.x + mid * u.x, a.y + mid * u.y);
                    int sector = static_cast<int>(phi * rl.inv_step);
                    if (sector >= static_cast<int>(rl.cell_count))
                        sector = static_cast<int>(rl.cell_count) - 1;
                    total += piece * field.values[base + sector];
                }
            }
            proj.at(view, line) = total;
        }
    }
    return proj;
}

}  // namespace uscg
