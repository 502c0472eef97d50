#include "uscg/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace uscg {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;
constexpr double kRadPerDeg = std::numbers::pi / 180.0;

std::atomic<std::uint64_t> g_geometry_builds{0};

}  // namespace

namespace detail {
std::uint64_t geometry_build_count() { return g_geometry_builds.load(std::memory_order_relaxed); }
}  // namespace detail

double norm(const Point3& p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }

double distance(const Point3& a, const Point3& b) { return norm(a - b); }

double geom_eps(const GridSpec& spec) { return 1e-9 * spec.radius(); }

bool is_axial(const Point3& s, const Point3& d) {
    const double ux = s.x - d.x, uy = s.y - d.y;
    const double uxy2 = ux * ux + uy * uy;
    const Point3 dir = d - s;
    const double dir2 = dir.x * dir.x + dir.y * dir.y + dir.z * dir.z;
    return dir2 == 0.0 || uxy2 <= 1e-24 * dir2;
}

double azimuth_deg(double x, double y) {
    double deg = std::atan2(y, x) * kDegPerRad;
    if (deg < 0)
        deg += 360.0;
    if (deg >= 360.0)
        deg = 0.0;
    return deg;
}

double norm360(double deg) {
    deg = std::fmod(deg, 360.0);
    if (deg < 0)
        deg += 360.0;
    if (deg >= 360.0)
        deg = 0.0;
    return deg;
}

LineFoot line_xy_distance(const Point3& s, const Point3& d) {
    if (is_axial(s, d))
        throw std::domain_error("line degenerates to a point in the XY plane");
    const double ux = s.x - d.x, uy = s.y - d.y;
    const double uxy2 = ux * ux + uy * uy;
    const double t = (s.x * ux + s.y * uy) / uxy2;
    // perpendicular distance via the cross product; stable for far-off lines
    const double cross = s.x * d.y - s.y * d.x;
    return {std::abs(cross) / std::sqrt(uxy2), t};
}

namespace {

// Parameters of the crossings of the XY-projected line with a circle of the
// given radius. Returns the number of roots; tau0 <= tau1.
int circle_taus(const Point3& s, const Point3& d, double radius, double& tau0, double& tau1) {
    const double ux = s.x - d.x, uy = s.y - d.y;
    const double uxy2 = ux * ux + uy * uy;
    const double t = (s.x * ux + s.y * uy) / uxy2;
    const double cross = s.x * d.y - s.y * d.x;
    const double d2 = cross * cross / uxy2;
    const double r2 = radius * radius;
    if (d2 > r2)
        return 0;
    const double k = std::sqrt((r2 - d2) / uxy2);
    tau0 = t - k;
    tau1 = t + k;
    return 2;
}

}  // namespace

std::vector<Point3> cylinder_intersections(const Point3& s, const Point3& d, double radius) {
    const LineFoot foot = line_xy_distance(s, d);
    const double eps = 1e-9 * radius;
    const Point3 dir = d - s;
    if (std::abs(foot.distance - radius) <= eps)
        return {s + foot.t * dir};
    if (foot.distance > radius)
        return {};
    double tau0 = 0, tau1 = 0;
    circle_taus(s, d, radius, tau0, tau1);
    return {s + tau0 * dir, s + tau1 * dir};
}

std::vector<Point3> axial_plane_intersections(const Point3& s, const Point3& d, const GridSpec& spec) {
    spec.validate();
    std::vector<Point3> out;
    if (spec.mode != GridMode::Volume3D)
        return out;
    const double dz = d.z - s.z;
    if (dz == 0.0)
        return out;
    const Point3 dir = d - s;
    const double radius = spec.radius();
    const double eps = geom_eps(spec);
    const double lim2 = (radius + eps) * (radius + eps);
    const double zoff = spec.z_offset();
    for (int m = 0; m <= spec.n; ++m) {
        const double zm = m * spec.slice_height - zoff;
        const double tau = (zm - s.z) / dz;
        if (tau < 0.0 || tau > 1.0)
            continue;
        const Point3 p = s + tau * dir;
        if (p.x * p.x + p.y * p.y <= lim2)
            out.push_back(p);
    }
    return out;
}

std::vector<Point3> build_sorted_intersections(const Point3& s, const Point3& d, const GridSpec& spec) {
    spec.validate();
    g_geometry_builds.fetch_add(1, std::memory_order_relaxed);

    const Point3 dir = d - s;
    const double radius = spec.radius();
    const double eps = geom_eps(spec);
    const bool volume = spec.mode == GridMode::Volume3D;
    const double zoff = spec.z_offset();

    std::vector<double> taus;

    if (is_axial(s, d)) {
        // axial ray: confined to the ring containing its XY position,
        // crossing slice planes only
        if (!volume)
            return {};
        if (std::hypot(s.x, s.y) >= radius)
            return {};
        const double dz = d.z - s.z;
        if (dz == 0.0)
            return {};
        for (int m = 0; m <= spec.n; ++m) {
            const double tau = (m * spec.slice_height - zoff - s.z) / dz;
            if (tau >= 0.0 && tau <= 1.0)
                taus.push_back(tau);
        }
    } else {
        const double zlim = zoff + eps;
        for (int ring = 1; ring <= spec.rings(); ++ring) {
            double tau0 = 0, tau1 = 0;
            if (circle_taus(s, d, ring * spec.ring_spacing, tau0, tau1) == 0)
                continue;
            for (double tau : {tau0, tau1}) {
                if (tau < 0.0 || tau > 1.0)
                    continue;
                if (volume) {
                    const double z = s.z + tau * dir.z;
                    if (std::abs(z) > zlim)
                        continue;
                }
                taus.push_back(tau);
            }
        }
        if (volume && dir.z != 0.0) {
            const double lim2 = (radius + eps) * (radius + eps);
            for (int m = 0; m <= spec.n; ++m) {
                const double tau = (m * spec.slice_height - zoff - s.z) / dir.z;
                if (tau < 0.0 || tau > 1.0)
                    continue;
                const double x = s.x + tau * dir.x;
                const double y = s.y + tau * dir.y;
                if (x * x + y * y <= lim2)
                    taus.push_back(tau);
            }
        }
    }

    std::sort(taus.begin(), taus.end());

    std::vector<Point3> points;
    points.reserve(taus.size());
    const double len = norm(dir);
    double last_tau = 0;
    for (double tau : taus) {
        if (!points.empty() && (tau - last_tau) * len <= eps)
            continue;
        points.push_back(s + tau * dir);
        last_tau = tau;
    }
    return points;
}

std::optional<SegmentRecord> classify_chord(const Point3& pk, const Point3& pk1, const GridSpec& spec) {
    const double eps = geom_eps(spec);
    if (distance(pk, pk1) <= eps)
        return std::nullopt;

    const Point3 mid{(pk.x + pk1.x) / 2, (pk.y + pk1.y) / 2, (pk.z + pk1.z) / 2};

    int slice = 0;
    if (spec.mode == GridMode::Volume3D) {
        const double zloc = mid.z + spec.z_offset();
        const double sf = std::floor(zloc / spec.slice_height);
        if (sf < 0 || sf >= spec.n)
            return std::nullopt;
        slice = static_cast<int>(sf);
    }

    const double dm = std::hypot(mid.x, mid.y);
    const int ring = static_cast<int>(std::floor(dm / spec.ring_spacing)) + 1;
    if (ring > spec.rings())
        return std::nullopt;

    SegmentRecord rec;
    rec.phi_a = azimuth_deg(pk.x, pk.y);
    rec.phi_b = azimuth_deg(pk1.x, pk1.y);
    rec.slice = static_cast<std::uint16_t>(slice);
    rec.ring = static_cast<std::uint16_t>(ring);
    return rec;
}

namespace {

struct Interval {
    double lo, hi;
};

using Intervals = std::vector<Interval>;

void intersect_range(Intervals& list, double lo, double hi) {
    Intervals out;
    for (const Interval& iv : list) {
        const double a = std::max(iv.lo, lo);
        const double b = std::min(iv.hi, hi);
        if (a < b)
            out.push_back({a, b});
    }
    list = std::move(out);
}

void subtract_range(Intervals& list, double lo, double hi) {
    Intervals out;
    for (const Interval& iv : list) {
        if (hi <= iv.lo || lo >= iv.hi) {
            out.push_back(iv);
            continue;
        }
        if (iv.lo < lo)
            out.push_back({iv.lo, lo});
        if (hi < iv.hi)
            out.push_back({hi, iv.hi});
    }
    list = std::move(out);
}

// keep the part of the list where a + b*tau >= 0; a degenerate all-zero
// constraint (the segment lies exactly on the boundary) is kept only when
// the boundary belongs to this side
void intersect_halfline(Intervals& list, double a, double b, bool keep_boundary) {
    if (b == 0.0) {
        if (a < 0 || (a == 0 && !keep_boundary))
            list.clear();
        return;
    }
    const double root = -a / b;
    if (b > 0)
        intersect_range(list, root, std::numeric_limits<double>::infinity());
    else
        intersect_range(list, -std::numeric_limits<double>::infinity(), root);
}

// clip to |s_xy + tau*u_xy| <= radius; returns false when nothing remains
bool intersect_disk(Intervals& list, const Point3& s, const Point3& u, double radius) {
    const double a = u.x * u.x + u.y * u.y;
    const double b = 2 * (s.x * u.x + s.y * u.y);
    const double c = s.x * s.x + s.y * s.y - radius * radius;
    if (a == 0.0) {
        if (c > 0)
            list.clear();
        return !list.empty();
    }
    const double disc = b * b - 4 * a * c;
    if (disc <= 0) {
        list.clear();
        return false;
    }
    const double sq = std::sqrt(disc);
    intersect_range(list, (-b - sq) / (2 * a), (-b + sq) / (2 * a));
    return !list.empty();
}

void subtract_disk(Intervals& list, const Point3& s, const Point3& u, double radius) {
    const double a = u.x * u.x + u.y * u.y;
    const double b = 2 * (s.x * u.x + s.y * u.y);
    const double c = s.x * s.x + s.y * s.y - radius * radius;
    if (a == 0.0) {
        if (c < 0)
            list.clear();
        return;
    }
    const double disc = b * b - 4 * a * c;
    if (disc <= 0)
        return;
    const double sq = std::sqrt(disc);
    subtract_range(list, (-b - sq) / (2 * a), (-b + sq) / (2 * a));
}

}  // namespace

double cell_chord_length(const Point3& s, const Point3& d, const GridSpec& spec,
                         int slice, int ring, int sector) {
    const Point3 u = d - s;
    const double len = norm(u);
    if (len == 0.0)
        return 0.0;

    Intervals list{{0.0, 1.0}};

    if (!intersect_disk(list, s, u, ring * spec.ring_spacing))
        return 0.0;
    if (ring > 1)
        subtract_disk(list, s, u, (ring - 1) * spec.ring_spacing);

    if (spec.mode == GridMode::Volume3D) {
        const double zoff = spec.z_offset();
        const double zlo = slice * spec.slice_height - zoff;
        const double zhi = zlo + spec.slice_height;
        if (u.z == 0.0) {
            if (s.z < zlo || s.z > zhi)
                return 0.0;
        } else {
            const double t0 = (zlo - s.z) / u.z;
            const double t1 = (zhi - s.z) / u.z;
            intersect_range(list, std::min(t0, t1), std::max(t0, t1));
        }
    }

    // sector wedge: angle in [psi0, psi1), expressed as two half-plane tests;
    // a segment lying exactly on a radial boundary belongs to the
    // counter-clockwise sector, matching the floor attribution of azimuths
    const double step = 360.0 / ring_grid_count(ring);
    const double psi0 = sector * step * kRadPerDeg;
    const double psi1 = (sector + 1) * step * kRadPerDeg;
    const double e0x = std::cos(psi0), e0y = std::sin(psi0);
    const double e1x = std::cos(psi1), e1y = std::sin(psi1);
    intersect_halfline(list, e0x * s.y - e0y * s.x, e0x * u.y - e0y * u.x, true);
    intersect_halfline(list, -(e1x * s.y - e1y * s.x), -(e1x * u.y - e1y * u.x), false);

    double measure = 0;
    for (const Interval& iv : list)
        measure += iv.hi - iv.lo;
    return measure * len;
}

}  // namespace uscg
