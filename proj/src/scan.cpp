#include "uscg/scan.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uscg {

void ScanGeometry::validate() const {
    if (views < 1)
        throw std::invalid_argument("number of views must be >= 1");
    if (det_u < 1 || det_v < 1)
        throw std::invalid_argument("detector counts must be >= 1");
    if (!(spacing_u > 0))
        throw std::invalid_argument("detector spacing must be positive");
    if (det_v > 1 && !(spacing_v > 0))
        throw std::invalid_argument("detector row spacing must be positive");
    const double dot = source.x * detector_center.x + source.y * detector_center.y;
    if (!(dot < 0))
        throw std::invalid_argument("source and detector must sit on opposite sides of the origin");
    const double ax = detector_center.x - source.x;
    const double ay = detector_center.y - source.y;
    if (ax * ax + ay * ay == 0)
        throw std::invalid_argument("central ray must not be axial");
}

Point3 ScanGeometry::detector_position(int iu, int iv) const {
    const double ax = detector_center.x - source.x;
    const double ay = detector_center.y - source.y;
    const double alen = std::sqrt(ax * ax + ay * ay);
    const double ux = -ay / alen;
    const double uy = ax / alen;
    const double du = (iu - 0.5 * (det_u - 1)) * spacing_u;
    const double dv = (iv - 0.5 * (det_v - 1)) * spacing_v;
    return {detector_center.x + du * ux, detector_center.y + du * uy, detector_center.z + dv};
}

std::pair<Point3, Point3> ScanGeometry::line_endpoints(int line) const {
    const int iu = line % det_u;
    const int iv = line / det_u;
    return {source, detector_position(iu, iv)};
}

bool ScanGeometry::quarter_symmetric() const {
    if (det_u % 2 == 0 || det_v % 2 == 0)
        return false;
    return source.y == 0 && source.z == 0 && detector_center.y == 0 && detector_center.z == 0;
}

Point3 rotate_z_deg(const Point3& p, double deg) {
    const double rad = deg * (std::numbers::pi / 180.0);
    const double c = std::cos(rad), s = std::sin(rad);
    return {c * p.x - s * p.y, s * p.x + c * p.y, p.z};
}

}  // namespace uscg
