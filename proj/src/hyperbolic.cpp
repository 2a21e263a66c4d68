#include "dwlab/hyperbolic.hpp"

#include "dwlab/error.hpp"

#include <cmath>

namespace dwlab {

DiskPoint::DiskPoint(Complex value) : z(value) {
    if (!is_finite_number(value) || std::abs(value) >= 1.0)
        throw InvalidInput("disk point: |z| must be < 1");
}

HalfPlanePoint::HalfPlanePoint(Complex value) : z(value) {
    if (!is_finite_number(value) || !(value.imag() > 0.0))
        throw InvalidInput("half-plane point: Im z must be > 0");
}

bool in_domain(Domain d, Complex z) {
    if (!is_finite_number(z)) return false;
    return d == Domain::Disk ? std::abs(z) < 1.0 : z.imag() > 0.0;
}

double boundary_distance(Domain d, Complex z) {
    return d == Domain::Disk ? 1.0 - std::abs(z) : z.imag();
}

Complex base_point(Domain d) {
    return d == Domain::Disk ? Complex(0.0, 0.0) : Complex(0.0, 1.0);
}

double hyp_dist_disk_raw(Complex z, Complex w) {
    if (z == w) return 0.0;
    const double num = std::abs(z - w);
    const double den = std::abs(1.0 - std::conj(w) * z);
    const double delta = num / den;
    // 1 - delta^2 without cancellation near the circle.
    const double az = std::abs(z), aw = std::abs(w);
    const double one_minus_d2 = ((1.0 - az) * (1.0 + az)) * ((1.0 - aw) * (1.0 + aw)) / (den * den);
    return 2.0 * std::log1p(delta) - std::log(one_minus_d2);
}

double hyp_dist_halfplane_raw(Complex z, Complex w) {
    if (z == w) return 0.0;
    const double num = std::hypot(z.real() - w.real(), z.imag() - w.imag());
    const double den = std::hypot(z.real() - w.real(), z.imag() + w.imag());
    const double t = num / den;
    // 1 - t^2 = 4 Im z Im w / den^2; in log form so heights near 1e300 cannot
    // overflow the intermediate squares.
    const double log_one_minus_t2 =
        std::log(4.0) + std::log(z.imag()) + std::log(w.imag()) - 2.0 * std::log(den);
    return 2.0 * std::log1p(t) - log_one_minus_t2;
}

double hyp_dist_disk(DiskPoint z, DiskPoint w) { return hyp_dist_disk_raw(z.z, w.z); }

double hyp_dist_halfplane(HalfPlanePoint z, HalfPlanePoint w) {
    return hyp_dist_halfplane_raw(z.z, w.z);
}

double hyp_dist(Domain d, Complex z, Complex w) {
    if (d == Domain::Disk) return hyp_dist_disk(DiskPoint(z), DiskPoint(w));
    return hyp_dist_halfplane(HalfPlanePoint(z), HalfPlanePoint(w));
}

} // namespace dwlab
