#pragma once

#include "dwlab/complex_ext.hpp"

namespace dwlab {

enum class Domain { Disk, HalfPlane };

// Point strictly inside the unit disk; the constructor validates.
struct DiskPoint {
    Complex z;

    explicit DiskPoint(Complex value);
};

// Point with strictly positive imaginary part; the constructor validates.
struct HalfPlanePoint {
    Complex z;

    explicit HalfPlanePoint(Complex value);
};

bool in_domain(Domain d, Complex z);

// Euclidean distance from z to the domain boundary (1 - |z| or Im z).
double boundary_distance(Domain d, Complex z);

// 0 in the disk, i in the half-plane.
Complex base_point(Domain d);

// rho(z, w) = log((1 + delta)/(1 - delta)), delta = |(z-w)/(1 - conj(w) z)|.
// Evaluated through the factorization 1 - delta^2 =
// (1-|z|^2)(1-|w|^2)/|1-conj(w) z|^2 so the result keeps relative accuracy
// when delta is close to 1 (points within 1e-12 of the circle).
double hyp_dist_disk(DiskPoint z, DiskPoint w);

// Same metric in the upper half-plane: log((1+t)/(1-t)) with
// t = |(z-w)/(z-conj(w))| and 1 - t^2 = 4 Im z Im w / |z - conj(w)|^2.
double hyp_dist_halfplane(HalfPlanePoint z, HalfPlanePoint w);

double hyp_dist(Domain d, Complex z, Complex w);

// Unchecked kernels for hot loops over pre-validated points.
double hyp_dist_disk_raw(Complex z, Complex w);
double hyp_dist_halfplane_raw(Complex z, Complex w);

} // namespace dwlab
