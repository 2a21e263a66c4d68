#pragma once

#include "dwlab/complex_ext.hpp"
#include "dwlab/extrapolate.hpp"
#include "dwlab/selfmap.hpp"

#include <string>
#include <vector>

namespace dwlab {

enum class MapKind {
    Elliptic,
    Hyperbolic,
    ParabolicI,
    ParabolicII,
    Undecided,
    RejectedEllipticAutomorphism,
};

const char* to_string(MapKind k);

struct ClassifyOptions {
    long n_max = 100000;
    double tau_A = 1e-4;  // hyperbolic vs parabolic split on |A - 1|
    double tau_s = 1e-3;  // type I vs type II split on the step tail
    double fit_residual_max = 1e-2;
};

struct DenjoyWolff {
    enum class Status { Interior, Boundary, Undecided, EllipticAutomorphism };

    Status status = Status::Undecided;
    ExtComplex point;          // fixed point, boundary cluster point, or infinity
    long orbit_used = 0;
    double cluster_diameter = 0.0; // boundary case diagnostics
    std::string detail;
};

struct Classification {
    MapKind kind = MapKind::Undecided;
    DenjoyWolff dw;
    bool boundary = false;

    Complex multiplier{0.0, 0.0}; // lambda at an interior point, A at the boundary
    double multiplier_error = 0.0;

    // parabolic diagnostics
    double s_inf = 0.0;
    PowerTailFit step_fit;
    double last_step = 0.0;

    long orbit_length = 0;
    long step_stride = 1;
    std::vector<double> step_tail; // most recent steps, subsampled for reports

    ClassifyOptions options;
    std::string detail;
};

// Iterates from the model base point (0 or i) and locates the Denjoy-Wolff
// point: Cauchy-convergent orbit -> interior fixed point (Newton-polished);
// escaping orbit -> boundary cluster direction, or infinity in the
// half-plane. Orbits that do neither within n_max come back Undecided, and a
// constant-step non-convergent orbit is flagged as a suspected elliptic
// automorphism.
DenjoyWolff find_denjoy_wolff(const SelfMap& map, const ClassifyOptions& opts = {});

// Boundary multiplier A = lim Im z_{n+1} / Im z_n of a standard-form orbit,
// Richardson-accelerated, with an error bar.
TailEstimate boundary_multiplier(const Orbit& orbit);

Classification classify(const SelfMap& map, const ClassifyOptions& opts = {});

// classify() restarted from an arbitrary base point (the verdict must not
// depend on it).
Classification classify_from(const SelfMap& map, Complex z0, const ClassifyOptions& opts = {});

// Rewrites a boundary-DW map in half-plane coordinates with the fixed point
// at infinity (Cayley change from the disk, or -1/(z-p) for a finite real p).
SelfMap to_standard_form(const SelfMap& map, const DenjoyWolff& dw);

struct Type2EscapeReport {
    long n = 0;
    double min_im_tail = 0.0;      // min Im phi_n(z) over n in [N/2, N]
    double im_slope = 0.0;         // growth of Im per step over the tail
    double final_im = 0.0;
    double rho_to_base_orbit = 0.0;    // rho(phi_N(z), phi_N(i))
    double rho_to_base_orbit_mid = 0.0; // same at N/2, should be larger
};

// Prop-4.1-style probe: escape of Im phi_n(z) and collapse of the orbit onto
// the base orbit. Requires a parabolic type II classification.
Type2EscapeReport verify_type2_escape(const SelfMap& map, const Classification& cls, Complex z,
                                      long n);

} // namespace dwlab
