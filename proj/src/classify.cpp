#include "dwlab/classify.hpp"

#include "dwlab/error.hpp"
#include "dwlab/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace dwlab {

const char* to_string(MapKind k) {
    switch (k) {
    case MapKind::Elliptic: return "elliptic";
    case MapKind::Hyperbolic: return "hyperbolic";
    case MapKind::ParabolicI: return "parabolicI";
    case MapKind::ParabolicII: return "parabolicII";
    case MapKind::Undecided: return "undecided";
    case MapKind::RejectedEllipticAutomorphism: return "rejected-elliptic-automorphism";
    }
    return "?";
}

namespace {

// Newton polish of phi(z) = z from a near-fixed starting point. May land on
// the domain boundary (boundary fixed point); the caller sorts that out.
std::optional<Complex> polish_fixed_point(const SelfMap& map, Complex z) {
    for (int it = 0; it < 40; ++it) {
        Complex f, d;
        try {
            f = map.eval(z) - z;
            d = map.derivative(z) - 1.0;
        } catch (const InvalidInput&) {
            return std::nullopt;
        }
        if (std::abs(f) < 1e-14) return z;
        if (std::abs(d) < 1e-14) return std::nullopt;
        const Complex step = f / d;
        if (std::abs(step) > 0.1) return std::nullopt; // left the local basin
        z -= step;
    }
    return std::nullopt;
}

double cluster_diameter(const std::vector<Complex>& dirs) {
    if (dirs.size() < 2) return 0.0;
    Complex mean(0.0, 0.0);
    for (Complex d : dirs) mean += d;
    mean /= double(dirs.size());
    double worst = 0.0;
    for (Complex d : dirs) worst = std::max(worst, std::abs(d - mean));
    return 2.0 * worst;
}

DenjoyWolff find_dw_from(const SelfMap& map, Complex z0, const ClassifyOptions& opts) {
    const Domain dom = map.domain();
    const Orbit orbit = iterate(map, z0, opts.n_max);
    DenjoyWolff dw;
    dw.orbit_used = orbit.last_n();

    const std::size_t count = orbit.points.size();
    const Complex z_end = orbit.points.back();

    // Cauchy-convergent orbit.
    double final_gap = std::numeric_limits<double>::infinity();
    if (count >= 2) final_gap = std::abs(orbit.points[count - 1] - orbit.points[count - 2]);
    if (orbit.stagnated || final_gap < 1e-6) {
        std::optional<Complex> p = polish_fixed_point(map, z_end);
        if (!p && (final_gap < 1e-10 || orbit.stagnated)) {
            p = z_end;
            dw.detail = "accepted orbit limit without Newton polish";
        }
        if (p) {
            if (dom == Domain::HalfPlane && p->imag() < 1e-9) {
                dw.status = DenjoyWolff::Status::Boundary;
                dw.point = ExtComplex(Complex(p->real(), 0.0));
                return dw;
            }
            if (dom == Domain::Disk && std::abs(*p) > 1.0 - 1e-9) {
                dw.status = DenjoyWolff::Status::Boundary;
                dw.point = ExtComplex(*p / std::abs(*p));
                return dw;
            }
            dw.status = DenjoyWolff::Status::Interior;
            dw.point = ExtComplex(*p);
            return dw;
        }
    }

    // Escape patterns.
    const std::size_t tail_begin = count - std::max<std::size_t>(2, count / 5);
    if (dom == Domain::HalfPlane) {
        bool growing = true;
        for (std::size_t i = tail_begin + 1; i < count; ++i)
            if (std::abs(orbit.points[i]) < std::abs(orbit.points[i - 1])) growing = false;
        if ((orbit.escaped || std::abs(z_end) > 100.0) && growing) {
            dw.status = DenjoyWolff::Status::Boundary;
            dw.point = ExtComplex::infinity();
            return dw;
        }
    } else {
        const double rim_gap = 1.0 - std::abs(z_end);
        if (orbit.escaped || rim_gap < 1e-3) {
            std::vector<Complex> dirs;
            for (std::size_t i = tail_begin; i < count; ++i) {
                const double m = std::abs(orbit.points[i]);
                if (m > 0.0) dirs.push_back(orbit.points[i] / m);
            }
            dw.cluster_diameter = cluster_diameter(dirs);
            if (!dirs.empty() && dw.cluster_diameter < 1e-6) {
                const Complex dir = dirs.back();
                dw.status = DenjoyWolff::Status::Boundary;
                dw.point = ExtComplex(dir / std::abs(dir));
                return dw;
            }
            dw.detail = "orbit reached the rim without a stable direction";
        }
    }

    // Constant steps with no convergence: rotation-like behaviour.
    if (orbit.steps.size() >= 10) {
        double lo = orbit.steps.front(), hi = lo;
        for (double s : orbit.steps) {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        if (hi - lo < 1e-9 * std::max(1.0, hi) && lo > 1e-9) {
            dw.status = DenjoyWolff::Status::EllipticAutomorphism;
            dw.detail = "constant hyperbolic steps with a non-convergent orbit";
            return dw;
        }
    }

    dw.status = DenjoyWolff::Status::Undecided;
    if (dw.detail.empty()) dw.detail = "no convergence or escape pattern within n_max";
    return dw;
}

struct StandardForm {
    SelfMap map;
    Mobius fwd = Mobius::identity(); // original model -> standard half-plane
    bool changed = false;
};

StandardForm standardize(const SelfMap& map, const DenjoyWolff& dw) {
    if (dw.status != DenjoyWolff::Status::Boundary)
        throw InvalidInput("standard form: map has no boundary Denjoy-Wolff point");
    if (map.domain() == Domain::Disk) {
        if (dw.point.infinite) throw InvalidInput("standard form: disk map with infinite point");
        const CayleyPair pair = cayley(dw.point.value);
        return {map.cayley_conjugate(dw.point.value), pair.to_halfplane, true};
    }
    if (dw.point.infinite) return {map, Mobius::identity(), false};
    const Complex p(dw.point.value.real(), 0.0);
    const Mobius fwd{Complex(0.0), Complex(-1.0), Complex(1.0), -p};
    const Mobius inv{p, Complex(-1.0), Complex(1.0), Complex(0.0)};
    return {map.mobius_conjugate(fwd, inv, Domain::HalfPlane, "standardized:" + map.name()), fwd,
            true};
}

} // namespace

DenjoyWolff find_denjoy_wolff(const SelfMap& map, const ClassifyOptions& opts) {
    return find_dw_from(map, base_point(map.domain()), opts);
}

TailEstimate boundary_multiplier(const Orbit& orbit) {
    std::vector<double> ratios;
    ratios.reserve(orbit.points.size());
    for (std::size_t i = 0; i + 1 < orbit.points.size(); ++i) {
        if (orbit.indices[i + 1] - orbit.indices[i] != orbit.stride) continue;
        const double v0 = orbit.points[i].imag();
        const double v1 = orbit.points[i + 1].imag();
        if (v0 > 0.0 && v1 > 0.0) ratios.push_back(v1 / v0);
    }
    if (ratios.size() < 8) throw InvalidInput("multiplier: orbit too short for a tail estimate");
    TailEstimate est = tail_limit(ratios);
    if (orbit.stride > 1) {
        // stored ratios span stride steps; take the stride-th root
        const double root = 1.0 / double(orbit.stride);
        const double a = std::pow(std::max(est.value, 1e-300), root);
        est.error_bar =
            std::abs(std::pow(std::max(est.value + est.error_bar, 1e-300), root) - a) + 1e-15;
        est.value = a;
    }
    return est;
}

SelfMap to_standard_form(const SelfMap& map, const DenjoyWolff& dw) {
    return standardize(map, dw).map;
}

namespace {

void fill_step_diagnostics(Classification& cls, const Orbit& orbit) {
    cls.orbit_length = orbit.last_n();
    cls.step_stride = orbit.stride;
    const std::size_t n = orbit.steps.size();
    if (n == 0) return;
    const std::size_t keep = std::min<std::size_t>(n, 64);
    const std::size_t hop = std::max<std::size_t>(1, n / keep);
    for (std::size_t i = n - std::min(n, keep * hop); i < n; i += hop)
        cls.step_tail.push_back(orbit.steps[i]);
    cls.last_step = orbit.steps.back();
}

} // namespace

Classification classify_from(const SelfMap& map, Complex z0, const ClassifyOptions& opts) {
    Classification cls;
    cls.options = opts;
    cls.dw = find_dw_from(map, z0, opts);

    switch (cls.dw.status) {
    case DenjoyWolff::Status::EllipticAutomorphism:
        cls.kind = MapKind::RejectedEllipticAutomorphism;
        cls.detail = cls.dw.detail;
        return cls;
    case DenjoyWolff::Status::Undecided:
        cls.kind = MapKind::Undecided;
        cls.detail = cls.dw.detail;
        return cls;
    case DenjoyWolff::Status::Interior: {
        const Complex p = cls.dw.point.value;
        const Complex lambda = map.derivative(p);
        cls.multiplier = lambda;
        if (std::abs(lambda) >= 1.0 - 1e-9) {
            cls.kind = MapKind::RejectedEllipticAutomorphism;
            cls.detail = "interior fixed point with |derivative| = 1";
            return cls;
        }
        cls.kind = MapKind::Elliptic;
        return cls;
    }
    case DenjoyWolff::Status::Boundary: break;
    }

    cls.boundary = true;
    const StandardForm sf = standardize(map, cls.dw);
    ExtComplex start_ext = mobius_apply(sf.fwd, ExtComplex(z0));
    Complex start = base_point(Domain::HalfPlane);
    if (start_ext.finite() && in_domain(Domain::HalfPlane, start_ext.value))
        start = start_ext.value;
    const Orbit orbit = iterate(sf.map, start, opts.n_max);
    fill_step_diagnostics(cls, orbit);

    TailEstimate a_est;
    try {
        a_est = boundary_multiplier(orbit);
    } catch (const InvalidInput&) {
        cls.kind = MapKind::Undecided;
        cls.detail = "standard-form orbit too short for a multiplier estimate";
        return cls;
    }
    cls.multiplier = Complex(a_est.value, 0.0);
    cls.multiplier_error = a_est.error_bar;

    if (a_est.value > 1.0 + opts.tau_A) {
        cls.kind = MapKind::Hyperbolic;
        return cls;
    }
    if (std::abs(a_est.value - 1.0) > opts.tau_A) {
        cls.kind = MapKind::Undecided;
        cls.detail = "boundary multiplier below 1: inconsistent standard form";
        return cls;
    }

    // Parabolic: decide the sub-type from the hyperbolic step tail.
    if (orbit.steps.size() < 8) {
        cls.kind = MapKind::Undecided;
        cls.detail = "step tail too short";
        return cls;
    }
    const double s_last = orbit.steps.back();
    const double s_mid = orbit.steps[orbit.steps.size() / 2];
    cls.step_fit = fit_power_tail(orbit.steps, 0, orbit.stride);

    if (s_last < opts.tau_s && s_last <= s_mid + 1e-12) {
        cls.kind = MapKind::ParabolicII;
        cls.s_inf = 0.0;
        return cls;
    }
    if (cls.step_fit.s_inf > opts.tau_s && cls.step_fit.rms_residual < opts.fit_residual_max) {
        cls.kind = MapKind::ParabolicI;
        cls.s_inf = cls.step_fit.s_inf;
        return cls;
    }
    cls.kind = MapKind::Undecided;
    cls.detail = "parabolic step tail neither settled above tau_s nor fell below it";
    return cls;
}

Classification classify(const SelfMap& map, const ClassifyOptions& opts) {
    return classify_from(map, base_point(map.domain()), opts);
}

Type2EscapeReport verify_type2_escape(const SelfMap& map, const Classification& cls, Complex z,
                                      long n) {
    if (cls.kind != MapKind::ParabolicII)
        throw TypeMismatch("type2 escape probe requires a parabolic type II classification");
    if (map.domain() != Domain::HalfPlane || !in_domain(Domain::HalfPlane, z))
        throw InvalidInput("type2 escape probe: z must lie in the upper half-plane");

    const Orbit oz = iterate(map, z, n);
    const Orbit oi = iterate(map, base_point(Domain::HalfPlane), n);

    Type2EscapeReport rep;
    rep.n = n;
    rep.min_im_tail = std::numeric_limits<double>::infinity();
    Complex mid_z{}, mid_i{};
    bool have_mid = false;
    for (std::size_t k = 0; k < oz.indices.size(); ++k) {
        if (oz.indices[k] >= n / 2)
            rep.min_im_tail = std::min(rep.min_im_tail, oz.points[k].imag());
        if (!have_mid && oz.indices[k] >= n / 2 && k < oi.points.size()) {
            mid_z = oz.points[k];
            mid_i = oi.points[k];
            have_mid = true;
        }
    }
    rep.final_im = oz.points.back().imag();
    const double im_mid = have_mid ? mid_z.imag() : oz.points.front().imag();
    rep.im_slope = (rep.final_im - im_mid) / std::max(1.0, double(n - n / 2));
    rep.rho_to_base_orbit = hyp_dist_halfplane_raw(oz.points.back(), oi.points.back());
    if (have_mid) rep.rho_to_base_orbit_mid = hyp_dist_halfplane_raw(mid_z, mid_i);
    return rep;
}

} // namespace dwlab
