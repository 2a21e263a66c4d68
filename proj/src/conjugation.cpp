#include "dwlab/conjugation.hpp"

#include "dwlab/error.hpp"
#include "dwlab/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dwlab {

const char* to_string(ConjugationKind k) {
    switch (k) {
    case ConjugationKind::Koenigs: return "koenigs";
    case ConjugationKind::Valiron: return "valiron";
    case ConjugationKind::Pommerenke: return "pommerenke";
    }
    return "?";
}

namespace {

Complex complex_ipow(Complex base, long k) {
    if (k < 0) return 1.0 / complex_ipow(base, -k);
    Complex result(1.0, 0.0), acc = base;
    unsigned long e = static_cast<unsigned long>(k);
    while (e) {
        if (e & 1ul) result *= acc;
        acc *= acc;
        e >>= 1ul;
    }
    return result;
}

Complex iterate_value(const SelfMap& map, Complex z, long n) {
    for (long k = 0; k < n; ++k) z = map.eval(z);
    return z;
}

void require_halfplane_standard(const SelfMap& map, const Classification& cls, const char* who) {
    if (map.domain() != Domain::HalfPlane)
        throw TypeMismatch(std::string(who) + ": map must be a half-plane self-map");
    if (!cls.boundary || !cls.dw.point.infinite)
        throw TypeMismatch(std::string(who) +
                           ": map must be in standard form (Denjoy-Wolff point at infinity)");
}

ResidualStats collect_residuals(const Conjugation& conj, const std::vector<Complex>& grid) {
    ResidualStats stats;
    stats.points = long(grid.size());
    double sum = 0.0;
    for (Complex z : grid) {
        const double r = conj.residual_at(z);
        stats.max_residual = std::max(stats.max_residual, r);
        sum += r;
    }
    stats.mean_residual = grid.empty() ? 0.0 : sum / double(grid.size());
    return stats;
}

} // namespace

std::vector<Complex> residual_grid(Domain domain, Complex center, double radius) {
    std::vector<Complex> pts;
    const CayleyPair c = cayley(Complex(1.0, 0.0));
    for (int ir = 1; ir <= 10; ++ir) {
        const double rho = radius * double(ir) / 10.0;
        const double s = std::tanh(rho / 2.0);
        for (int ia = 0; ia < 12; ++ia) {
            const double th = 2.0 * std::numbers::pi * double(ia) / 12.0;
            const Complex off = std::polar(s, th);
            if (domain == Domain::Disk) {
                // automorphism moving 0 to the center
                pts.push_back((off + center) / (1.0 + std::conj(center) * off));
            } else {
                // hyperbolic ball around i, then scale/translate to the center
                const Complex base = mobius_apply(c.to_halfplane, off);
                pts.push_back(base * center.imag() + Complex(center.real(), 0.0));
            }
        }
    }
    return pts;
}

Complex Conjugation::evaluate(Complex z) const {
    const Complex w = iterate_value(map, z, depth);
    switch (kind) {
    case ConjugationKind::Koenigs: return inv_scale * (w - fixed_point);
    case ConjugationKind::Valiron: return w / v_norm;
    case ConjugationKind::Pommerenke: return (w - u_norm) / v_norm;
    }
    throw InvalidInput("conjugation: corrupt kind");
}

double Conjugation::residual_at(Complex z) const {
    const Complex sz = evaluate(z);
    const Complex sfz = evaluate(map.eval(z));
    switch (kind) {
    case ConjugationKind::Koenigs: return std::abs(sfz - parameter * sz);
    case ConjugationKind::Valiron: {
        const double denom = std::max(std::abs(sz), 1e-300);
        return std::abs(sfz - parameter * sz) / denom;
    }
    case ConjugationKind::Pommerenke: return std::abs(sfz - sz - parameter);
    }
    throw InvalidInput("conjugation: corrupt kind");
}

Conjugation koenigs(const SelfMap& map, long depth) { return koenigs(map, classify(map), depth); }

Conjugation koenigs(const SelfMap& map, const Classification& cls, long depth) {
    if (cls.kind != MapKind::Elliptic)
        throw TypeMismatch("koenigs: map must be elliptic with an interior fixed point");
    const Complex lambda = cls.multiplier;
    if (std::abs(lambda) < 1e-12)
        throw TypeMismatch("koenigs: derivative vanishes at the fixed point (Boettcher case, "
                           "not supported)");
    if (std::abs(lambda) >= 1.0 - 1e-12)
        throw TypeMismatch("koenigs: |derivative| must be strictly below 1");
    if (depth < 1) throw InvalidInput("koenigs: depth must be >= 1");

    Conjugation conj{ConjugationKind::Koenigs, map, depth, lambda};
    conj.fixed_point = cls.dw.point.value;
    conj.inv_scale = complex_ipow(lambda, -depth);
    conj.residuals = collect_residuals(conj, residual_grid(map.domain(), conj.fixed_point));
    return conj;
}

Conjugation valiron(const SelfMap& map, long depth) { return valiron(map, classify(map), depth); }

Conjugation valiron(const SelfMap& map, const Classification& cls, long depth) {
    if (cls.kind != MapKind::Hyperbolic)
        throw TypeMismatch("valiron: map must be hyperbolic");
    require_halfplane_standard(map, cls, "valiron");
    if (depth < 1) throw InvalidInput("valiron: depth must be >= 1");

    const Complex zN = iterate_value(map, base_point(Domain::HalfPlane), depth);
    Conjugation conj{ConjugationKind::Valiron, map, depth, cls.multiplier};
    conj.v_norm = zN.imag();
    if (!(conj.v_norm > 0.0)) throw InvalidInput("valiron: base orbit left the half-plane");
    conj.residuals =
        collect_residuals(conj, residual_grid(Domain::HalfPlane, base_point(Domain::HalfPlane)));
    return conj;
}

std::vector<double> isogonality_probe(const Conjugation& conj, const std::vector<double>& heights) {
    std::vector<double> out;
    for (double y : heights) {
        const Complex s = conj.evaluate(Complex(0.0, y));
        const double m = std::abs(s);
        out.push_back(m > 0.0 ? std::abs(s / m - Complex(0.0, 1.0)) : 2.0);
    }
    return out;
}

namespace {

// Tail-averaged b = lim (u_{n+1} - u_n) / v_n of a standard-form orbit, with
// a mid-window average to expose a shrinking estimate (type II signal).
struct BEstimate {
    double tail = 0.0;
    double mid = 0.0;
};

BEstimate estimate_b(const Orbit& orbit) {
    std::vector<double> incr;
    for (std::size_t k = 0; k + 1 < orbit.points.size(); ++k) {
        if (orbit.indices[k + 1] - orbit.indices[k] != orbit.stride) continue;
        const double du =
            (orbit.points[k + 1].real() - orbit.points[k].real()) / double(orbit.stride);
        incr.push_back(du / orbit.points[k].imag());
    }
    if (incr.size() < 8) throw InvalidInput("pommerenke: orbit too short for the b estimate");
    BEstimate est;
    est.tail = tail_average(incr, 0.2);
    const std::size_t mid_begin = incr.size() / 2, mid_end = incr.size() * 3 / 4;
    double sum = 0.0;
    for (std::size_t k = mid_begin; k < mid_end; ++k) sum += incr[k];
    est.mid = sum / double(std::max<std::size_t>(1, mid_end - mid_begin));
    return est;
}

} // namespace

Conjugation pommerenke(const SelfMap& map, long depth) {
    return pommerenke(map, classify(map), depth);
}

Conjugation pommerenke(const SelfMap& map, const Classification& cls, long depth) {
    require_halfplane_standard(map, cls, "pommerenke");
    if (depth < 1) throw InvalidInput("pommerenke: depth must be >= 1");
    if (cls.kind != MapKind::ParabolicI && cls.kind != MapKind::ParabolicII)
        throw TypeMismatch("pommerenke: map must be parabolic type I");

    const Orbit orbit = iterate(map, base_point(Domain::HalfPlane), depth);
    if (orbit.last_n() < depth)
        throw InvalidInput("pommerenke: base orbit stopped before the requested depth");
    const BEstimate b = estimate_b(orbit);
    if (cls.kind == MapKind::ParabolicII ||
        (std::abs(b.tail) < 1e-3 && std::abs(b.tail) < std::abs(b.mid)))
        throw TypeMismatch("pommerenke: b estimate vanishes, map looks parabolic type II", b.tail);

    const Complex zN = orbit.last_point();
    Conjugation conj{ConjugationKind::Pommerenke, map, depth, Complex(b.tail, 0.0)};
    conj.u_norm = zN.real();
    conj.v_norm = zN.imag();
    conj.residuals =
        collect_residuals(conj, residual_grid(Domain::HalfPlane, base_point(Domain::HalfPlane)));
    return conj;
}

PolygonalPath PolygonalPath::from_orbit(double anchor_x, const Orbit& base_orbit, long depth) {
    PolygonalPath path;
    path.anchor_x = anchor_x;
    path.vertices.push_back(Complex(anchor_x, 0.0));
    path.vertices.push_back(Complex(0.0, 1.0));
    for (std::size_t k = 0; k < base_orbit.points.size(); ++k) {
        if (base_orbit.indices[k] == 0) continue;
        if (base_orbit.indices[k] > depth) break;
        const Complex v = base_orbit.points[k];
        if (std::abs(v - path.vertices.back()) == 0.0) continue; // vertices must be distinct
        path.vertices.push_back(v);
    }
    path.cumulative_length.resize(path.vertices.size(), 0.0);
    for (std::size_t k = 1; k < path.vertices.size(); ++k)
        path.cumulative_length[k] =
            path.cumulative_length[k - 1] + std::abs(path.vertices[k] - path.vertices[k - 1]);
    return path;
}

Complex PolygonalPath::at_length(double s) const {
    if (vertices.size() < 2) return vertices.empty() ? Complex(0, 0) : vertices[0];
    s = std::clamp(s, 0.0, length());
    const auto it = std::lower_bound(cumulative_length.begin(), cumulative_length.end(), s);
    std::size_t k = std::size_t(it - cumulative_length.begin());
    if (k == 0) return vertices[0];
    const double seg = cumulative_length[k] - cumulative_length[k - 1];
    const double t = seg > 0.0 ? (s - cumulative_length[k - 1]) / seg : 0.0;
    return vertices[k - 1] + t * (vertices[k] - vertices[k - 1]);
}

std::vector<Complex> PolygonalPath::sample(long count) const {
    std::vector<Complex> pts;
    const double total = length();
    for (long k = 1; k <= count; ++k)
        pts.push_back(at_length(total * double(k) / double(count)));
    return pts;
}

ParabolicAsymptotics parabolic_asymptotics(const SelfMap& map, const Classification& cls,
                                           long depth, double anchor_x) {
    require_halfplane_standard(map, cls, "parabolic asymptotics");
    if (cls.kind != MapKind::ParabolicI && cls.kind != MapKind::ParabolicII)
        throw TypeMismatch("parabolic asymptotics: map must be parabolic");

    ParabolicAsymptotics rep;
    const Orbit orbit = iterate(map, base_point(Domain::HalfPlane), depth);

    std::vector<double> ratios, v_over_u;
    for (std::size_t k = 0; k + 1 < orbit.points.size(); ++k) {
        if (orbit.indices[k + 1] - orbit.indices[k] != orbit.stride) continue;
        ratios.push_back(orbit.points[k + 1].imag() / orbit.points[k].imag());
    }
    for (std::size_t k = 0; k < orbit.points.size(); ++k) {
        const double u = orbit.points[k].real();
        if (std::abs(u) > 1e-12) v_over_u.push_back(orbit.points[k].imag() / u);
    }
    const auto keep_tail = [](std::vector<double>& v, std::size_t n) {
        if (v.size() > n) v.erase(v.begin(), v.end() - long(n));
    };
    rep.v_ratio_limit = ratios.empty() ? 0.0 : tail_limit(ratios).value;
    rep.v_over_u_limit = v_over_u.empty() ? 0.0 : tail_average(v_over_u, 0.1);
    rep.v_ratio_tail = ratios;
    rep.v_over_u_tail = v_over_u;
    keep_tail(rep.v_ratio_tail, 8);
    keep_tail(rep.v_over_u_tail, 8);

    // growth of |phi_n| along the path for a small fixed n
    rep.growth_n = 5;
    const PolygonalPath probe_path =
        PolygonalPath::from_orbit(anchor_x, orbit, std::min<long>(depth, 64));
    for (Complex z : probe_path.sample(32))
        rep.abs_phi_along_path.push_back(std::abs(iterate_value(map, z, rep.growth_n)));

    if (cls.kind == MapKind::ParabolicI) {
        try {
            const Conjugation conj = pommerenke(map, cls, depth);
            rep.sigma_probes = true;
            rep.b = conj.parameter.real();
            const long base_depth = std::max<long>(8, std::min<long>(depth, 512) / 4);
            const PolygonalPath p1 = PolygonalPath::from_orbit(anchor_x, orbit, base_depth);
            const PolygonalPath p2 = PolygonalPath::from_orbit(anchor_x, orbit, 2 * base_depth);
            auto min_re = [&](const PolygonalPath& p) {
                double m = std::numeric_limits<double>::infinity();
                for (Complex z : p.sample(64)) m = std::min(m, conj.evaluate(z).real());
                return m;
            };
            rep.min_re_sigma = min_re(p1);
            rep.min_re_sigma_extended = min_re(p2);
            rep.re_sigma_stabilized =
                rep.min_re_sigma_extended >= rep.min_re_sigma - 1e-3;
        } catch (const TypeMismatch&) {
            rep.sigma_probes = false;
        }
    }
    return rep;
}

} // namespace dwlab
