#pragma once

#include "dwlab/complex_ext.hpp"
#include "dwlab/expr.hpp"
#include "dwlab/hyperbolic.hpp"
#include "dwlab/mobius.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dwlab {

// An evaluable holomorphic self-map of the disk or the half-plane: a catalog
// entry, a parsed expression, a composition chain, or a Mobius conjugate of
// another self-map. Immutable and freely shareable across threads.
class SelfMap {
public:
    Domain domain() const;
    const std::string& name() const;

    Complex eval(Complex z) const;

    // Closed form when the body carries one, otherwise central complex finite
    // differences with step 1e-6 * dist(z, boundary). Throws when z sits
    // within 1e-12 of the boundary and no closed form is available.
    Complex derivative(Complex z) const;
    bool has_closed_derivative() const;

    // Exact n-th iterate where the catalog knows one (oracle hook).
    std::optional<Complex> closed_iterate(long n, Complex z) const;

    static SelfMap from_expression(const std::string& text, Domain d);
    static SelfMap from_catalog(const std::string& name);
    static SelfMap compose_chain(std::vector<SelfMap> parts); // applied left to right

    // forward o phi o inverse on the target domain. cayley_conjugate moves a
    // map between models anchored at a boundary point p.
    SelfMap mobius_conjugate(const Mobius& forward, const Mobius& inverse, Domain target,
                             const std::string& label) const;
    SelfMap cayley_conjugate(Complex p) const;

    struct Body;

private:
    explicit SelfMap(std::shared_ptr<const Body> body);
    std::shared_ptr<const Body> body_;
};

// Canonical names of all built-in maps ("catalog:disk:z/2", ...).
std::vector<std::string> catalog_names();

// Plain finite-difference derivative, bypassing any closed form (kept
// callable for tests of the fallback path).
Complex finite_difference_derivative(const SelfMap& map, Complex z);

// Forward iteration record. Points are stored densely up to 1e5 steps;
// beyond that a stride keeps memory bounded (the final point is always kept).
struct Orbit {
    std::string map_name;
    Domain domain = Domain::Disk;
    Complex z0{0.0, 0.0};
    long requested_steps = 0;
    long stride = 1;
    std::vector<long> indices;  // n of each stored point
    std::vector<Complex> points;
    std::vector<double> steps;  // steps[k] = s_n at n = k*stride, s_n = rho(z_n, z_{n+1})
    bool escaped = false;       // |z| > 1e300 or within 1e-15 of the circle
    bool stagnated = false;     // consecutive points numerically identical

    long last_n() const { return indices.empty() ? 0 : indices.back(); }
    Complex last_point() const { return points.back(); }
    // z_n for dense orbits (stride 1). Throws if n was not stored.
    Complex point_at(long n) const;
};

// Exact forward composition z_0 .. z_N with hyperbolic steps. Stops early
// with the escape flag when the point leaves the representable range or
// approaches the disk rim within 1e-15.
Orbit iterate(const SelfMap& map, Complex z0, long steps);

// Statistical self-map check: random points for domain violations, random
// pairs for violations of the Schwarz-Pick contraction.
struct ValidationReport {
    long samples = 0;
    double worst_domain_violation = 0.0;      // max excess outside the domain
    Complex worst_domain_point{0.0, 0.0};
    double worst_contraction_violation = 0.0; // max rho(fz,fw) - rho(z,w)
    long domain_violations = 0;
    long contraction_violations = 0;          // beyond 1e-9

    bool valid() const {
        return worst_domain_violation <= 1e-9 && worst_contraction_violation <= 1e-9;
    }
};

ValidationReport validate_selfmap(const SelfMap& map, long sample_count,
                                  std::uint64_t seed = 20240901ull);

} // namespace dwlab
