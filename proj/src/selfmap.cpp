#include "dwlab/selfmap.hpp"

#include "dwlab/error.hpp"
#include "dwlab/rng.hpp"

#include <charconv>
#include <cmath>
#include <utility>

namespace dwlab {

struct SelfMap::Body {
    Domain domain;
    std::string name;

    Body(Domain d, std::string n) : domain(d), name(std::move(n)) {}
    virtual ~Body() = default;

    virtual Complex eval(Complex z) const = 0;
    virtual std::optional<Complex> closed_derivative(Complex z) const = 0;
    virtual std::optional<Complex> closed_iterate(long, Complex) const { return std::nullopt; }
};

namespace {

Complex guarded_div(Complex num, Complex den, const char* what) {
    if (std::abs(den) == 0.0) throw InvalidInput(what);
    return num / den;
}

enum class CatalogId {
    ZHalf,        // disk z/2
    ZSquared,     // disk z^2
    ZOverTwoMinusZ, // disk z/(2-z)
    Blaschke,     // disk z(z+a)/(1+az)
    TwoZ,         // halfplane 2z
    TwoZPlusI,    // halfplane 2z+i
    ZPlusOne,     // halfplane z+1
    ZPlusI,       // halfplane z+i
    ZPlusOneMinusInv, // halfplane z+1-1/z
};

struct CatalogBody final : SelfMap::Body {
    CatalogId id;
    double a = 0.5; // Blaschke parameter

    CatalogBody(CatalogId id_, Domain d, std::string n, double a_ = 0.5)
        : Body(d, std::move(n)), id(id_), a(a_) {}

    Complex eval(Complex z) const override {
        const Complex i(0.0, 1.0);
        switch (id) {
        case CatalogId::ZHalf: return 0.5 * z;
        case CatalogId::ZSquared: return z * z;
        case CatalogId::ZOverTwoMinusZ: return guarded_div(z, 2.0 - z, "catalog: pole of z/(2-z)");
        case CatalogId::Blaschke:
            return guarded_div(z * (z + a), 1.0 + a * z, "catalog: pole of blaschke map");
        case CatalogId::TwoZ: return 2.0 * z;
        case CatalogId::TwoZPlusI: return 2.0 * z + i;
        case CatalogId::ZPlusOne: return z + 1.0;
        case CatalogId::ZPlusI: return z + i;
        case CatalogId::ZPlusOneMinusInv:
            return z + 1.0 - guarded_div(Complex(1.0), z, "catalog: pole of z+1-1/z at 0");
        }
        throw InvalidInput("catalog: corrupt id");
    }

    std::optional<Complex> closed_derivative(Complex z) const override {
        switch (id) {
        case CatalogId::ZHalf: return Complex(0.5);
        case CatalogId::ZSquared: return 2.0 * z;
        case CatalogId::ZOverTwoMinusZ: {
            const Complex d = 2.0 - z;
            return guarded_div(Complex(2.0), d * d, "catalog: pole of z/(2-z)");
        }
        case CatalogId::Blaschke: {
            const Complex d = 1.0 + a * z;
            return guarded_div(2.0 * z + a * z * z + a, d * d, "catalog: pole of blaschke map");
        }
        case CatalogId::TwoZ:
        case CatalogId::TwoZPlusI: return Complex(2.0);
        case CatalogId::ZPlusOne:
        case CatalogId::ZPlusI: return Complex(1.0);
        case CatalogId::ZPlusOneMinusInv:
            return 1.0 + guarded_div(Complex(1.0), z * z, "catalog: pole of z+1-1/z at 0");
        }
        return std::nullopt;
    }

    std::optional<Complex> closed_iterate(long n, Complex z) const override {
        const Complex i(0.0, 1.0);
        switch (id) {
        case CatalogId::ZHalf:
            return Complex(std::ldexp(z.real(), -int(std::min<long>(n, 2000))),
                           std::ldexp(z.imag(), -int(std::min<long>(n, 2000))));
        case CatalogId::ZSquared: {
            Complex w = z;
            for (long k = 0; k < n; ++k) {
                w = w * w;
                if (std::abs(w) == 0.0) break;
            }
            return w;
        }
        case CatalogId::ZOverTwoMinusZ: {
            const double p2 = std::exp2(double(n));
            if (!std::isfinite(p2)) return std::abs(1.0 - z) == 0.0 ? Complex(1.0) : Complex(0.0);
            return z / (p2 * (1.0 - z) + z);
        }
        case CatalogId::TwoZ: {
            const Complex w = std::exp2(double(n)) * z;
            return is_finite_number(w) ? std::optional<Complex>(w) : std::nullopt;
        }
        case CatalogId::TwoZPlusI: {
            const double p2 = std::exp2(double(n));
            const Complex w = p2 * z + (p2 - 1.0) * i;
            return is_finite_number(w) ? std::optional<Complex>(w) : std::nullopt;
        }
        case CatalogId::ZPlusOne: return z + double(n);
        case CatalogId::ZPlusI: return z + double(n) * i;
        default: return std::nullopt;
        }
    }
};

struct ExprBody final : SelfMap::Body {
    ExprPtr f;
    ExprPtr df;

    ExprBody(Domain d, std::string n, ExprPtr tree)
        : Body(d, std::move(n)), f(tree), df(differentiate(tree)) {}

    Complex eval(Complex z) const override { return eval_expr(*f, z); }
    std::optional<Complex> closed_derivative(Complex z) const override {
        return eval_expr(*df, z);
    }
};

struct ChainBody final : SelfMap::Body {
    std::vector<SelfMap> parts; // applied front to back

    ChainBody(Domain d, std::string n, std::vector<SelfMap> p)
        : Body(d, std::move(n)), parts(std::move(p)) {}

    Complex eval(Complex z) const override {
        for (const SelfMap& m : parts) z = m.eval(z);
        return z;
    }

    std::optional<Complex> closed_derivative(Complex z) const override {
        Complex prod(1.0, 0.0);
        for (const SelfMap& m : parts) {
            if (!m.has_closed_derivative()) return std::nullopt;
            prod *= m.derivative(z);
            z = m.eval(z);
        }
        return prod;
    }
};

struct ConjBody final : SelfMap::Body {
    SelfMap inner;
    Mobius fwd, inv;

    ConjBody(Domain d, std::string n, SelfMap in, Mobius f, Mobius i)
        : Body(d, std::move(n)), inner(std::move(in)), fwd(f), inv(i) {}

    Complex eval(Complex z) const override {
        return mobius_apply(fwd, inner.eval(mobius_apply(inv, z)));
    }

    std::optional<Complex> closed_derivative(Complex z) const override {
        if (!inner.has_closed_derivative()) return std::nullopt;
        const Complex w = mobius_apply(inv, z);
        return mobius_derivative(fwd, inner.eval(w)) * inner.derivative(w) *
               mobius_derivative(inv, z);
    }

    std::optional<Complex> closed_iterate(long n, Complex z) const override {
        const ExtComplex w = mobius_apply(inv, ExtComplex(z));
        if (w.infinite) return std::nullopt;
        auto it = inner.closed_iterate(n, w.value);
        if (!it) return std::nullopt;
        const ExtComplex out = mobius_apply(fwd, ExtComplex(*it));
        return out.infinite ? std::nullopt : std::optional<Complex>(out.value);
    }
};

struct CatalogSpec {
    const char* key;
    CatalogId id;
    Domain domain;
};

constexpr CatalogSpec kCatalog[] = {
    {"z/2", CatalogId::ZHalf, Domain::Disk},
    {"z^2", CatalogId::ZSquared, Domain::Disk},
    {"z/(2-z)", CatalogId::ZOverTwoMinusZ, Domain::Disk},
    {"blaschke", CatalogId::Blaschke, Domain::Disk},
    {"2z", CatalogId::TwoZ, Domain::HalfPlane},
    {"2z+i", CatalogId::TwoZPlusI, Domain::HalfPlane},
    {"z+1", CatalogId::ZPlusOne, Domain::HalfPlane},
    {"z+i", CatalogId::ZPlusI, Domain::HalfPlane},
    {"z+1-1/z", CatalogId::ZPlusOneMinusInv, Domain::HalfPlane},
};

std::string domain_tag(Domain d) { return d == Domain::Disk ? "disk" : "halfplane"; }

} // namespace

SelfMap::SelfMap(std::shared_ptr<const Body> body) : body_(std::move(body)) {}

Domain SelfMap::domain() const { return body_->domain; }
const std::string& SelfMap::name() const { return body_->name; }

Complex SelfMap::eval(Complex z) const { return body_->eval(z); }

bool SelfMap::has_closed_derivative() const {
    return body_->closed_derivative(base_point(body_->domain)).has_value();
}

Complex SelfMap::derivative(Complex z) const {
    if (auto d = body_->closed_derivative(z)) return *d;
    return finite_difference_derivative(*this, z);
}

std::optional<Complex> SelfMap::closed_iterate(long n, Complex z) const {
    return body_->closed_iterate(n, z);
}

SelfMap SelfMap::from_expression(const std::string& text, Domain d) {
    ExprPtr tree = parse_expression(text);
    const std::string canonical = print_expr(*tree);
    return SelfMap(std::make_shared<ExprBody>(d, "expr:" + domain_tag(d) + ":" + canonical, tree));
}

SelfMap SelfMap::from_catalog(const std::string& name) {
    std::string rest = name;
    if (rest.rfind("catalog:", 0) == 0) rest = rest.substr(8);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
        throw InvalidInput("catalog: expected '<domain>:<map>' in '" + name + "'");
    const std::string dom = rest.substr(0, colon);
    std::string key = rest.substr(colon + 1);
    Domain d;
    if (dom == "disk")
        d = Domain::Disk;
    else if (dom == "halfplane")
        d = Domain::HalfPlane;
    else
        throw InvalidInput("catalog: unknown domain '" + dom + "'");

    double a = 0.5;
    if (key.rfind("blaschke", 0) == 0 && key.size() > 8 && key[8] == ':') {
        const std::string param = key.substr(9);
        char* end = nullptr;
        a = std::strtod(param.c_str(), &end);
        if (end == param.c_str() || *end != '\0' || !(a > 0.0 && a < 1.0))
            throw InvalidInput("catalog: blaschke parameter must be a real in (0,1)");
        key = "blaschke";
    }

    for (const CatalogSpec& spec : kCatalog) {
        if (key == spec.key && d == spec.domain) {
            std::string canon = "catalog:" + dom + ":" + key;
            if (spec.id == CatalogId::Blaschke) canon += ":" + std::to_string(a);
            return SelfMap(std::make_shared<CatalogBody>(spec.id, d, canon, a));
        }
    }
    throw InvalidInput("catalog: no map named '" + name + "'");
}

SelfMap SelfMap::compose_chain(std::vector<SelfMap> parts) {
    if (parts.empty()) throw InvalidInput("compose: empty chain");
    const Domain d = parts.front().domain();
    std::string n = "chain:";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].domain() != d) throw InvalidInput("compose: mixed domains in chain");
        if (i) n += " ; ";
        n += parts[i].name();
    }
    return SelfMap(std::make_shared<ChainBody>(d, std::move(n), std::move(parts)));
}

SelfMap SelfMap::mobius_conjugate(const Mobius& forward, const Mobius& inverse, Domain target,
                                  const std::string& label) const {
    check_nonsingular(forward);
    check_nonsingular(inverse);
    return SelfMap(std::make_shared<ConjBody>(target, label, *this, forward, inverse));
}

SelfMap SelfMap::cayley_conjugate(Complex p) const {
    const CayleyPair pair = cayley(p);
    if (domain() == Domain::Disk)
        return mobius_conjugate(pair.to_halfplane, pair.to_disk, Domain::HalfPlane,
                                "cayley:" + name());
    return mobius_conjugate(pair.to_disk, pair.to_halfplane, Domain::Disk, "cayley:" + name());
}

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (const CatalogSpec& spec : kCatalog)
        names.push_back("catalog:" + domain_tag(spec.domain) + ":" + std::string(spec.key));
    return names;
}

Complex finite_difference_derivative(const SelfMap& map, Complex z) {
    const double dist = boundary_distance(map.domain(), z);
    if (dist <= 1e-12)
        throw InvalidInput("derivative: point too close to the domain boundary");
    const double h = 1e-6 * dist;
    return (map.eval(z + Complex(h, 0.0)) - map.eval(z - Complex(h, 0.0))) / (2.0 * h);
}

Complex Orbit::point_at(long n) const {
    if (stride == 1 && n >= 0 && n < long(points.size()) && indices[std::size_t(n)] == n)
        return points[std::size_t(n)];
    for (std::size_t i = 0; i < indices.size(); ++i)
        if (indices[i] == n) return points[i];
    throw InvalidInput("orbit: point index not stored");
}

Orbit iterate(const SelfMap& map, Complex z0, long steps) {
    if (steps < 1) throw InvalidInput("iterate: step count must be >= 1");
    if (!in_domain(map.domain(), z0)) throw InvalidInput("iterate: z0 outside the map's domain");

    const Domain dom = map.domain();
    Orbit orbit;
    orbit.map_name = map.name();
    orbit.domain = dom;
    orbit.z0 = z0;
    orbit.requested_steps = steps;
    orbit.stride = 1 + steps / 100000;

    auto want = [&](long n) { return n % orbit.stride == 0; };
    orbit.indices.push_back(0);
    orbit.points.push_back(z0);

    Complex z = z0;
    for (long n = 0; n < steps; ++n) {
        const Complex w = map.eval(z);
        if (!is_finite_number(w)) {
            orbit.escaped = true;
            break;
        }
        if (dom == Domain::Disk) {
            if (std::abs(w) >= 1.0) {
                orbit.escaped = true;
                break;
            }
            if (1.0 - std::abs(w) < 1e-15) {
                if (want(n)) orbit.steps.push_back(hyp_dist_disk_raw(z, w));
                orbit.indices.push_back(n + 1);
                orbit.points.push_back(w);
                orbit.escaped = true;
                return orbit;
            }
        } else {
            if (w.imag() <= 0.0) {
                orbit.escaped = true;
                break;
            }
            if (std::abs(w) > 1e300) {
                if (want(n)) orbit.steps.push_back(hyp_dist_halfplane_raw(z, w));
                orbit.indices.push_back(n + 1);
                orbit.points.push_back(w);
                orbit.escaped = true;
                return orbit;
            }
        }

        const double s = dom == Domain::Disk ? hyp_dist_disk_raw(z, w)
                                             : hyp_dist_halfplane_raw(z, w);
        if (want(n)) orbit.steps.push_back(s);
        if (want(n + 1)) {
            orbit.indices.push_back(n + 1);
            orbit.points.push_back(w);
        }
        if (w == z) {
            if (!want(n + 1)) {
                orbit.indices.push_back(n + 1);
                orbit.points.push_back(w);
            }
            orbit.stagnated = true;
            return orbit;
        }
        z = w;
        if (n + 1 == steps && !want(n + 1)) {
            orbit.indices.push_back(n + 1);
            orbit.points.push_back(w);
        }
    }
    return orbit;
}

ValidationReport validate_selfmap(const SelfMap& map, long sample_count, std::uint64_t seed) {
    if (sample_count < 1) throw InvalidInput("validate: sample count must be >= 1");
    const Domain dom = map.domain();
    ValidationReport rep;
    rep.samples = sample_count;
    SplitMix64 g(seed);

    auto excess = [&](Complex w) {
        if (!is_finite_number(w)) return 1.0;
        return dom == Domain::Disk ? std::max(0.0, std::abs(w) - 1.0)
                                   : std::max(0.0, -w.imag());
    };

    for (long k = 0; k < sample_count; ++k) {
        const Complex z = sample_domain(g, dom);
        const Complex w = sample_domain(g, dom);
        Complex fz, fw;
        bool ok = true;
        try {
            fz = map.eval(z);
            fw = map.eval(w);
        } catch (const InvalidInput&) {
            ok = false; // interior pole counts as a gross domain violation
        }
        if (!ok) {
            rep.domain_violations++;
            if (1.0 > rep.worst_domain_violation) {
                rep.worst_domain_violation = 1.0;
                rep.worst_domain_point = z;
            }
            continue;
        }
        for (auto [src, img] : {std::pair{z, fz}, std::pair{w, fw}}) {
            const double e = excess(img);
            if (e > 0.0) rep.domain_violations++;
            if (e > rep.worst_domain_violation) {
                rep.worst_domain_violation = e;
                rep.worst_domain_point = src;
            }
        }
        if (in_domain(dom, fz) && in_domain(dom, fw)) {
            const double gap = hyp_dist(dom, fz, fw) - hyp_dist(dom, z, w);
            if (gap > rep.worst_contraction_violation) rep.worst_contraction_violation = gap;
            if (gap > 1e-9) rep.contraction_violations++;
        }
    }
    return rep;
}

} // namespace dwlab
