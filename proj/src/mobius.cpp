#include "dwlab/mobius.hpp"

#include "dwlab/error.hpp"

#include <cmath>

namespace dwlab {

Mobius Mobius::renormalize(Complex u, Complex v) {
    Mobius m{Complex(1.0), -u, Complex(0.0), v};
    check_nonsingular(m);
    return m;
}

void check_nonsingular(const Mobius& m) {
    if (std::abs(m.det()) <= 1e-12)
        throw InvalidInput("mobius: singular transform (|ad - bc| <= 1e-12)");
}

ExtComplex mobius_apply(const Mobius& m, ExtComplex z) {
    if (z.infinite) {
        if (std::abs(m.c) == 0.0) return ExtComplex::infinity();
        return ExtComplex(m.a / m.c);
    }
    const Complex den = m.c * z.value + m.d;
    const Complex num = m.a * z.value + m.b;
    if (std::abs(den) == 0.0) return ExtComplex::infinity();
    return ExtComplex(num / den);
}

Complex mobius_apply(const Mobius& m, Complex z) {
    ExtComplex w = mobius_apply(m, ExtComplex(z));
    if (w.infinite) throw InvalidInput("mobius: image is the point at infinity");
    return w.value;
}

Mobius mobius_compose(const Mobius& f, const Mobius& g) {
    return {f.a * g.a + f.b * g.c, f.a * g.b + f.b * g.d,
            f.c * g.a + f.d * g.c, f.c * g.b + f.d * g.d};
}

Mobius mobius_invert(const Mobius& m) {
    check_nonsingular(m);
    return {m.d, -m.b, -m.c, m.a};
}

Mobius mobius_normalize(const Mobius& m) {
    check_nonsingular(m);
    const Complex s = std::sqrt(m.det());
    Mobius r{m.a / s, m.b / s, m.c / s, m.d / s};
    if ((r.a + r.d).real() < 0.0) {
        r.a = -r.a;
        r.b = -r.b;
        r.c = -r.c;
        r.d = -r.d;
    }
    return r;
}

Complex mobius_derivative(const Mobius& m, Complex z) {
    const Complex den = m.c * z + m.d;
    if (std::abs(den) == 0.0) throw InvalidInput("mobius: derivative at a pole");
    return m.det() / (den * den);
}

CayleyPair cayley(Complex p) {
    if (std::abs(std::abs(p) - 1.0) > 1e-12)
        throw InvalidInput("cayley: anchor must be a unit-modulus boundary point");
    const Complex i(0.0, 1.0);
    CayleyPair pair;
    pair.to_halfplane = Mobius{i, i * p, Complex(-1.0), p};
    pair.to_disk = Mobius{p, -i * p, Complex(1.0), i};
    return pair;
}

Horodisk::Horodisk(double t) : height(t) {
    if (!(t > 0.0)) throw InvalidInput("horodisk: height must be positive");
}

} // namespace dwlab
