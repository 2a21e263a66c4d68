#pragma once

#include "dwlab/complex_ext.hpp"

namespace dwlab {

// M(z) = (a z + b) / (c z + d), ad - bc != 0.
struct Mobius {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    Complex det() const { return a * d - b * c; }

    static Mobius identity() { return {}; }

    // (z - u) / v
    static Mobius renormalize(Complex u, Complex v);
};

// Throws InvalidInput when |det| <= 1e-12.
void check_nonsingular(const Mobius& m);

ExtComplex mobius_apply(const Mobius& m, ExtComplex z);
Complex mobius_apply(const Mobius& m, Complex z);

// apply(compose(f, g), z) == apply(f, apply(g, z))
Mobius mobius_compose(const Mobius& f, const Mobius& g);
Mobius mobius_invert(const Mobius& m);

// Coefficients divided by a square root of the determinant, sign fixed so
// Re(a + d) >= 0. Identity-comparison friendly.
Mobius mobius_normalize(const Mobius& m);

// Derivative of the Mobius action at a finite point, (ad - bc)/(cz + d)^2.
Complex mobius_derivative(const Mobius& m, Complex z);

// Change of variables sending the disk onto the upper half-plane with the
// boundary point p (|p| = 1) going to infinity and 0 to i:
//   C(z) = i (p + z) / (p - z),  C^{-1}(w) = p (w - i) / (w + i).
struct CayleyPair {
    Mobius to_halfplane;
    Mobius to_disk;
};
CayleyPair cayley(Complex p);

// Half-plane height region Im z > t.
struct Horodisk {
    double height;

    explicit Horodisk(double t);
    bool contains(Complex z) const { return z.imag() > height; }
};

} // namespace dwlab
