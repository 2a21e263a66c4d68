#pragma once

#include <cmath>
#include <complex>

namespace dwlab {

using Complex = std::complex<double>;

// Complex value extended with a tagged point at infinity. The tag is a real
// sentinel, never NaN, so orbits that escape (Denjoy-Wolff point at infinity)
// stay representable and testable.
struct ExtComplex {
    Complex value{0.0, 0.0};
    bool infinite = false;

    ExtComplex() = default;
    ExtComplex(Complex v) : value(v) {}
    ExtComplex(double re, double im) : value(re, im) {}

    static ExtComplex infinity() {
        ExtComplex e;
        e.infinite = true;
        return e;
    }

    bool finite() const { return !infinite; }

    friend bool operator==(const ExtComplex& a, const ExtComplex& b) {
        if (a.infinite || b.infinite) return a.infinite == b.infinite;
        return a.value == b.value;
    }
};

inline bool is_finite_number(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

} // namespace dwlab
