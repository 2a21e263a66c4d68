#include "dwlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace dwlab {

Complex sample_disk(SplitMix64& g, double rmax) {
    const double r = rmax * std::sqrt(g.uniform01());
    const double th = 2.0 * std::numbers::pi * g.uniform01();
    return Complex(r * std::cos(th), r * std::sin(th));
}

Complex sample_circle(SplitMix64& g) {
    const double th = 2.0 * std::numbers::pi * g.uniform01();
    return Complex(std::cos(th), std::sin(th));
}

Complex sample_halfplane(SplitMix64& g, double xmax, double ymin, double ymax) {
    const double x = g.uniform(-xmax, xmax);
    const double y = std::exp(g.uniform(std::log(ymin), std::log(ymax)));
    return Complex(x, y);
}

Complex sample_domain(SplitMix64& g, Domain d) {
    return d == Domain::Disk ? sample_disk(g) : sample_halfplane(g);
}

} // namespace dwlab
