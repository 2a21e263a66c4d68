#pragma once

#include "dwlab/complex_ext.hpp"
#include "dwlab/hyperbolic.hpp"

#include <cstdint>

namespace dwlab {

// Deterministic generator; fixed seed gives byte-identical experiment output
// regardless of thread count (each work item derives its own stream).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Independent stream for work item k of a seeded experiment.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t k) {
        SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ull * (k + 1)));
        g.next();
        return g;
    }
};

// Area-uniform sample of the disk |z| < rmax.
Complex sample_disk(SplitMix64& g, double rmax = 0.999);

// Uniform direction on the unit circle.
Complex sample_circle(SplitMix64& g);

// Box sample of the half-plane, log-uniform in height.
Complex sample_halfplane(SplitMix64& g, double xmax = 5.0, double ymin = 0.05, double ymax = 5.0);

Complex sample_domain(SplitMix64& g, Domain d);

} // namespace dwlab
