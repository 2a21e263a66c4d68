#pragma once

#include "dwlab/classify.hpp"
#include "dwlab/selfmap.hpp"

#include <vector>

namespace dwlab {

enum class ConjugationKind { Koenigs, Valiron, Pommerenke };

const char* to_string(ConjugationKind k);

struct ResidualStats {
    double max_residual = 0.0;
    double mean_residual = 0.0;
    long points = 0;
};

// Numerically realized conjugating map sigma_N at truncation depth N:
//   koenigs     sigma = lambda^{-N} (phi_N(z) - p),   sigma o phi = lambda sigma
//   valiron     sigma = phi_N(z) / Im phi_N(i),       sigma o phi = A sigma
//   pommerenke  sigma = (phi_N(z) - u_N) / v_N,       sigma o phi = sigma + b
struct Conjugation {
    ConjugationKind kind;
    SelfMap map;
    long depth;
    Complex parameter;            // lambda, A, or b
    Complex fixed_point{0.0, 0.0}; // koenigs only
    Complex inv_scale{1.0, 0.0};   // koenigs: lambda^{-N}
    double u_norm = 0.0; // pommerenke: u_N
    double v_norm = 1.0; // valiron/pommerenke: v_N
    ResidualStats residuals{};

    Complex evaluate(Complex z) const;
    // functional-equation residual at one point (relative for valiron)
    double residual_at(Complex z) const;
};

// Test grid: hyperbolic ball of the given radius around the relevant base
// point (p for koenigs, i otherwise), >= 100 points.
std::vector<Complex> residual_grid(Domain domain, Complex center, double radius = 2.0);

Conjugation koenigs(const SelfMap& map, long depth = 40);
Conjugation koenigs(const SelfMap& map, const Classification& cls, long depth);

Conjugation valiron(const SelfMap& map, long depth = 30);
Conjugation valiron(const SelfMap& map, const Classification& cls, long depth);

Conjugation pommerenke(const SelfMap& map, long depth = 1000);
Conjugation pommerenke(const SelfMap& map, const Classification& cls, long depth);

// Isogonality probe for valiron: deviation of sigma(i y)/|sigma(i y)| from i
// at the given heights (tends to 0 when sigma is isogonal at infinity).
std::vector<double> isogonality_probe(const Conjugation& conj,
                                      const std::vector<double>& heights = {1e2, 1e3, 1e4});

// P = [x, i] u [i, z_1] u [z_1, z_2] u ... with arc-length metadata.
struct PolygonalPath {
    double anchor_x = 0.0;
    std::vector<Complex> vertices;
    std::vector<double> cumulative_length;

    static PolygonalPath from_orbit(double anchor_x, const Orbit& base_orbit, long depth);
    double length() const { return cumulative_length.empty() ? 0.0 : cumulative_length.back(); }
    Complex at_length(double s) const;
    // count points spread uniformly in arc length, anchor endpoint excluded
    std::vector<Complex> sample(long count) const;
};

struct ParabolicAsymptotics {
    std::vector<double> v_ratio_tail;    // Im z_{n+1} / Im z_n, last stretch
    double v_ratio_limit = 0.0;          // -> 1
    std::vector<double> v_over_u_tail;   // v_n / u_n
    double v_over_u_limit = 0.0;         // -> 0 for type I with b > 0
    bool sigma_probes = false;           // pommerenke conjugation available
    double b = 0.0;
    double min_re_sigma = 0.0;           // over the sampled path
    double min_re_sigma_extended = 0.0;  // path twice as deep
    bool re_sigma_stabilized = false;
    long growth_n = 0;                   // fixed iterate index for the growth probe
    std::vector<double> abs_phi_along_path; // |phi_n| at increasing arc positions
};

// Tail checks of the standard-form orbit (v-ratio to 1, v/u to 0) plus the
// path probes: boundedness of Re sigma along P and escape of |phi_n| along P.
ParabolicAsymptotics parabolic_asymptotics(const SelfMap& map, const Classification& cls,
                                           long depth = 1000, double anchor_x = -2.0);

} // namespace dwlab
