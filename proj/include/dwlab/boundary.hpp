#pragma once

#include "dwlab/classify.hpp"
#include "dwlab/selfmap.hpp"

#include <array>
#include <string>
#include <vector>

namespace dwlab {

// Geometric approach schedule toward the boundary: gap_k = 10^{-k gamma},
// k = 1..depth (disk radius r_k = 1 - gap_k, half-plane height gap_k).
// gamma is scaled with the iterate index so the deep regime of inner-map
// iterates is visible, capped so the gap stays representable.
struct RadialSchedule {
    int depth = 12;
    double max_exponent = 12.0;

    static RadialSchedule for_iterate(long n, int depth = 12);
    std::vector<double> gaps() const;
};

// Non-tangential approach region |zeta - z| < kappa (1 - |z|).
struct StolzAngle {
    Complex vertex;
    double kappa;

    StolzAngle(Complex zeta, double aperture);
    bool contains(Complex z) const;
};

enum class RadialVerdict { Converged, Escaped, Undecided };

const char* to_string(RadialVerdict v);

struct RadialLimitEstimate {
    Complex zeta{1.0, 0.0};
    long n = 1;
    std::vector<std::pair<double, Complex>> samples; // (gap, phi_n at the point)
    RadialVerdict verdict = RadialVerdict::Undecided;
    Complex limit{0.0, 0.0}; // Aitken limit, or the unimodular cluster for a
                             // disk orbit drifting to the rim
    double extrapolation_error = 0.0;
    bool mod1_cluster = false;
};

// Estimates lim phi_n(r zeta) as r -> 1 (disk) or lim phi_n(x + it), t -> 0
// (half-plane, zeta = x real). The verdict covers failure; no exceptions.
RadialLimitEstimate radial_limit(const SelfMap& map, long n, Complex zeta,
                                 const RadialSchedule& schedule);
RadialLimitEstimate radial_limit(const SelfMap& map, long n, Complex zeta);

// Modulus statistics of first-iterate radial limits at random directions.
struct InnerTestReport {
    long samples = 0;
    long decided = 0;
    double frac_mod1 = 0.0; // decided samples with |limit| > 1 - 1e-3
    double frac_low = 0.0;  // decided samples with |limit| < 1 - 1e-2
    enum class Verdict { Inner, NotInner, Undecided } verdict = Verdict::Undecided;
    std::array<long, 21> histogram{}; // |limit| bins of width 0.05
};

// Throws SolverError when fewer than half the samples reach a verdict.
InnerTestReport inner_test(const SelfMap& map, long samples, std::uint64_t seed = 20240902ull);

struct ExperimentOptions {
    long n_max = 30;
    long samples = 500;
    std::uint64_t seed = 20240903ull;
    double escape_modulus = 1e3; // boundary mode: |phi_n| beyond this counts as escaped
    double x_min = 0.1;          // half-plane sampling |x| >= x_min
    double x_max = 10.0;
    int schedule_depth = 12;
};

struct SampleOutcome {
    Complex zeta{1.0, 0.0}; // direction (disk) or real point (half-plane)
    enum class Category { ConvergedToP, Escaped, Mod1, Undecided } category =
        Category::Undecided;
    double final_distance = 0.0; // to p (elliptic) or final |value| (boundary)
    long decided_at = -1;        // first n where the category fired
    bool used_shortcut = false;  // interior landing continued by direct iteration
};

struct ConvergenceReport {
    MapKind kind = MapKind::Undecided;
    bool boundary_mode = false;
    long n_max = 0;
    long samples = 0;
    double frac_converged = 0.0; // to p, or escaped to infinity in boundary mode
    double frac_mod1 = 0.0;
    double frac_undecided = 0.0;
    std::vector<long> checkpoints; // n values of the fraction series
    std::vector<double> converged_series, mod1_series, undecided_series;
    std::vector<SampleOutcome> outcomes;
    long shortcut_used = 0;
};

// Per-direction boundary-limit tracking of phi_n toward the Denjoy-Wolff
// point. Elliptic maps run on the circle; boundary-DW maps run on the real
// line after the standard-form change of variables. Escape uses first
// passage beyond escape_modulus.
ConvergenceReport convergence_experiment(const SelfMap& map, const Classification& cls,
                                         const ExperimentOptions& opts = {});

struct Parabolic2Probe {
    ConvergenceReport trajectories;
    InnerTestReport inner;
    std::string flag; // fixed exploratory marker, no pass/fail semantics
};

// Evidence gathering for the open type II question; requires a parabolic
// type II classification.
Parabolic2Probe parabolic2_probe(const SelfMap& map, const Classification& cls,
                                 const ExperimentOptions& opts = {});

} // namespace dwlab
