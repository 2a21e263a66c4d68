#pragma once

#include "dwlab/grid.hpp"
#include "dwlab/sor.hpp"

#include <optional>
#include <vector>

namespace dwlab {

// Which boundary cells carry data 1.
struct TargetSelector {
    bool whole_circle = false;
    std::optional<std::pair<double, double>> circle_arc; // angles [theta0, theta1), wraps mod 2pi
    bool free_boundary = false;                          // sublevel F cells
    std::vector<int> obstacle_ids;

    static TargetSelector full_circle();
    static TargetSelector arc(double theta0, double theta1);
    static TargetSelector inner_boundary();
    static TargetSelector obstacles(std::vector<int> ids);

    bool matches(std::uint8_t feature_id, Complex z) const;
};

std::vector<std::uint8_t> boundary_data(const GridRegion& region, const TargetSelector& target);

struct HarmonicEstimate {
    double value = 0.0;
    double h = 0.0;
    double residual = 0.0; // max update of the final sweep
    double harmonicity = 0.0;
    long sweeps = 0;
    std::optional<double> richardson; // from a second grid at h/2
};

// Region plus solved field, reusable for many evaluation points.
struct SolvedField {
    const GridRegion* region = nullptr;
    SorResult sor;

    double value_at(Complex z) const; // bilinear, clamped to [0,1]
};

SolvedField solve_harmonic(const GridRegion& region, const TargetSelector& target,
                           const SorOptions& opts = {});

// omega(z, target, region): Perron-style grid solution evaluated at z.
HarmonicEstimate harmonic_measure(Complex z, const TargetSelector& target,
                                  const GridRegion& region, const SorOptions& opts = {});

// Same estimate with Richardson extrapolation from spacings h and h/2.
HarmonicEstimate harmonic_measure_extrapolated(Complex z, const TargetSelector& target,
                                               const RegionSpec& spec, double h,
                                               const SorOptions& opts = {});

// Largest t from the halving search (t_start, t_start/2, ...) whose level-one
// sublevel component stays >= 10h away from the unit circle. nullopt when the
// search exhausts at 2^-20.
struct T0Search {
    std::optional<double> t0;
    int tried = 0;
    double last_margin = 0.0;
};
T0Search choose_t0(const SelfMap& map, Complex p, double h, double t_start = 1.0);

// Levels Omega_n (component of p of {rho(phi_n, p) < t0}) for n = 1..N, with
// cellwise checks of the nesting relations.
struct Exhaustion {
    std::string map_name;
    double t0 = 0.0;
    double h = 0.0;
    Complex p{0.0, 0.0};
    std::vector<GridRegion> levels;
    std::vector<long> f_cell_counts;      // level boundary cells inside the disk
    std::vector<long> visible_components; // components of the full sublevel set
    long subset_violations = 0;           // Omega_n u F_n inside Omega_{n+1}, one-cell slack
    long incl_violations = 0;             // phi_k(Omega_{n+k}) inside Omega_n spot checks
    long incl_checks = 0;
};

Exhaustion build_exhaustion(const SelfMap& map, Complex p, double t0, long levels, double h,
                            std::uint64_t seed = 7u);

// omega_n(p) = omega(p, F_n, Omega_n) for each level, with a geometric-decay
// ratio fit over the decaying part.
struct OmegaDecay {
    std::vector<double> omega;
    std::vector<double> residuals;
    double alpha_hat = 0.0;
    long first_below = -1; // first n with omega_n(p) < 0.05 (1-based)
};

OmegaDecay omega_decay(const Exhaustion& ex, const SorOptions& opts = {});

// Schwarz-type comparison: omega(z, preimage E, D \ preimage E) vs
// omega(phi(z), E, D \ E) at random interior points. pass = margin >= -5h.
struct InequalitySample {
    Complex z{0.0, 0.0};
    double lhs = 0.0, rhs = 0.0;
    double margin = 0.0;
};

struct SchwarzReport {
    std::vector<InequalitySample> samples;
    double min_margin = 0.0;
    double eps_grid = 0.0;
    long violations = 0;
    bool vacuous = false; // empty preimage
};

SchwarzReport verify_schwarz_lemma(const SelfMap& map, Complex e_center, double e_radius,
                                   long sample_count, double h, std::uint64_t seed = 11u,
                                   const SorOptions& opts = {});

// Conditional-probability comparison: omega(z,E,D) <= omega(z,F,D\F) sup_F omega(.,E,D).
struct CondProbReport {
    double omega_z_E = 0.0;
    double omega_z_F = 0.0;
    double sup_F = 0.0;
    double margin = 0.0; // rhs - lhs
    double eps_grid = 0.0;
    bool pass = false;
};

CondProbReport verify_conditional_probability(Complex z, const TargetSelector& e_target,
                                              const Obstacle& f_set, double h,
                                              const SorOptions& opts = {});

// Radial-slit comparison over an arc: omega(p, A, D) <= omega(p, ~A, D \ ~A) + 5h.
struct SlitComparisonReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double eps_grid = 0.0;
    long slit_count = 0;
    bool vacuous = false;
    bool pass = false;
};

SlitComparisonReport verify_slit_comparison(double theta0, double theta1, long slit_count,
                                            double slit_r0, double h, Complex p = {0.0, 0.0},
                                            const SorOptions& opts = {});

} // namespace dwlab
