// Acceptance suite: one line per criterion, exit 0 only if all pass.

#include "dwlab/boundary.hpp"
#include "dwlab/classify.hpp"
#include "dwlab/conjugation.hpp"
#include "dwlab/harmonic.hpp"
#include "dwlab/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace dwlab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Harness {
    int failures = 0;

    void run(const std::string& name, double budget_seconds,
             const std::function<void(std::vector<std::string>&)>& body) {
        std::vector<std::string> problems;
        const auto start = std::chrono::steady_clock::now();
        try {
            body(problems);
        } catch (const std::exception& e) {
            problems.push_back(std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > budget_seconds)
            problems.push_back("time budget exceeded: " + std::to_string(elapsed) + "s > " +
                               std::to_string(budget_seconds) + "s");
        if (problems.empty()) {
            std::printf("PASS  %s  (%.1fs)\n", name.c_str(), elapsed);
        } else {
            ++failures;
            std::printf("FAIL  %s  (%.1fs)\n", name.c_str(), elapsed);
            for (const std::string& p : problems) std::printf("      - %s\n", p.c_str());
        }
        std::fflush(stdout);
    }
};

void expect(std::vector<std::string>& problems, bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
}

SelfMap cat(const char* name) { return SelfMap::from_catalog(name); }

// Brute-force orbit of z + 1 - 1/z from i, independent of the library path.
Complex brute_orbit_value(long steps) {
    Complex z(0.0, 1.0);
    for (long n = 0; n < steps; ++n) z = z + 1.0 - 1.0 / z;
    return z;
}

void criterion_classification(std::vector<std::string>& problems) {
    struct Expect {
        const char* map;
        MapKind kind;
        double multiplier;
        double tol;
    };
    const Expect table[] = {
        {"catalog:disk:z/2", MapKind::Elliptic, 0.5, 1e-9},
        {"catalog:disk:z^2", MapKind::Elliptic, 0.0, 1e-9},
        {"catalog:disk:z/(2-z)", MapKind::Elliptic, 0.5, 1e-6},
        {"catalog:halfplane:2z", MapKind::Hyperbolic, 2.0, 1e-6},
        {"catalog:halfplane:2z+i", MapKind::Hyperbolic, 2.0, 1e-4},
    };
    for (const Expect& e : table) {
        const Classification cls = classify(cat(e.map));
        expect(problems, cls.kind == e.kind,
               std::string(e.map) + ": kind " + to_string(cls.kind));
        expect(problems, std::abs(cls.multiplier - Complex(e.multiplier, 0.0)) <= e.tol,
               std::string(e.map) + ": multiplier off by " +
                   std::to_string(std::abs(cls.multiplier - Complex(e.multiplier, 0.0))));
    }

    const Classification shift = classify(cat("catalog:halfplane:z+1"));
    expect(problems, shift.kind == MapKind::ParabolicI, "z+1: not parabolic I");
    const double s_exact = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    expect(problems, std::abs(shift.s_inf - s_exact) <= 1e-6,
           "z+1: s_inf off by " + std::to_string(std::abs(shift.s_inf - s_exact)));

    // pre-verification oracle: v_n of z+1-1/z stays bounded over 1e6 steps
    const Complex deep = brute_orbit_value(1000000);
    expect(problems, deep.imag() > 0.0 && deep.imag() < 10.0,
           "oracle: v_1e6 not bounded as expected");
    const Classification pommer = classify(cat("catalog:halfplane:z+1-1/z"));
    expect(problems, pommer.kind == MapKind::ParabolicI, "z+1-1/z: not parabolic I");

    const Classification up = classify(cat("catalog:halfplane:z+i"));
    expect(problems, up.kind == MapKind::ParabolicII, "z+i: not parabolic II");
}

void criterion_conjugation(std::vector<std::string>& problems) {
    // koenigs for z/(2-z) matches z/(1-z) to 1e-8 on |z| <= 1/2 at N = 40
    {
        const Conjugation c = koenigs(cat("catalog:disk:z/(2-z)"), 40);
        SplitMix64 g(17);
        double worst = 0.0;
        for (int k = 0; k < 400; ++k) {
            const Complex z = sample_disk(g, 0.5);
            worst = std::max(worst, std::abs(c.evaluate(z) - z / (1.0 - z)));
        }
        expect(problems, worst < 1e-8,
               "koenigs closed-form gap " + std::to_string(worst));
    }
    // valiron for 2z+i: relative functional-equation residual < 1e-6 at N = 30
    {
        const Conjugation c = valiron(cat("catalog:halfplane:2z+i"), 30);
        expect(problems, c.residuals.max_residual < 1e-6,
               "valiron residual " + std::to_string(c.residuals.max_residual));
    }
    // pommerenke for z+1: b = 1 +- 1e-12 and residual < 1e-12
    {
        const Conjugation c = pommerenke(cat("catalog:halfplane:z+1"), 1000);
        expect(problems, std::abs(c.parameter - Complex(1.0, 0.0)) <= 1e-12,
               "pommerenke b for z+1: " + std::to_string(c.parameter.real()));
        expect(problems, c.residuals.max_residual < 1e-12,
               "pommerenke residual for z+1: " + std::to_string(c.residuals.max_residual));
    }
    // pommerenke for z+1-1/z: residual < 1e-4 at N = 1e3, b within 1% of 1/v_inf
    {
        const Conjugation c = pommerenke(cat("catalog:halfplane:z+1-1/z"), 1000);
        expect(problems, c.residuals.max_residual < 1e-4,
               "pommerenke residual " + std::to_string(c.residuals.max_residual));
        const double v_inf = brute_orbit_value(1000000).imag();
        expect(problems, std::abs(c.parameter.real() - 1.0 / v_inf) <= 0.01 / v_inf,
               "pommerenke b " + std::to_string(c.parameter.real()) + " vs 1/v_inf " +
                   std::to_string(1.0 / v_inf));
    }
}

void criterion_calibration(std::vector<std::string>& problems) {
    const double h = 1.0 / 256.0;
    const GridRegion g = build_grid_region(RegionSpec::unit_disk(), h);
    for (double theta : {kPi / 2.0, kPi, 1.5 * kPi}) {
        const HarmonicEstimate est =
            harmonic_measure(Complex(0, 0), TargetSelector::arc(0.0, theta), g);
        expect(problems, std::abs(est.value - theta / (2.0 * kPi)) <= 0.01,
               "arc theta=" + std::to_string(theta) + " value " + std::to_string(est.value));
        expect(problems, est.harmonicity < 1e-8,
               "harmonicity residual " + std::to_string(est.harmonicity));
    }
    const double a = harmonic_measure(Complex(0, 0), TargetSelector::arc(0.2, 1.3), g).value;
    const double b = harmonic_measure(Complex(0, 0), TargetSelector::arc(1.3, 2.6), g).value;
    const double ab = harmonic_measure(Complex(0, 0), TargetSelector::arc(0.2, 2.6), g).value;
    expect(problems, std::abs(a + b - ab) <= 0.02,
           "additivity gap " + std::to_string(std::abs(a + b - ab)));
}

void criterion_lemmas(std::vector<std::string>& problems) {
    double automorphism_margin[2] = {0.0, 0.0};
    int hi = 0;
    for (double h : {1.0 / 128.0, 1.0 / 256.0}) {
        // Schwarz-type comparison at 50 random points per configuration
        const SelfMap aut = SelfMap::from_expression("(z - 0.2)/(1 - 0.2*z)", Domain::Disk);
        const SchwarzReport s1 = verify_schwarz_lemma(aut, Complex(0.3, 0.1), 0.15, 50, h, 11u);
        const SchwarzReport s2 =
            verify_schwarz_lemma(cat("catalog:disk:z^2"), Complex(0.5, 0.0), 0.2, 50, h, 13u);
        const SchwarzReport s3 =
            verify_schwarz_lemma(cat("catalog:disk:z/2"), Complex(0.0, 0.0), 0.1, 50, h, 15u);
        for (const SchwarzReport* r : {&s1, &s2, &s3})
            expect(problems, r->violations == 0,
                   "schwarz violations at h=" + std::to_string(h) + ": " +
                       std::to_string(r->violations) + " (min margin " +
                       std::to_string(r->min_margin) + ")");
        automorphism_margin[hi] = std::abs(s1.min_margin);

        // conditional probability estimate
        const CondProbReport c1 = verify_conditional_probability(
            Complex(0, 0), TargetSelector::arc(0.0, kPi / 2), Obstacle::circle({0, 0}, 0.5), h);
        expect(problems, c1.pass, "condprob margin " + std::to_string(c1.margin));
        const CondProbReport c2 = verify_conditional_probability(
            Complex(0, 0), TargetSelector::full_circle(), Obstacle::circle({0, 0}, 0.9), h);
        expect(problems, c2.pass && std::abs(c2.margin) < 1e-6,
               "condprob equality margin " + std::to_string(c2.margin));
        ++hi;
    }
    // the equality-case margin is pure discretization and shrinks with h
    expect(problems, automorphism_margin[1] <= automorphism_margin[0] + 1e-4,
           "equality-case margin did not shrink: " + std::to_string(automorphism_margin[0]) +
               " -> " + std::to_string(automorphism_margin[1]));
}

void criterion_elliptic_boundary(std::vector<std::string>& problems) {
    const double h = 1.0 / 256.0;
    // omega decay for z/(2-z): non-increasing after its first decrease, < 0.05
    {
        const SelfMap m = cat("catalog:disk:z/(2-z)");
        const T0Search t = choose_t0(m, Complex(0, 0), h);
        expect(problems, t.t0.has_value(), "choose_t0 failed for z/(2-z)");
        if (t.t0) {
            const Exhaustion ex = build_exhaustion(m, Complex(0, 0), *t.t0, 9, h);
            const OmegaDecay dec = omega_decay(ex);
            bool started = false, monotone = true;
            for (std::size_t l = 0; l + 1 < dec.omega.size(); ++l) {
                if (dec.omega[l + 1] < dec.omega[l] - 1e-9) started = true;
                if (started && dec.omega[l + 1] > dec.omega[l] + 1e-9) monotone = false;
            }
            expect(problems, started && monotone, "omega decay not non-increasing");
            expect(problems, dec.first_below > 0, "omega decay never fell below 0.05");
        }
    }
    // inner obstruction: z^2 series stays above 0.95
    {
        const SelfMap m = cat("catalog:disk:z^2");
        const T0Search t = choose_t0(m, Complex(0, 0), h);
        expect(problems, t.t0.has_value(), "choose_t0 failed for z^2");
        if (t.t0) {
            const Exhaustion ex = build_exhaustion(m, Complex(0, 0), *t.t0, 5, h);
            const OmegaDecay dec = omega_decay(ex);
            for (double w : dec.omega)
                expect(problems, w > 0.95, "inner series dipped to " + std::to_string(w));
        }
    }
    // boundary experiments
    {
        ExperimentOptions opts;
        opts.n_max = 30;
        opts.samples = 500;
        const SelfMap m = cat("catalog:disk:z/(2-z)");
        const ConvergenceReport rep = convergence_experiment(m, classify(m), opts);
        const double decided = 1.0 - rep.frac_undecided;
        expect(problems, decided > 0.0 && rep.frac_converged / decided >= 0.99,
               "z/(2-z): decided-converged fraction " +
                   std::to_string(decided > 0 ? rep.frac_converged / decided : 0.0));
    }
    {
        ExperimentOptions opts;
        opts.n_max = 10;
        opts.samples = 500;
        const SelfMap m = cat("catalog:disk:z^2");
        const ConvergenceReport rep = convergence_experiment(m, classify(m), opts);
        const double decided = 1.0 - rep.frac_undecided;
        expect(problems, decided > 0.0 && rep.frac_mod1 / decided >= 0.99,
               "z^2: modulus-1 fraction " +
                   std::to_string(decided > 0 ? rep.frac_mod1 / decided : 0.0));
    }
}

void criterion_hyperbolic_escape(std::vector<std::string>& problems) {
    // 2z+i: all 500 samples past modulus 1e3 by n = 12, against the exact oracle
    {
        ExperimentOptions opts;
        opts.n_max = 12;
        opts.samples = 500;
        opts.escape_modulus = 1e3;
        const SelfMap m = cat("catalog:halfplane:2z+i");
        const ConvergenceReport rep = convergence_experiment(m, classify(m), opts);
        expect(problems, rep.frac_converged == 1.0,
               "2z+i escape fraction " + std::to_string(rep.frac_converged));
        long oracle_misses = 0;
        for (const SampleOutcome& o : rep.outcomes) {
            const double x = o.zeta.real();
            bool oracle_escapes = false;
            for (int n = 1; n <= 12; ++n) {
                const double p2 = std::exp2(double(n));
                if (std::hypot(p2 * x, p2 - 1.0) > 1e3) oracle_escapes = true;
            }
            if (!oracle_escapes) ++oracle_misses;
        }
        expect(problems, oracle_misses == 0,
               "oracle disagrees on " + std::to_string(oracle_misses) + " samples");
    }
    // z+1-1/z: >= 99% of decided samples past modulus 50 by n = 100
    {
        ExperimentOptions opts;
        opts.n_max = 100;
        opts.samples = 500;
        opts.escape_modulus = 50.0;
        const SelfMap m = cat("catalog:halfplane:z+1-1/z");
        const ConvergenceReport rep = convergence_experiment(m, classify(m), opts);
        const double decided = 1.0 - rep.frac_undecided;
        expect(problems, decided > 0.0 && rep.frac_converged / decided >= 0.99,
               "z+1-1/z: decided escape fraction " +
                   std::to_string(decided > 0 ? rep.frac_converged / decided : 0.0));
        // brute-force oracle on the same boundary points
        long oracle_escaped = 0;
        for (const SampleOutcome& o : rep.outcomes) {
            double x = o.zeta.real();
            Complex z(x, 0.0);
            for (int n = 1; n <= 100; ++n) {
                if (z == Complex(0.0, 0.0)) break;
                z = z + 1.0 - 1.0 / z;
                if (std::abs(z) > 50.0) {
                    ++oracle_escaped;
                    break;
                }
            }
        }
        expect(problems, double(oracle_escaped) / double(rep.outcomes.size()) >= 0.99,
               "oracle escape fraction " +
                   std::to_string(double(oracle_escaped) / double(rep.outcomes.size())));
    }
}

void criterion_slits(std::vector<std::string>& problems) {
    const double h = 1.0 / 256.0;
    const SlitComparisonReport r64 = verify_slit_comparison(0.0, kPi / 2, 64, 0.9, h);
    const SlitComparisonReport r256 = verify_slit_comparison(0.0, kPi / 2, 256, 0.9, h);
    expect(problems, r64.pass,
           "64 slits: lhs " + std::to_string(r64.lhs) + " rhs " + std::to_string(r64.rhs));
    expect(problems, r256.pass,
           "256 slits: lhs " + std::to_string(r256.lhs) + " rhs " + std::to_string(r256.rhs));
    expect(problems, r256.rhs < r64.rhs,
           "rhs did not decrease with slit density: " + std::to_string(r64.rhs) + " -> " +
               std::to_string(r256.rhs));
}

void criterion_exhaustion(std::vector<std::string>& problems) {
    const double h = 1.0 / 256.0;
    // z/2 with t0 = 0.1: doubling radii against the closed form
    {
        const SelfMap m = cat("catalog:disk:z/2");
        const double t0 = 0.1;
        const Exhaustion ex = build_exhaustion(m, Complex(0, 0), t0, 8, h);
        expect(problems, ex.subset_violations == 0,
               "z/2 subset violations " + std::to_string(ex.subset_violations));
        expect(problems, ex.incl_violations == 0,
               "z/2 incl violations " + std::to_string(ex.incl_violations));
        for (std::size_t l = 0; l < ex.levels.size(); ++l) {
            const double expect_r =
                std::min(std::exp2(double(l + 1)) * std::tanh(t0 / 2.0), 1.0);
            expect(problems,
                   std::abs(ex.levels[l].max_interior_modulus - expect_r) <= 2.0 * h,
                   "z/2 level " + std::to_string(l + 1) + " radius " +
                       std::to_string(ex.levels[l].max_interior_modulus) + " vs " +
                       std::to_string(expect_r));
        }
    }
    {
        const SelfMap m = cat("catalog:disk:z/(2-z)");
        const T0Search t = choose_t0(m, Complex(0, 0), h);
        expect(problems, t.t0.has_value(), "choose_t0 failed");
        if (t.t0) {
            const Exhaustion ex = build_exhaustion(m, Complex(0, 0), *t.t0, 8, h);
            expect(problems, ex.subset_violations == 0,
                   "z/(2-z) subset violations " + std::to_string(ex.subset_violations));
            expect(problems, ex.incl_violations == 0,
                   "z/(2-z) incl violations " + std::to_string(ex.incl_violations));
        }
    }
}

void criterion_type2(std::vector<std::string>& problems) {
    const SelfMap m = cat("catalog:halfplane:z+i");
    const Classification cls = classify(m);
    expect(problems, cls.kind == MapKind::ParabolicII, "z+i not parabolic II");
    const Type2EscapeReport rep = verify_type2_escape(m, cls, Complex(1, 1), 1000);
    expect(problems, rep.final_im == 1001.0,
           "Im phi_1000(1+i) = " + std::to_string(rep.final_im) + " (exact 1001 expected)");
    expect(problems, rep.rho_to_base_orbit < 1e-3,
           "rho to base orbit " + std::to_string(rep.rho_to_base_orbit));
    expect(problems, rep.rho_to_base_orbit < rep.rho_to_base_orbit_mid,
           "rho to base orbit is not decreasing");
}

} // namespace

int main() {
    Harness h;
    h.run("1. classification suite", 10.0, criterion_classification);
    h.run("2. conjugation residuals", 30.0, criterion_conjugation);
    h.run("3. harmonic solver calibration (h=1/256)", 120.0, criterion_calibration);
    h.run("4. Schwarz-type and conditional-probability bounds (h=1/128, 1/256)", 300.0,
          criterion_lemmas);
    h.run("5. elliptic boundary convergence dichotomy", 300.0, criterion_elliptic_boundary);
    h.run("6. boundary escape for hyperbolic and type I maps", 60.0,
          criterion_hyperbolic_escape);
    h.run("7. radial-slit comparison", 120.0, criterion_slits);
    h.run("8. exhaustion nesting invariants", 60.0, criterion_exhaustion);
    h.run("9. type II escape to infinity", 10.0, criterion_type2);

    if (h.failures) {
        std::printf("%d criterion(s) failed\n", h.failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
