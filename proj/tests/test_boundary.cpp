#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwlab/boundary.hpp"
#include "dwlab/error.hpp"
#include "dwlab/rng.hpp"

#include <cmath>
#include <numbers>

using namespace dwlab;

namespace {
SelfMap cat(const char* n) { return SelfMap::from_catalog(n); }
} // namespace

TEST_CASE("radial limits of linear maps") {
    // z/2 at n=3: limit zeta/8 regardless of direction
    const SelfMap m = cat("catalog:disk:z/2");
    const Complex zeta = std::polar(1.0, 1.1);
    const RadialLimitEstimate est = radial_limit(m, 3, zeta);
    REQUIRE(est.verdict == RadialVerdict::Converged);
    CHECK(std::abs(est.limit - zeta / 8.0) < 1e-9);
    CHECK(est.extrapolation_error < 1e-9);
}

TEST_CASE("radial limits of inner iterates reach the deep regime") {
    // phi_2 of z^2 is z^4: |phi_2(r zeta)| = r^4 -> 1 with limit zeta^4
    const SelfMap m = cat("catalog:disk:z^2");
    const Complex zeta = std::polar(1.0, std::numbers::pi / 5.0);
    const RadialLimitEstimate est = radial_limit(m, 2, zeta);
    REQUIRE(est.verdict != RadialVerdict::Undecided);
    const Complex expect = std::pow(zeta, 4);
    CHECK(std::abs(std::abs(est.limit) - 1.0) < 1e-3);
    CHECK(std::abs(est.limit - expect) < 1e-2);

    // deeper iterate: schedule auto-extends, modulus still resolves to 1
    const RadialLimitEstimate deep = radial_limit(m, 10, zeta);
    REQUIRE(deep.verdict != RadialVerdict::Undecided);
    CHECK(std::abs(std::abs(deep.limit) - 1.0) < 1e-3);
}

TEST_CASE("radial limits escape for standard-form maps") {
    // phi_10 of 2z+i is 1024 z + 1023 i
    const SelfMap m = cat("catalog:halfplane:2z+i");
    const RadialLimitEstimate est = radial_limit(m, 10, Complex(0.7, 0.0));
    REQUIRE(est.verdict == RadialVerdict::Converged); // finite boundary value
    CHECK(std::abs(est.limit - Complex(1024.0 * 0.7, 1023.0)) < 1e-6);
    CHECK(std::abs(est.limit) > 1e3);
}

TEST_CASE("radial limit guards") {
    CHECK_THROWS_AS(radial_limit(cat("catalog:disk:z/2"), 1, Complex(0.5, 0)), InvalidInput);
    CHECK_THROWS_AS(radial_limit(cat("catalog:halfplane:z+1"), 1, Complex(1.0, 0.5)),
                    InvalidInput);
    CHECK_THROWS_AS(StolzAngle(Complex(0.5, 0), 2.0), InvalidInput);
    CHECK_THROWS_AS(StolzAngle(Complex(1, 0), 0.5), InvalidInput);
    const StolzAngle stolz(Complex(1, 0), 2.0);
    CHECK(stolz.contains(Complex(0.9, 0.0)));
    CHECK(!stolz.contains(Complex(0.0, 0.99)));
}

TEST_CASE("inner test separates the catalog") {
    CHECK(inner_test(cat("catalog:disk:z^2"), 200).verdict == InnerTestReport::Verdict::Inner);
    CHECK(inner_test(cat("catalog:disk:blaschke"), 200).verdict ==
          InnerTestReport::Verdict::Inner);
    const InnerTestReport half = inner_test(cat("catalog:disk:z/2"), 200);
    CHECK(half.verdict == InnerTestReport::Verdict::NotInner);
    // all moduli sit at 0.5 (bin boundary rounding may split two bins)
    CHECK(half.histogram[9] + half.histogram[10] == half.decided);
    CHECK(inner_test(cat("catalog:disk:z/(2-z)"), 200).verdict ==
          InnerTestReport::Verdict::NotInner);
    CHECK_THROWS_AS(inner_test(cat("catalog:disk:z/2"), 50), InvalidInput);
}

TEST_CASE("convergence experiment: non-inner elliptic converges a.e.") {
    const SelfMap m = cat("catalog:disk:z/(2-z)");
    ExperimentOptions opts;
    opts.n_max = 30;
    opts.samples = 200;
    const ConvergenceReport rep = convergence_experiment(m, classify(m), opts);
    CHECK(!rep.boundary_mode);
    const double decided = 1.0 - rep.frac_undecided;
    REQUIRE(decided > 0.5);
    CHECK(rep.frac_converged / decided >= 0.99);
    CHECK(rep.shortcut_used > 0);
    // closed-form oracle: phi_n(z) = z / (2^n - (2^n - 1) z) pins the limit
    for (const SampleOutcome& o : rep.outcomes) {
        if (o.category != SampleOutcome::Category::ConvergedToP) continue;
        CHECK(o.final_distance < 0.05);
        break;
    }
}

TEST_CASE("convergence experiment: inner elliptic sticks to the circle") {
    const SelfMap m = cat("catalog:disk:z^2");
    ExperimentOptions opts;
    opts.n_max = 10;
    opts.samples = 200;
    const ConvergenceReport rep = convergence_experiment(m, classify(m), opts);
    const double decided = 1.0 - rep.frac_undecided;
    REQUIRE(decided > 0.5);
    CHECK(rep.frac_mod1 / decided >= 0.99);
    CHECK(rep.frac_converged == 0.0);
}

TEST_CASE("convergence experiment: hyperbolic escape with the exact oracle") {
    const SelfMap m = cat("catalog:halfplane:2z+i");
    ExperimentOptions opts;
    opts.n_max = 12;
    opts.samples = 200;
    opts.escape_modulus = 1e3;
    const ConvergenceReport rep = convergence_experiment(m, classify(m), opts);
    CHECK(rep.boundary_mode);
    CHECK(rep.frac_converged == 1.0); // |2^12 x + (2^12 - 1) i| >= 4095 for |x| >= 0.1
    CHECK(rep.frac_undecided == 0.0);
    // per-sample value matches 2^n x + (2^n - 1) i
    for (const SampleOutcome& o : rep.outcomes) {
        CHECK(o.decided_at <= 12);
        if (o.decided_at < 0) continue;
        const double p2 = std::exp2(double(o.decided_at));
        const Complex oracle(p2 * o.zeta.real(), p2 - 1.0);
        CHECK(o.final_distance == doctest::Approx(std::abs(oracle)).epsilon(1e-6));
    }
}

TEST_CASE("convergence experiment: parabolic type I escape by first passage") {
    const SelfMap m = cat("catalog:halfplane:z+1-1/z");
    ExperimentOptions opts;
    opts.n_max = 100;
    opts.samples = 300;
    opts.escape_modulus = 50.0;
    const ConvergenceReport rep = convergence_experiment(m, classify(m), opts);
    const double decided = 1.0 - rep.frac_undecided;
    REQUIRE(decided > 0.9);
    CHECK(rep.frac_converged / decided >= 0.99);
    // fractions are non-decreasing in n (escape is first passage)
    for (std::size_t c = 1; c < rep.converged_series.size(); ++c)
        CHECK(rep.converged_series[c] >= rep.converged_series[c - 1] - 1e-12);
}

TEST_CASE("semigroup shortcut consistency") {
    // where phi_n* lands inside, direct iteration matches a fresh estimate
    const SelfMap m = cat("catalog:disk:z/(2-z)");
    SplitMix64 g(5);
    for (int k = 0; k < 10; ++k) {
        const Complex zeta = sample_circle(g);
        const RadialLimitEstimate first = radial_limit(m, 1, zeta);
        if (first.verdict != RadialVerdict::Converged || std::abs(first.limit) > 1.0 - 1e-6)
            continue;
        Complex direct = first.limit;
        for (int s = 0; s < 3; ++s) direct = m.eval(direct);
        const RadialLimitEstimate fresh = radial_limit(m, 4, zeta);
        REQUIRE(fresh.verdict == RadialVerdict::Converged);
        CHECK(std::abs(direct - fresh.limit) < 1e-4);
    }
}

TEST_CASE("schedule refinement does not flip verdicts") {
    for (const char* name : {"catalog:disk:z/2", "catalog:disk:z^2", "catalog:disk:z/(2-z)"}) {
        const SelfMap m = cat(name);
        SplitMix64 g(7);
        for (int k = 0; k < 5; ++k) {
            const Complex zeta = sample_circle(g);
            const RadialLimitEstimate a =
                radial_limit(m, 4, zeta, RadialSchedule::for_iterate(4, 12));
            const RadialLimitEstimate b =
                radial_limit(m, 4, zeta, RadialSchedule::for_iterate(4, 24));
            if (a.verdict == RadialVerdict::Undecided || b.verdict == RadialVerdict::Undecided)
                continue;
            const bool a_mod1 = a.mod1_cluster || std::abs(a.limit) > 1.0 - 1e-3;
            const bool b_mod1 = b.mod1_cluster || std::abs(b.limit) > 1.0 - 1e-3;
            CHECK(a_mod1 == b_mod1);
        }
    }
}

TEST_CASE("decided-converged fraction grows with n_max for non-inner elliptic maps") {
    const SelfMap m = cat("catalog:disk:blaschke:0.6");
    // blaschke is inner; use the non-inner z/(2-z) for the growth check
    const SelfMap m2 = cat("catalog:disk:z/(2-z)");
    const Classification cls = classify(m2);
    double prev = -1.0;
    for (long n_max : {2L, 8L, 30L}) {
        ExperimentOptions opts;
        opts.n_max = n_max;
        opts.samples = 100;
        const ConvergenceReport rep = convergence_experiment(m2, cls, opts);
        CHECK(rep.frac_converged >= prev - 1e-12);
        prev = rep.frac_converged;
    }
    (void)m;
}

TEST_CASE("type II probe gathers evidence and carries the flag") {
    const SelfMap m = cat("catalog:halfplane:z+i");
    const Classification cls = classify(m);
    ExperimentOptions opts;
    opts.n_max = 50;
    opts.samples = 120;
    opts.escape_modulus = 30.0;
    const Parabolic2Probe probe = parabolic2_probe(m, cls, opts);
    CHECK(probe.flag == "exploratory — open problem in the paper");
    // trajectories x + n i escape in modulus once n exceeds the threshold
    CHECK(probe.trajectories.frac_converged > 0.99);
    // z+i is not inner: boundary values x + i stay off the real line
    CHECK(probe.inner.verdict == InnerTestReport::Verdict::NotInner);

    const Classification wrong = classify(cat("catalog:halfplane:z+1"));
    CHECK_THROWS_AS(parabolic2_probe(cat("catalog:halfplane:z+1"), wrong, opts), TypeMismatch);
}
