#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwlab/error.hpp"
#include "dwlab/rng.hpp"
#include "dwlab/selfmap.hpp"

#include <cmath>

using namespace dwlab;

TEST_CASE("parsing a map and evaluating it") {
    const SelfMap m = SelfMap::from_expression("z + 1 - 1/z", Domain::HalfPlane);
    CHECK(std::abs(m.eval(Complex(0, 1)) - Complex(1, 2)) < 1e-15);
    const SelfMap half = SelfMap::from_expression("z/2", Domain::Disk);
    CHECK(half.eval(Complex(0.4, 0)) == Complex(0.2, 0));
    CHECK_THROWS_AS(SelfMap::from_expression("z +", Domain::Disk), ParseError);
}

TEST_CASE("catalog lookup and canonical names") {
    for (const std::string& name : catalog_names()) {
        const SelfMap m = SelfMap::from_catalog(name);
        CHECK(m.name().rfind("catalog:", 0) == 0);
        const Complex b = base_point(m.domain());
        CHECK(in_domain(m.domain(), m.eval(b)));
    }
    CHECK_THROWS_AS(SelfMap::from_catalog("catalog:disk:cos"), InvalidInput);
    CHECK_THROWS_AS(SelfMap::from_catalog("catalog:plane:z+1"), InvalidInput);
    CHECK_THROWS_AS(SelfMap::from_catalog("catalog:disk:blaschke:1.5"), InvalidInput);
    const SelfMap b = SelfMap::from_catalog("disk:blaschke:0.25");
    CHECK(std::abs(b.derivative(Complex(0, 0)) - Complex(0.25, 0)) < 1e-15);
}

TEST_CASE("derivatives: closed forms and the finite-difference fallback") {
    const SelfMap m = SelfMap::from_catalog("catalog:disk:z/(2-z)");
    // hand differentiation: phi'(z) = 2/(2-z)^2, so phi'(0) = 1/2
    CHECK(std::abs(m.derivative(Complex(0, 0)) - Complex(0.5, 0)) < 1e-12);
    CHECK(std::abs(finite_difference_derivative(m, Complex(0, 0)) - Complex(0.5, 0)) < 1e-9);

    const SelfMap sq = SelfMap::from_catalog("catalog:disk:z^2");
    CHECK(std::abs(sq.derivative(Complex(0, 0))) < 1e-15);

    const SelfMap aff = SelfMap::from_catalog("catalog:halfplane:2z+i");
    CHECK(std::abs(aff.derivative(Complex(3, 7)) - Complex(2, 0)) < 1e-15);

    // near-rim FD request without a closed form is rejected
    const SelfMap expr = SelfMap::from_expression("z/2", Domain::Disk);
    CHECK_THROWS_AS(finite_difference_derivative(expr, Complex(1.0 - 1e-13, 0)), InvalidInput);
}

TEST_CASE("iteration: exact forward composition") {
    const SelfMap half = SelfMap::from_catalog("catalog:disk:z/2");
    const Orbit o = iterate(half, Complex(0.5, 0), 2);
    CHECK(o.point_at(2) == Complex(0.125, 0));

    const SelfMap shift = SelfMap::from_catalog("catalog:halfplane:z+1");
    const Orbit o2 = iterate(shift, Complex(0, 1), 3);
    CHECK(o2.point_at(3) == Complex(3, 1));

    // s_1 for z+i from i is rho(2i, 3i) = log(3/2)
    const SelfMap up = SelfMap::from_catalog("catalog:halfplane:z+i");
    const Orbit o3 = iterate(up, Complex(0, 1), 3);
    CHECK(o3.steps[1] == doctest::Approx(std::log(1.5)).epsilon(1e-14));

    CHECK_THROWS_AS(iterate(half, Complex(2, 0), 3), InvalidInput);
    CHECK_THROWS_AS(iterate(half, Complex(0.5, 0), 0), InvalidInput);
}

TEST_CASE("iteration: escape flags") {
    const SelfMap two = SelfMap::from_catalog("catalog:halfplane:2z");
    const Orbit o = iterate(two, Complex(0, 1), 2000);
    CHECK(o.escaped);
    CHECK(o.last_n() < 2000);
    CHECK(std::abs(o.last_point()) > 1e300);

    // disk orbit that underflows to the fixed point stagnates
    const SelfMap half = SelfMap::from_catalog("catalog:disk:z/2");
    const Orbit o2 = iterate(half, Complex(0.5, 0), 5000);
    CHECK(o2.stagnated);
    CHECK(std::abs(o2.last_point()) == 0.0);
}

TEST_CASE("iteration: thinning stride keeps memory bounded") {
    const SelfMap up = SelfMap::from_catalog("catalog:halfplane:z+i");
    const Orbit o = iterate(up, Complex(0, 1), 300000);
    CHECK(o.stride == 4);
    CHECK(o.points.size() <= 100002);
    CHECK(o.indices.back() == 300000);
    CHECK(o.last_point() == Complex(0, 300001));
}

TEST_CASE("closed-form iterates match forward composition") {
    SplitMix64 g(23);
    for (const std::string& name : catalog_names()) {
        const SelfMap m = SelfMap::from_catalog(name);
        const Complex z0 = sample_domain(g, m.domain());
        const Orbit o = iterate(m, z0, 12);
        const long n = o.last_n(); // stagnation may stop z^2 early at 0
        const auto closed = m.closed_iterate(n, z0);
        if (!closed) continue;
        CHECK(std::abs(*closed - o.last_point()) < 1e-9 * (1.0 + std::abs(*closed)));
    }
}

TEST_CASE("property: composition law phi_{n+k} = phi_k o phi_n") {
    SplitMix64 g(31);
    for (const std::string& name : catalog_names()) {
        const SelfMap m = SelfMap::from_catalog(name);
        const Complex z0 = sample_domain(g, m.domain());
        const int n = 6, k = 5;
        const Orbit all = iterate(m, z0, n + k);
        const Orbit head = iterate(m, z0, n);
        const Orbit tail = iterate(m, head.point_at(n), k);
        CHECK(std::abs(all.point_at(n + k) - tail.point_at(k)) <
              1e-9 * double(n + k) * (1.0 + std::abs(tail.point_at(k))));
    }
}

TEST_CASE("property: hyperbolic steps are non-increasing") {
    SplitMix64 g(37);
    for (const std::string& name : catalog_names()) {
        const SelfMap m = SelfMap::from_catalog(name);
        for (int rep = 0; rep < 3; ++rep) {
            const Orbit o = iterate(m, sample_domain(g, m.domain()), 400);
            for (std::size_t i = 1; i < o.steps.size(); ++i)
                CHECK(o.steps[i] <= o.steps[i - 1] + 1e-9);
        }
    }
}

TEST_CASE("validate_selfmap accepts the catalog and flags bad declarations") {
    for (const std::string& name : catalog_names()) {
        const ValidationReport rep = validate_selfmap(SelfMap::from_catalog(name), 1000);
        CHECK(rep.valid());
    }
    // 2z declared on the disk has to violate somewhere beyond |z| = 1/2
    const ValidationReport bad =
        validate_selfmap(SelfMap::from_expression("2*z", Domain::Disk), 1000);
    CHECK(bad.worst_domain_violation > 1e-9);
    CHECK(std::abs(bad.worst_domain_point) > 0.5);
}

TEST_CASE("cayley conjugation moves maps between the models") {
    const SelfMap disk_half = SelfMap::from_catalog("catalog:disk:z/2");
    const SelfMap conj = disk_half.cayley_conjugate(Complex(1, 0));
    CHECK(conj.domain() == Domain::HalfPlane);
    const ValidationReport rep = validate_selfmap(conj, 500);
    CHECK(rep.valid());
    // fixed point 0 of z/2 moves to i
    CHECK(std::abs(conj.eval(Complex(0, 1)) - Complex(0, 1)) < 1e-12);
    // derivative at the fixed point is invariant under conjugation
    CHECK(std::abs(conj.derivative(Complex(0, 1)) - Complex(0.5, 0)) < 1e-9);
}

TEST_CASE("composition chains evaluate front to back") {
    const SelfMap a = SelfMap::from_expression("z/2", Domain::Disk);
    const SelfMap b = SelfMap::from_expression("z^2", Domain::Disk);
    const SelfMap chain = SelfMap::compose_chain({a, b}); // z -> (z/2)^2
    CHECK(chain.eval(Complex(0.6, 0)) == Complex(0.09, 0));
    CHECK(std::abs(chain.derivative(Complex(0.6, 0)) - Complex(0.3, 0)) < 1e-12);
}
