#include "dwlab/boundary.hpp"

#include "dwlab/error.hpp"
#include "dwlab/extrapolate.hpp"
#include "dwlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dwlab {

const char* to_string(RadialVerdict v) {
    switch (v) {
    case RadialVerdict::Converged: return "converged";
    case RadialVerdict::Escaped: return "escaped";
    case RadialVerdict::Undecided: return "undecided";
    }
    return "?";
}

RadialSchedule RadialSchedule::for_iterate(long n, int depth) {
    RadialSchedule s;
    s.depth = depth;
    // deep enough that degree-2^n iterates reach their limit regime
    // (gap < 2^-n * 1e-3), capped at representable gaps
    s.max_exponent = std::clamp(3.0 + double(n) * std::log10(2.0), 12.0, 13.0);
    return s;
}

std::vector<double> RadialSchedule::gaps() const {
    std::vector<double> g;
    const double gamma = max_exponent / double(depth);
    for (int k = 1; k <= depth; ++k) g.push_back(std::pow(10.0, -gamma * double(k)));
    return g;
}

StolzAngle::StolzAngle(Complex zeta, double aperture) : vertex(zeta), kappa(aperture) {
    if (std::abs(std::abs(zeta) - 1.0) > 1e-12)
        throw InvalidInput("stolz angle: vertex must be on the unit circle");
    if (!(aperture > 1.0)) throw InvalidInput("stolz angle: aperture must exceed 1");
}

bool StolzAngle::contains(Complex z) const {
    return std::abs(vertex - z) < kappa * (1.0 - std::abs(z));
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct SampleVerdict {
    RadialVerdict verdict = RadialVerdict::Undecided;
    Complex limit{0.0, 0.0};
    double error = 0.0;
    bool mod1 = false;
};

// Decide convergence/escape from the values along the approach line
// (shallowest first).
SampleVerdict judge(Domain dom, const std::vector<Complex>& values) {
    SampleVerdict out;
    // longest finite tail
    std::size_t first = values.size();
    while (first > 0 && is_finite_number(values[first - 1])) --first;
    const std::size_t count = values.size() - first;
    if (count < 3) return out;
    const Complex v1 = values[values.size() - 1];
    const Complex v2 = values[values.size() - 2];
    const Complex v3 = values[values.size() - 3];
    const double d1 = std::abs(v1 - v2);
    const double d2 = std::abs(v2 - v3);
    const double scale = std::max(1.0, std::abs(v1));

    if (d1 < 1e-6 * scale && d1 <= d2 * 1.2 + 1e-14 * scale) {
        out.verdict = RadialVerdict::Converged;
        std::vector<Complex> tail(values.end() - long(std::min<std::size_t>(count, 4)),
                                  values.end());
        const auto acc = aitken_limit(tail);
        out.limit = acc ? *acc : v1;
        if (!is_finite_number(out.limit)) out.limit = v1;
        out.error = std::abs(out.limit - v1);
        if (out.error > 1e-2 * scale) { // extrapolation ran away; distrust it
            out.limit = v1;
            out.error = d1;
        }
        out.mod1 = dom == Domain::Disk && std::abs(out.limit) > 1.0 - 1e-3;
        return out;
    }

    const double m1 = std::abs(v1), m2 = std::abs(v2), m3 = std::abs(v3);
    if (dom == Domain::HalfPlane) {
        if (m1 > 1e6 && m1 >= m2 && m2 >= m3) {
            out.verdict = RadialVerdict::Escaped;
            out.limit = v1;
            out.error = std::numeric_limits<double>::infinity();
            return out;
        }
        return out;
    }
    // disk: modulus creeping to 1 with a stable direction
    if (1.0 - m1 < 1e-3 && m1 >= m2 - 1e-12 && m2 >= m3 - 1e-12 && m1 > 0.0 && m2 > 0.0) {
        const Complex dir1 = v1 / m1, dir2 = v2 / m2;
        if (std::abs(dir1 - dir2) < 1e-3) {
            out.verdict = RadialVerdict::Escaped;
            out.mod1 = true;
            out.limit = dir1;
            out.error = std::abs(dir1 - dir2);
            return out;
        }
    }
    return out;
}

std::vector<Complex> evaluate_line(const SelfMap& map, long n, Complex zeta,
                                   const std::vector<double>& gaps) {
    std::vector<Complex> values;
    values.reserve(gaps.size());
    for (double gap : gaps) {
        Complex z = map.domain() == Domain::Disk ? (1.0 - gap) * zeta
                                                 : zeta + Complex(0.0, gap);
        bool dead = false;
        for (long k = 0; k < n && !dead; ++k) {
            try {
                z = map.eval(z);
            } catch (const InvalidInput&) {
                dead = true;
            }
            if (!is_finite_number(z)) dead = true;
        }
        values.push_back(dead ? Complex(kNan, kNan) : z);
    }
    return values;
}

} // namespace

RadialLimitEstimate radial_limit(const SelfMap& map, long n, Complex zeta,
                                 const RadialSchedule& schedule) {
    if (n < 1) throw InvalidInput("radial limit: iterate index must be >= 1");
    if (map.domain() == Domain::Disk) {
        if (std::abs(std::abs(zeta) - 1.0) > 1e-12)
            throw InvalidInput("radial limit: direction must have |zeta| = 1");
    } else if (std::abs(zeta.imag()) > 1e-12) {
        throw InvalidInput("radial limit: half-plane boundary point must be real");
    }

    RadialLimitEstimate est;
    est.zeta = zeta;
    est.n = n;

    RadialSchedule sched = schedule;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const std::vector<double> gaps = sched.gaps();
        const std::vector<Complex> values = evaluate_line(map, n, zeta, gaps);
        est.samples.clear();
        for (std::size_t k = 0; k < gaps.size(); ++k) est.samples.push_back({gaps[k], values[k]});
        const SampleVerdict v = judge(map.domain(), values);
        est.verdict = v.verdict;
        est.limit = v.limit;
        est.extrapolation_error = v.error;
        est.mod1_cluster = v.mod1;
        if (est.verdict != RadialVerdict::Undecided) return est;
        sched.depth *= 2; // densify once before giving up
    }
    return est;
}

RadialLimitEstimate radial_limit(const SelfMap& map, long n, Complex zeta) {
    return radial_limit(map, n, zeta, RadialSchedule::for_iterate(n));
}

namespace {

// Disk modulus of a boundary value; half-plane values go through the Cayley
// change so "modulus one" means "real boundary value or escape".
double boundary_modulus(Domain dom, Complex limit) {
    if (dom == Domain::Disk) return std::abs(limit);
    const Complex i(0.0, 1.0);
    const double den = std::abs(limit + i);
    if (den == 0.0) return 1.0;
    return std::abs((limit - i) / den);
}

} // namespace

InnerTestReport inner_test(const SelfMap& map, long samples, std::uint64_t seed) {
    if (samples < 100) throw InvalidInput("inner test: need at least 100 directions");
    InnerTestReport rep;
    rep.samples = samples;

    std::vector<Complex> dirs(static_cast<std::size_t>(samples));
    SplitMix64 g(seed);
    for (auto& d : dirs)
        d = map.domain() == Domain::Disk ? sample_circle(g) : Complex(g.uniform(-10.0, 10.0), 0.0);

    std::vector<double> moduli(dirs.size(), kNan);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (long k = 0; k < samples; ++k) {
        const RadialLimitEstimate est = radial_limit(map, 1, dirs[std::size_t(k)]);
        if (est.verdict == RadialVerdict::Undecided) continue;
        moduli[std::size_t(k)] = est.verdict == RadialVerdict::Escaped && est.mod1_cluster
                                     ? 1.0
                                     : boundary_modulus(map.domain(), est.limit);
    }

    long mod1 = 0, low = 0;
    for (double m : moduli) {
        if (std::isnan(m)) continue;
        ++rep.decided;
        if (m > 1.0 - 1e-3) ++mod1;
        if (m < 1.0 - 1e-2) ++low;
        const std::size_t bin = std::min<std::size_t>(20, std::size_t(m / 0.05));
        ++rep.histogram[bin];
    }
    if (rep.decided < samples / 2)
        throw SolverError("inner test: too few decided samples");
    rep.frac_mod1 = double(mod1) / double(rep.decided);
    rep.frac_low = double(low) / double(rep.decided);
    if (rep.frac_mod1 >= 0.99)
        rep.verdict = InnerTestReport::Verdict::Inner;
    else if (rep.frac_low >= 0.01)
        rep.verdict = InnerTestReport::Verdict::NotInner;
    return rep;
}

namespace {

std::vector<long> checkpoint_list(long n_max) {
    std::vector<long> cps;
    for (long n = 1; n < n_max; n *= 2) cps.push_back(n);
    cps.push_back(n_max);
    return cps;
}

using Category = SampleOutcome::Category;

// One elliptic-mode sample: boundary estimates until an interior landing,
// then direct iteration toward p.
SampleOutcome run_elliptic_sample(const SelfMap& map, Complex p, Complex zeta,
                                  const std::vector<long>& cps, const ExperimentOptions& opts,
                                  std::vector<Category>& series) {
    SampleOutcome out;
    out.zeta = zeta;
    bool interior = false;
    Complex z{0.0, 0.0};
    long z_at = 0;

    for (std::size_t c = 0; c < cps.size(); ++c) {
        const long n = cps[c];
        Category cat = Category::Undecided;
        if (interior) {
            for (; z_at < n; ++z_at) z = map.eval(z);
            out.final_distance = std::abs(z - p);
            cat = out.final_distance < 0.05 ? Category::ConvergedToP : Category::Undecided;
        } else {
            const RadialLimitEstimate est =
                radial_limit(map, n, zeta, RadialSchedule::for_iterate(n, opts.schedule_depth));
            const bool landed_interior =
                est.verdict == RadialVerdict::Converged &&
                (map.domain() == Domain::Disk
                     ? std::abs(est.limit) < 1.0 - 1e-6
                     : est.limit.imag() > 1e-6 * (1.0 + std::abs(est.limit)));
            if (landed_interior) {
                interior = true;
                out.used_shortcut = true;
                z = est.limit;
                z_at = n;
                out.final_distance = std::abs(z - p);
                cat = out.final_distance < 0.05 ? Category::ConvergedToP : Category::Undecided;
            } else if (est.verdict != RadialVerdict::Undecided &&
                       (est.mod1_cluster || boundary_modulus(map.domain(), est.limit) > 1.0 - 1e-3)) {
                cat = Category::Mod1;
                out.final_distance = std::abs(est.limit - p);
            }
        }
        series[c] = cat;
        if (cat != Category::Undecided && out.decided_at < 0) out.decided_at = n;
        out.category = cat;
    }
    return out;
}

// One boundary-mode sample: lockstep vertical lines, first-passage escape.
SampleOutcome run_boundary_sample(const SelfMap& map, double x, const std::vector<long>& cps,
                                  const ExperimentOptions& opts, std::vector<Category>& series) {
    SampleOutcome out;
    out.zeta = Complex(x, 0.0);

    const std::vector<double> gaps = RadialSchedule::for_iterate(1, opts.schedule_depth).gaps();
    std::vector<Complex> w;
    for (double gap : gaps) w.push_back(Complex(x, gap));
    std::vector<std::uint8_t> dead(w.size(), 0);

    bool escaped = false;
    bool interior = false;
    Complex zi{0.0, 0.0};
    std::size_t cp = 0;
    Complex last_limit{0.0, 0.0};
    bool have_limit = false;

    for (long n = 1; n <= opts.n_max && cp < cps.size(); ++n) {
        if (!escaped) {
            if (interior) {
                zi = map.eval(zi);
                have_limit = true;
                last_limit = zi;
                if (std::abs(zi) > opts.escape_modulus) {
                    escaped = true;
                    out.decided_at = n;
                }
            } else {
                for (std::size_t k = 0; k < w.size(); ++k) {
                    if (dead[k]) continue;
                    try {
                        w[k] = map.eval(w[k]);
                    } catch (const InvalidInput&) {
                        dead[k] = 1;
                    }
                    if (!is_finite_number(w[k])) dead[k] = 1;
                }
                std::vector<Complex> line;
                for (std::size_t k = 0; k < w.size(); ++k)
                    line.push_back(dead[k] ? Complex(kNan, kNan) : w[k]);
                const SampleVerdict v = judge(Domain::HalfPlane, line);
                if (v.verdict == RadialVerdict::Converged) {
                    have_limit = true;
                    last_limit = v.limit;
                    if (std::abs(v.limit) > opts.escape_modulus) {
                        escaped = true;
                        out.decided_at = n;
                    } else if (v.limit.imag() > 1e-6 * (1.0 + std::abs(v.limit))) {
                        interior = true; // landed strictly inside: iterate directly
                        out.used_shortcut = true;
                        zi = v.limit;
                    }
                } else if (v.verdict == RadialVerdict::Escaped) {
                    escaped = true;
                    have_limit = true;
                    last_limit = v.limit;
                    out.decided_at = n;
                }
            }
        }
        while (cp < cps.size() && cps[cp] == n) {
            series[cp] = escaped ? Category::Escaped : Category::Undecided;
            ++cp;
        }
    }
    out.category = escaped ? Category::Escaped : Category::Undecided;
    out.final_distance = have_limit ? std::abs(last_limit) : kNan;
    return out;
}

} // namespace

ConvergenceReport convergence_experiment(const SelfMap& map, const Classification& cls,
                                         const ExperimentOptions& opts) {
    if (cls.kind == MapKind::Undecided || cls.kind == MapKind::RejectedEllipticAutomorphism)
        throw TypeMismatch("convergence experiment: map classification is missing");

    ConvergenceReport rep;
    rep.kind = cls.kind;
    rep.boundary_mode = cls.boundary;
    rep.n_max = opts.n_max;
    rep.samples = opts.samples;
    rep.checkpoints = checkpoint_list(opts.n_max);

    SelfMap run_map = map;
    Complex p = cls.dw.point.finite() ? cls.dw.point.value : Complex(0.0, 0.0);
    if (cls.boundary) run_map = to_standard_form(map, cls.dw);

    // deterministic sample set
    SplitMix64 g(opts.seed);
    std::vector<Complex> params;
    for (long k = 0; k < opts.samples; ++k) {
        if (!cls.boundary && run_map.domain() == Domain::Disk) {
            params.push_back(sample_circle(g));
        } else if (!cls.boundary) {
            params.push_back(Complex(g.uniform(-opts.x_max, opts.x_max), 0.0));
        } else {
            double x = 0.0;
            do {
                x = g.uniform(-opts.x_max, opts.x_max);
            } while (std::abs(x) < opts.x_min);
            params.push_back(Complex(x, 0.0));
        }
    }

    rep.outcomes.resize(params.size());
    std::vector<std::vector<Category>> series(
        params.size(), std::vector<Category>(rep.checkpoints.size(), Category::Undecided));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long k = 0; k < long(params.size()); ++k) {
        if (cls.boundary)
            rep.outcomes[std::size_t(k)] = run_boundary_sample(
                run_map, params[std::size_t(k)].real(), rep.checkpoints, opts,
                series[std::size_t(k)]);
        else
            rep.outcomes[std::size_t(k)] = run_elliptic_sample(
                run_map, p, params[std::size_t(k)], rep.checkpoints, opts, series[std::size_t(k)]);
    }

    for (std::size_t c = 0; c < rep.checkpoints.size(); ++c) {
        long conv = 0, mod1 = 0, und = 0;
        for (std::size_t k = 0; k < params.size(); ++k) {
            switch (series[k][c]) {
            case Category::ConvergedToP:
            case Category::Escaped: ++conv; break;
            case Category::Mod1: ++mod1; break;
            default: ++und; break;
            }
        }
        rep.converged_series.push_back(double(conv) / double(params.size()));
        rep.mod1_series.push_back(double(mod1) / double(params.size()));
        rep.undecided_series.push_back(double(und) / double(params.size()));
    }
    rep.frac_converged = rep.converged_series.back();
    rep.frac_mod1 = rep.mod1_series.back();
    rep.frac_undecided = rep.undecided_series.back();
    for (const SampleOutcome& o : rep.outcomes)
        if (o.used_shortcut) ++rep.shortcut_used;
    return rep;
}

Parabolic2Probe parabolic2_probe(const SelfMap& map, const Classification& cls,
                                 const ExperimentOptions& opts) {
    if (cls.kind != MapKind::ParabolicII)
        throw TypeMismatch("type II probe: map must be classified parabolic type II");
    Parabolic2Probe probe;
    probe.trajectories = convergence_experiment(map, cls, opts);
    probe.inner = inner_test(map, std::max<long>(100, opts.samples), opts.seed + 1);
    probe.flag = "exploratory — open problem in the paper";
    return probe;
}

} // namespace dwlab
