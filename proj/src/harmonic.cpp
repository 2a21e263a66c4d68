#include "dwlab/harmonic.hpp"

#include "dwlab/error.hpp"
#include "dwlab/hyperbolic.hpp"
#include "dwlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dwlab {

namespace {

double angle_of(Complex z) {
    double a = std::atan2(z.imag(), z.real());
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    return a;
}

bool angle_in_arc(double a, double theta0, double theta1) {
    const double two_pi = 2.0 * std::numbers::pi;
    auto norm = [&](double x) {
        x = std::fmod(x, two_pi);
        return x < 0.0 ? x + two_pi : x;
    };
    const double t0 = norm(theta0), t1 = norm(theta1);
    if (t0 <= t1) return a >= t0 && a < t1;
    return a >= t0 || a < t1;
}

} // namespace

TargetSelector TargetSelector::full_circle() {
    TargetSelector t;
    t.whole_circle = true;
    return t;
}

TargetSelector TargetSelector::arc(double theta0, double theta1) {
    TargetSelector t;
    t.circle_arc = {theta0, theta1};
    return t;
}

TargetSelector TargetSelector::inner_boundary() {
    TargetSelector t;
    t.free_boundary = true;
    return t;
}

TargetSelector TargetSelector::obstacles(std::vector<int> ids) {
    TargetSelector t;
    t.obstacle_ids = std::move(ids);
    return t;
}

bool TargetSelector::matches(std::uint8_t feature_id, Complex z) const {
    if (feature_id == kFeatureCircle) {
        if (whole_circle) return true;
        if (circle_arc) return angle_in_arc(angle_of(z), circle_arc->first, circle_arc->second);
        return false;
    }
    if (feature_id == kFeatureLevel) return free_boundary;
    const int ob = int(feature_id) - kFeatureObstacleBase;
    return std::find(obstacle_ids.begin(), obstacle_ids.end(), ob) != obstacle_ids.end();
}

std::vector<std::uint8_t> boundary_data(const GridRegion& g, const TargetSelector& target) {
    std::vector<std::uint8_t> data(g.cells.size(), 0);
    for (int j = -g.m; j <= g.m; ++j)
        for (int i = -g.m; i <= g.m; ++i) {
            const std::size_t k = g.index(i, j);
            if (g.cells[k] == GridRegion::Boundary &&
                target.matches(g.feature[k], g.point(i, j)))
                data[k] = 1;
        }
    return data;
}

double SolvedField::value_at(Complex z) const {
    const GridRegion& g = *region;
    const double x = z.real() / g.h, y = z.imag() / g.h;
    const int i0 = int(std::floor(x)), j0 = int(std::floor(y));
    double acc = 0.0, wsum = 0.0;
    bool any = false;
    for (int dj = 0; dj <= 1; ++dj)
        for (int di = 0; di <= 1; ++di) {
            const int i = i0 + di, j = j0 + dj;
            if (!g.in_range(i, j)) continue;
            const std::size_t k = g.index(i, j);
            if (g.cells[k] == GridRegion::Exterior) continue;
            const double w = (di ? x - i0 : i0 + 1 - x) * (dj ? y - j0 : j0 + 1 - y);
            acc += w * sor.u[k];
            wsum += w;
            any = true;
        }
    if (!any || wsum <= 0.0)
        throw InvalidInput("harmonic: evaluation point is outside the region");
    return std::clamp(acc / wsum, 0.0, 1.0);
}

SolvedField solve_harmonic(const GridRegion& region, const TargetSelector& target,
                           const SorOptions& opts) {
    SolvedField f;
    f.region = &region;
    f.sor = solve_dirichlet(region, boundary_data(region, target), opts);
    return f;
}

HarmonicEstimate harmonic_measure(Complex z, const TargetSelector& target,
                                  const GridRegion& region, const SorOptions& opts) {
    int i, j;
    if (region.cell_of(z, i, j) < 0 || region.cell(i, j) == GridRegion::Exterior)
        throw InvalidInput("harmonic: z must be interior to the region");
    const SolvedField f = solve_harmonic(region, target, opts);
    HarmonicEstimate est;
    est.value = f.value_at(z);
    est.h = region.h;
    est.residual = f.sor.last_max_update;
    est.harmonicity = f.sor.harmonicity_residual;
    est.sweeps = f.sor.sweeps;
    return est;
}

namespace {

// Prolong a coarse solution onto a finer region as a warm start.
std::vector<double> prolong(const SolvedField& coarse, const GridRegion& fine) {
    std::vector<double> u(fine.cells.size(), 0.0);
    const int m = fine.m;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = -m; j <= m; ++j)
        for (int i = -m; i <= m; ++i) {
            const std::size_t k = fine.index(i, j);
            if (fine.cells[k] != GridRegion::Interior) continue;
            try {
                u[k] = coarse.value_at(fine.point(i, j));
            } catch (const InvalidInput&) {
                u[k] = 0.5;
            }
        }
    return u;
}

} // namespace

HarmonicEstimate harmonic_measure_extrapolated(Complex z, const TargetSelector& target,
                                               const RegionSpec& spec, double h,
                                               const SorOptions& opts) {
    const GridRegion coarse = build_grid_region(spec, h);
    const SolvedField coarse_field = solve_harmonic(coarse, target, opts);
    const GridRegion fine = build_grid_region(spec, h / 2.0);
    const std::vector<double> init = prolong(coarse_field, fine);
    SolvedField fine_field;
    fine_field.region = &fine;
    fine_field.sor = solve_dirichlet(fine, boundary_data(fine, target), opts, &init);

    HarmonicEstimate est;
    est.h = fine.h;
    est.value = fine_field.value_at(z);
    est.residual = fine_field.sor.last_max_update;
    est.harmonicity = fine_field.sor.harmonicity_residual;
    est.sweeps = fine_field.sor.sweeps;
    // second-order extrapolation from the pair of spacings
    est.richardson = (4.0 * est.value - coarse_field.value_at(z)) / 3.0;
    return est;
}

T0Search choose_t0(const SelfMap& map, Complex p, double h, double t_start) {
    T0Search out;
    for (double t = t_start; t >= std::exp2(-20.0); t *= 0.5) {
        ++out.tried;
        try {
            const GridRegion g = build_grid_region(RegionSpec::sublevel(map, 1, p, t), h);
            out.last_margin = 1.0 - g.max_interior_modulus;
            if (out.last_margin >= 10.0 * h) {
                out.t0 = t;
                return out;
            }
        } catch (const InvalidInput&) {
            // component vanished at this t; keep halving
        }
    }
    return out;
}

Exhaustion build_exhaustion(const SelfMap& map, Complex p, double t0, long levels, double h,
                            std::uint64_t seed) {
    if (levels < 1) throw InvalidInput("exhaustion: need at least one level");
    if (!(t0 > 0.0)) throw InvalidInput("exhaustion: t0 must be positive");
    if (!in_domain(Domain::Disk, p)) throw InvalidInput("exhaustion: p must be inside the disk");

    Exhaustion ex;
    ex.map_name = map.name();
    ex.t0 = t0;
    ex.h = h;
    ex.p = p;

    const int m = int(std::lround(1.0 / h)) + 2;
    const int n = 2 * m + 1;
    const std::size_t total = std::size_t(n) * std::size_t(n);

    // incremental orbit field W = phi_n(cell), advanced one application per level
    std::vector<Complex> w(total);
    std::vector<std::uint8_t> valid(total, 0);
    for (int j = -m; j <= m; ++j)
        for (int i = -m; i <= m; ++i) {
            const std::size_t k = std::size_t(j + m) * std::size_t(n) + std::size_t(i + m);
            const Complex z(i * h, j * h);
            if (std::abs(z) < 1.0) {
                w[k] = z;
                valid[k] = 1;
            }
        }

    std::vector<std::uint8_t> inside(total);
    for (long level = 1; level <= levels; ++level) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long k = 0; k < long(total); ++k) {
            if (!valid[k]) continue;
            try {
                const Complex img = map.eval(w[k]);
                if (!is_finite_number(img) || std::abs(img) >= 1.0) {
                    valid[k] = 0;
                } else {
                    w[k] = img;
                }
            } catch (const InvalidInput&) {
                valid[k] = 0;
            }
        }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long k = 0; k < long(total); ++k)
            inside[k] = valid[k] && hyp_dist_disk_raw(w[k], p) < t0 ? 1 : 0;

        RegionSpec spec = RegionSpec::sublevel(map, level, p, t0);
        ex.levels.push_back(build_region_from_bitmap(inside, spec, h));
        ex.f_cell_counts.push_back(ex.levels.back().count_boundary(kFeatureLevel));
        ex.visible_components.push_back(count_components(inside, h));
    }

    // eq-style nesting checks, cellwise with one-cell slack
    auto near_interior = [&](const GridRegion& g, int i, int j) {
        if (g.cell(i, j) == GridRegion::Interior) return true;
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d)
            if (g.in_range(i + di[d], j + dj[d]) &&
                g.cell(i + di[d], j + dj[d]) == GridRegion::Interior)
                return true;
        return false;
    };

    for (std::size_t l = 0; l + 1 < ex.levels.size(); ++l) {
        const GridRegion& cur = ex.levels[l];
        const GridRegion& next = ex.levels[l + 1];
        for (int j = -m; j <= m; ++j)
            for (int i = -m; i <= m; ++i) {
                const auto c = cur.cell(i, j);
                const bool in_set = c == GridRegion::Interior ||
                                    (c == GridRegion::Boundary &&
                                     cur.feature[cur.index(i, j)] == kFeatureLevel);
                if (in_set && !near_interior(next, i, j)) ++ex.subset_violations;
            }
    }

    // phi_k(Omega_{n+k}) inside Omega_n, 100 random cells per (n, k <= 3)
    SplitMix64 rng(seed);
    for (std::size_t l = 0; l < ex.levels.size(); ++l) {
        for (long k_step = 1; k_step <= 3; ++k_step) {
            const long src = long(l) + k_step; // 0-based level index of Omega_{n+k}
            if (src >= long(ex.levels.size())) break;
            const GridRegion& from = ex.levels[std::size_t(src)];
            const GridRegion& to = ex.levels[l];
            // collect interior cells once per (l, k)
            std::vector<std::pair<int, int>> interior;
            for (int j = -m; j <= m; ++j)
                for (int i = -m; i <= m; ++i)
                    if (from.cell(i, j) == GridRegion::Interior) interior.emplace_back(i, j);
            if (interior.empty()) continue;
            for (int trial = 0; trial < 100; ++trial) {
                const auto [ci, cj] =
                    interior[std::size_t(rng.uniform01() * double(interior.size())) %
                             interior.size()];
                Complex z = from.point(ci, cj);
                bool ok = true;
                for (long s = 0; s < k_step && ok; ++s) {
                    try {
                        z = map.eval(z);
                    } catch (const InvalidInput&) {
                        ok = false;
                    }
                }
                ++ex.incl_checks;
                if (!ok) {
                    ++ex.incl_violations;
                    continue;
                }
                int ti, tj;
                if (to.cell_of(z, ti, tj) < 0 || !near_interior(to, ti, tj))
                    ++ex.incl_violations;
            }
        }
    }
    return ex;
}

OmegaDecay omega_decay(const Exhaustion& ex, const SorOptions& opts) {
    OmegaDecay out;
    for (std::size_t l = 0; l < ex.levels.size(); ++l) {
        if (ex.f_cell_counts[l] == 0) {
            out.omega.push_back(0.0);
            out.residuals.push_back(0.0);
        } else {
            const HarmonicEstimate est =
                harmonic_measure(ex.p, TargetSelector::inner_boundary(), ex.levels[l], opts);
            out.omega.push_back(est.value);
            out.residuals.push_back(est.residual);
        }
        if (out.first_below < 0 && out.omega.back() < 0.05) out.first_below = long(l) + 1;
    }
    // geometric ratio over the strictly decaying stretch
    double log_sum = 0.0;
    long ratios = 0;
    for (std::size_t l = 0; l + 1 < out.omega.size(); ++l) {
        const double a = out.omega[l], b = out.omega[l + 1];
        if (a > 1e-6 && b > 1e-6 && b < a && a < 1.0 - 1e-9) {
            log_sum += std::log(b / a);
            ++ratios;
        }
    }
    out.alpha_hat = ratios ? std::exp(log_sum / double(ratios)) : 1.0;
    return out;
}

namespace {

// Cache of solved components of one region family: builds (and solves) the
// component containing each requested point on demand.
class ComponentCache {
public:
    ComponentCache(RegionSpec spec, TargetSelector target, double h, SorOptions opts)
        : spec_(std::move(spec)), target_(std::move(target)), h_(h), opts_(opts) {}

    // nullptr when z is not inside the spec
    const SolvedField* field_at(Complex z) {
        for (const auto& entry : entries_) {
            int i, j;
            if (entry.field.region->cell_of(z, i, j) >= 0 &&
                entry.field.region->cell(i, j) == GridRegion::Interior)
                return &entry.field;
        }
        if (!spec_contains(spec_, z, h_)) return nullptr;
        RegionSpec seeded = spec_;
        seeded.seed = z;
        Entry entry;
        entry.region = std::make_unique<GridRegion>(build_grid_region(seeded, h_));
        entry.field.region = entry.region.get();
        entry.field.sor = solve_dirichlet(*entry.region, boundary_data(*entry.region, target_),
                                          opts_);
        entries_.push_back(std::move(entry));
        return &entries_.back().field;
    }

private:
    struct Entry {
        std::unique_ptr<GridRegion> region;
        SolvedField field;
    };
    RegionSpec spec_;
    TargetSelector target_;
    double h_;
    SorOptions opts_;
    std::deque<Entry> entries_;
};

} // namespace

SchwarzReport verify_schwarz_lemma(const SelfMap& map, Complex e_center, double e_radius,
                                   long sample_count, double h, std::uint64_t seed,
                                   const SorOptions& opts) {
    if (map.domain() != Domain::Disk)
        throw InvalidInput("schwarz check: map must act on the disk");
    SchwarzReport rep;
    rep.eps_grid = 5.0 * h;

    const Obstacle e_set = Obstacle::closed_disk(e_center, e_radius);
    const Obstacle pre = Obstacle::preimage_of_disk(map, e_center, e_radius);

    // vacuous when no lattice cell lands in E under phi
    {
        const int m = int(std::lround(1.0 / h)) + 2;
        bool any = false;
        for (int j = -m; j <= m && !any; ++j)
            for (int i = -m; i <= m && !any; ++i) {
                const Complex z(i * h, j * h);
                if (std::abs(z) < 1.0 && pre.removes(z, h)) any = true;
            }
        if (!any) {
            rep.vacuous = true;
            return rep;
        }
    }

    RegionSpec lhs_spec = RegionSpec::unit_disk();
    lhs_spec.obstacles.push_back(pre);
    RegionSpec rhs_spec = RegionSpec::unit_disk();
    rhs_spec.obstacles.push_back(e_set);
    ComponentCache lhs_cache(lhs_spec, TargetSelector::obstacles({0}), h, opts);
    ComponentCache rhs_cache(rhs_spec, TargetSelector::obstacles({0}), h, opts);

    SplitMix64 g(seed);
    long attempts = 0;
    rep.min_margin = std::numeric_limits<double>::infinity();
    while (long(rep.samples.size()) < sample_count && attempts < 100 * sample_count) {
        ++attempts;
        const Complex z = sample_disk(g, 0.97);
        const SolvedField* lhs_field = lhs_cache.field_at(z);
        if (!lhs_field) continue;
        Complex fz;
        try {
            fz = map.eval(z);
        } catch (const InvalidInput&) {
            continue;
        }
        const SolvedField* rhs_field = rhs_cache.field_at(fz);
        if (!rhs_field) continue;
        InequalitySample s;
        s.z = z;
        s.lhs = lhs_field->value_at(z);
        s.rhs = rhs_field->value_at(fz);
        s.margin = s.rhs - s.lhs;
        rep.min_margin = std::min(rep.min_margin, s.margin);
        if (s.margin < -rep.eps_grid) ++rep.violations;
        rep.samples.push_back(s);
    }
    if (rep.samples.empty())
        throw InvalidInput("schwarz check: no admissible sample points found");
    return rep;
}

CondProbReport verify_conditional_probability(Complex z, const TargetSelector& e_target,
                                              const Obstacle& f_set, double h,
                                              const SorOptions& opts) {
    CondProbReport rep;
    rep.eps_grid = 5.0 * h;

    // omega(., E, D) on the plain disk
    RegionSpec disk_spec = RegionSpec::unit_disk(z);
    const GridRegion disk_region = build_grid_region(disk_spec, h);
    const SolvedField u_e = solve_harmonic(disk_region, e_target, opts);
    rep.omega_z_E = u_e.value_at(z);

    // omega(., F, D \ F), component of z
    RegionSpec cut_spec = RegionSpec::unit_disk(z);
    cut_spec.obstacles.push_back(f_set);
    if (!spec_contains(cut_spec, z, h))
        throw InvalidInput("conditional probability: z lies on F");
    const GridRegion cut_region = build_grid_region(cut_spec, h);

    // separation: the component of z must not reach E on the circle
    for (int j = -cut_region.m; j <= cut_region.m; ++j)
        for (int i = -cut_region.m; i <= cut_region.m; ++i) {
            const std::size_t k = cut_region.index(i, j);
            if (cut_region.cells[k] == GridRegion::Boundary &&
                cut_region.feature[k] == kFeatureCircle &&
                e_target.matches(kFeatureCircle, cut_region.point(i, j)))
                throw InvalidInput("conditional probability: F does not separate z from E");
        }

    const SolvedField u_f = solve_harmonic(cut_region, TargetSelector::obstacles({0}), opts);
    rep.omega_z_F = u_f.value_at(z);

    // sup over F of omega(., E, D): scan lattice cells on F
    double sup = 0.0;
    for (int j = -disk_region.m; j <= disk_region.m; ++j)
        for (int i = -disk_region.m; i <= disk_region.m; ++i) {
            const std::size_t k = disk_region.index(i, j);
            if (disk_region.cells[k] != GridRegion::Interior) continue;
            const Complex p = disk_region.point(i, j);
            if (f_set.feature_distance(p) <= 0.5 * h) sup = std::max(sup, u_e.sor.u[k]);
        }
    rep.sup_F = sup;
    rep.margin = rep.omega_z_F * rep.sup_F - rep.omega_z_E;
    rep.pass = rep.margin >= -rep.eps_grid;
    return rep;
}

SlitComparisonReport verify_slit_comparison(double theta0, double theta1, long slit_count,
                                            double slit_r0, double h, Complex p,
                                            const SorOptions& opts) {
    SlitComparisonReport rep;
    rep.eps_grid = 5.0 * h;
    rep.slit_count = slit_count;

    const GridRegion disk_region = build_grid_region(RegionSpec::unit_disk(p), h);
    rep.lhs = harmonic_measure(p, TargetSelector::arc(theta0, theta1), disk_region, opts).value;

    if (slit_count == 0) {
        rep.vacuous = true; // empty slit family: the comparison degenerates
        rep.pass = true;
        return rep;
    }

    RegionSpec spec = RegionSpec::unit_disk(p);
    std::vector<int> ids;
    for (long k = 0; k < slit_count; ++k) {
        const double th = theta0 + (theta1 - theta0) * (double(k) + 0.5) / double(slit_count);
        spec.obstacles.push_back(Obstacle::radial_slit(std::polar(1.0, th), slit_r0));
        ids.push_back(int(k));
    }
    const GridRegion slit_region = build_grid_region(spec, h);
    rep.rhs = harmonic_measure(p, TargetSelector::obstacles(ids), slit_region, opts).value;
    rep.pass = rep.lhs <= rep.rhs + rep.eps_grid;
    return rep;
}

} // namespace dwlab
