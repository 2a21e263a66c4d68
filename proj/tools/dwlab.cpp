// dwlab: batch experiment runner for Denjoy-Wolff dynamics.
//
// Exit codes: 0 pass, 1 usage error, 2 verified-inequality violation,
// 3 undecided outcome.

#include "dwlab/boundary.hpp"
#include "dwlab/classify.hpp"
#include "dwlab/conjugation.hpp"
#include "dwlab/error.hpp"
#include "dwlab/harmonic.hpp"
#include "dwlab/report.hpp"

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>

namespace {

using namespace dwlab;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitUndecided = 3;

struct CommonOpts {
    std::string mapref;
    std::string expr;
    std::string catalog;
    std::string domain = "disk";
    long n_max = 30;
    long samples = 500;
    int grid = 256;
    double t0 = 0.0; // 0 = run the search
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int schedule_depth = 12;
};

// Shared experiment options live on the app so bare key=value config lines
// resolve; subcommands reach them through fallthrough.
void add_common(CLI::App& app, CommonOpts& opts) {
    app.add_option("--map", opts.expr, "map expression in z (with --domain)");
    app.add_option("--catalog", opts.catalog, "catalog map name");
    app.add_option("--domain", opts.domain, "disk or halfplane (for --map)")
        ->check(CLI::IsMember({"disk", "halfplane"}));
    app.add_option("--n-max", opts.n_max, "iterate depth");
    app.add_option("--samples", opts.samples, "sample count");
    app.add_option("--grid", opts.grid, "lattice density k, spacing h = 1/k")
        ->check(CLI::IsMember({128, 256, 512}));
    app.add_option("--t0", opts.t0, "exhaustion parameter override (0 = search)");
    app.add_option("--seed", opts.seed, "RNG seed, recorded in every output");
    app.add_option("--out-dir", opts.out_dir, "output directory");
    app.add_option("--schedule-depth", opts.schedule_depth, "radial schedule points");
}

void add_mapref(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("mapref", opts.mapref,
                    "catalog name (catalog:<domain>:<map>) or expression in z");
}

SelfMap resolve_map(const CommonOpts& opts) {
    const std::string& ref = !opts.mapref.empty() ? opts.mapref : std::string();
    if (!opts.catalog.empty()) return SelfMap::from_catalog(opts.catalog);
    if (!ref.empty()) {
        if (ref.rfind("catalog:", 0) == 0) return SelfMap::from_catalog(ref);
        return SelfMap::from_expression(
            ref, opts.domain == "halfplane" ? Domain::HalfPlane : Domain::Disk);
    }
    if (!opts.expr.empty())
        return SelfMap::from_expression(
            opts.expr, opts.domain == "halfplane" ? Domain::HalfPlane : Domain::Disk);
    throw InvalidInput("no map given: pass a positional mapref, --catalog, or --map");
}

json config_echo(const CommonOpts& opts, const SelfMap& map) {
    json j;
    j["map"] = map.name();
    j["n_max"] = opts.n_max;
    j["samples"] = opts.samples;
    j["grid"] = opts.grid;
    j["t0"] = opts.t0;
    j["schedule_depth"] = opts.schedule_depth;
    return j;
}

std::string out_path(const CommonOpts& opts, const std::string& file) {
    std::filesystem::create_directories(opts.out_dir);
    return (std::filesystem::path(opts.out_dir) / file).string();
}

void add_check(json& doc, const std::string& name, bool pass, double margin) {
    doc["checks"].push_back(json{{"name", name}, {"pass", pass}, {"margin", margin}});
}

Complex parse_point(const std::string& text) {
    // complex literals ride on the expression grammar ("0.5+0.1i")
    return eval_expr(*parse_expression(text), Complex(0.0, 0.0));
}

int run_classify(const CommonOpts& opts) {
    const SelfMap map = resolve_map(opts);
    ClassifyOptions copts;
    const Classification cls = classify(map, copts);
    json doc = report_envelope("classify", opts.seed, config_echo(opts, map));
    doc["results"]["classification"] = to_json(cls);

    const std::string slug = map_slug(map.name());
    write_json_file(out_path(opts, report_filename("classify", slug, opts.seed, "json")), doc);
    CsvTable steps;
    steps.header = {"k", "n", "s"};
    for (std::size_t k = 0; k < cls.step_tail.size(); ++k)
        steps.rows.push_back({std::to_string(k), std::to_string(long(k) * cls.step_stride),
                              format_double(cls.step_tail[k])});
    write_csv_file(out_path(opts, report_filename("classify", slug, opts.seed, "csv")), steps);

    std::cout << "classify " << map.name() << ": " << to_string(cls.kind) << "\n";
    if (cls.kind == MapKind::Undecided || cls.kind == MapKind::RejectedEllipticAutomorphism)
        return kExitUndecided;
    return kExitPass;
}

int run_orbit(const CommonOpts& opts, const std::string& z0_text) {
    const SelfMap map = resolve_map(opts);
    const Complex z0 = z0_text.empty() ? base_point(map.domain()) : parse_point(z0_text);
    const Orbit orbit = iterate(map, z0, opts.n_max);

    json doc = report_envelope("orbit", opts.seed, config_echo(opts, map));
    doc["config"]["z0"] = {{"re", z0.real()}, {"im", z0.imag()}};
    doc["results"]["escaped"] = orbit.escaped;
    doc["results"]["stagnated"] = orbit.stagnated;
    doc["results"]["last_n"] = orbit.last_n();
    doc["results"]["last_point"] = {{"re", orbit.last_point().real()},
                                    {"im", orbit.last_point().imag()}};

    const std::string slug = map_slug(map.name());
    write_json_file(out_path(opts, report_filename("orbit", slug, opts.seed, "json")), doc);
    CsvTable tab;
    tab.header = {"n", "re", "im", "s"};
    for (std::size_t k = 0; k < orbit.points.size(); ++k)
        tab.rows.push_back({std::to_string(orbit.indices[k]),
                            format_double(orbit.points[k].real()),
                            format_double(orbit.points[k].imag()),
                            k < orbit.steps.size() ? format_double(orbit.steps[k]) : ""});
    write_csv_file(out_path(opts, report_filename("orbit", slug, opts.seed, "csv")), tab);
    std::cout << "orbit " << map.name() << ": " << orbit.points.size() << " points\n";
    return kExitPass;
}

int run_conjugate(const CommonOpts& opts, const std::string& kind, long depth) {
    const SelfMap map = resolve_map(opts);
    const Classification cls = classify(map);
    if (cls.kind == MapKind::Undecided || cls.kind == MapKind::RejectedEllipticAutomorphism) {
        std::cerr << "conjugate: classification undecided\n";
        return kExitUndecided;
    }

    std::optional<Conjugation> conj;
    if (kind == "koenigs" || (kind == "auto" && cls.kind == MapKind::Elliptic))
        conj = koenigs(map, cls, depth > 0 ? depth : 40);
    else if (kind == "valiron" || (kind == "auto" && cls.kind == MapKind::Hyperbolic))
        conj = valiron(map, cls, depth > 0 ? depth : 30);
    else if (kind == "pommerenke" || (kind == "auto" && cls.kind == MapKind::ParabolicI))
        conj = pommerenke(map, cls, depth > 0 ? depth : 1000);
    else
        throw TypeMismatch("conjugate: no conjugation for kind " +
                           std::string(to_string(cls.kind)));

    json doc = report_envelope("conjugate", opts.seed, config_echo(opts, map));
    doc["results"]["classification"] = to_json(cls);
    doc["results"]["conjugation"] = to_json(*conj);
    if (cls.kind == MapKind::ParabolicI || cls.kind == MapKind::ParabolicII) {
        const ParabolicAsymptotics rep = parabolic_asymptotics(map, cls, conj->depth);
        json pj;
        pj["v_ratio_limit"] = rep.v_ratio_limit;
        pj["v_over_u_limit"] = rep.v_over_u_limit;
        pj["sigma_probes"] = rep.sigma_probes;
        pj["min_re_sigma"] = rep.min_re_sigma;
        pj["min_re_sigma_extended"] = rep.min_re_sigma_extended;
        pj["re_sigma_stabilized"] = rep.re_sigma_stabilized;
        doc["results"]["parabolic_asymptotics"] = std::move(pj);
    }

    const std::string slug = map_slug(map.name());
    write_json_file(out_path(opts, report_filename("conjugate", slug, opts.seed, "json")), doc);
    // grid export: z, sigma(z), functional-equation residual
    CsvTable tab;
    tab.header = {"re_z", "im_z", "re_sigma", "im_sigma", "residual"};
    const Complex center = conj->kind == ConjugationKind::Koenigs ? conj->fixed_point
                                                                  : base_point(Domain::HalfPlane);
    for (Complex z : residual_grid(map.domain(), center)) {
        const Complex s = conj->evaluate(z);
        tab.rows.push_back({format_double(z.real()), format_double(z.imag()),
                            format_double(s.real()), format_double(s.imag()),
                            format_double(conj->residual_at(z))});
    }
    write_csv_file(out_path(opts, report_filename("conjugate", slug, opts.seed, "csv")), tab);
    std::cout << "conjugate " << map.name() << ": " << to_string(conj->kind)
              << " max residual " << conj->residuals.max_residual << "\n";
    return kExitPass;
}

struct HarmonicFlags {
    std::string e_center = "0.3";
    double e_radius = 0.15;
    double f_radius = 0.5;
    long levels = 10;
    long slits = 64;
    double slit_r = 0.9;
};

int run_harmonic(const CommonOpts& opts, const HarmonicFlags& flags) {
    const SelfMap map = resolve_map(opts);
    const double h = 1.0 / double(opts.grid);
    const Classification cls = classify(map);

    json doc = report_envelope("harmonic", opts.seed, config_echo(opts, map));
    bool violated = false;
    bool undecided = false;

    if (map.domain() == Domain::Disk) {
        const SchwarzReport schwarz = verify_schwarz_lemma(
            map, parse_point(flags.e_center), flags.e_radius, opts.samples, h, opts.seed);
        doc["results"]["schwarz"] = to_json(schwarz);
        if (!schwarz.vacuous) {
            add_check(doc, "schwarz-margin", schwarz.violations == 0, schwarz.min_margin);
            violated |= schwarz.violations != 0;
        }
    }

    const CondProbReport cond = verify_conditional_probability(
        Complex(0, 0), TargetSelector::arc(0.0, std::numbers::pi / 2),
        Obstacle::circle({0, 0}, flags.f_radius), h);
    doc["results"]["conditional_probability"] = to_json(cond);
    add_check(doc, "conditional-probability-margin", cond.pass, cond.margin);
    violated |= !cond.pass;

    const SlitComparisonReport slit =
        verify_slit_comparison(0.0, std::numbers::pi / 2, flags.slits, flags.slit_r, h);
    doc["results"]["slit_comparison"] = to_json(slit);
    if (!slit.vacuous) {
        add_check(doc, "slit-comparison", slit.pass, slit.rhs + slit.eps_grid - slit.lhs);
        violated |= !slit.pass;
    }

    // omega decay needs an elliptic map
    if (cls.kind == MapKind::Elliptic) {
        double t0 = opts.t0;
        if (t0 <= 0.0) {
            const T0Search search = choose_t0(map, cls.dw.point.value, h);
            if (!search.t0) {
                doc["results"]["omega_decay"] = {{"error", "no admissible t0 above 2^-20"}};
                undecided = true;
            } else {
                t0 = *search.t0;
            }
        }
        if (t0 > 0.0) {
            const Exhaustion ex =
                build_exhaustion(map, cls.dw.point.value, t0, flags.levels, h, opts.seed);
            const OmegaDecay dec = omega_decay(ex);
            doc["results"]["omega_decay"] = to_json(dec, ex);
            add_check(doc, "exhaustion-nesting",
                      ex.subset_violations == 0 && ex.incl_violations == 0,
                      double(ex.subset_violations + ex.incl_violations));
            violated |= ex.subset_violations != 0 || ex.incl_violations != 0;

            CsvTable tab;
            tab.header = {"n", "omega", "residual", "h"};
            for (std::size_t l = 0; l < dec.omega.size(); ++l)
                tab.rows.push_back({std::to_string(l + 1), format_double(dec.omega[l]),
                                    format_double(dec.residuals[l]), format_double(h)});
            write_csv_file(out_path(opts, "omega_decay.csv"), tab);
        }
    }

    const std::string slug = map_slug(map.name());
    write_json_file(out_path(opts, report_filename("harmonic", slug, opts.seed, "json")), doc);
    std::cout << "harmonic " << map.name() << (violated ? ": VIOLATION" : ": ok") << "\n";
    if (violated) return kExitViolation;
    if (undecided) return kExitUndecided;
    return kExitPass;
}

int run_exhaustion(const CommonOpts& opts, long levels) {
    const SelfMap map = resolve_map(opts);
    const double h = 1.0 / double(opts.grid);
    const Classification cls = classify(map);
    if (cls.kind != MapKind::Elliptic) {
        std::cerr << "exhaustion: map must be elliptic\n";
        return cls.kind == MapKind::Undecided ? kExitUndecided : kExitUsage;
    }
    double t0 = opts.t0;
    if (t0 <= 0.0) {
        const T0Search search = choose_t0(map, cls.dw.point.value, h);
        if (!search.t0) {
            std::cerr << "exhaustion: no admissible t0 above 2^-20\n";
            return kExitUndecided;
        }
        t0 = *search.t0;
    }
    const Exhaustion ex = build_exhaustion(map, cls.dw.point.value, t0, levels, h, opts.seed);
    for (std::size_t l = 0; l < ex.levels.size(); ++l)
        write_pgm(ex.levels[l], out_path(opts, "omega_region_n" + std::to_string(l + 1) + ".pgm"));

    json doc = report_envelope("exhaustion", opts.seed, config_echo(opts, map));
    doc["config"]["t0"] = t0;
    doc["results"]["levels"] = levels;
    doc["results"]["f_cell_counts"] = ex.f_cell_counts;
    doc["results"]["visible_components"] = ex.visible_components;
    doc["results"]["subset_violations"] = ex.subset_violations;
    doc["results"]["incl_violations"] = ex.incl_violations;
    doc["results"]["incl_checks"] = ex.incl_checks;
    add_check(doc, "exhaustion-nesting", ex.subset_violations == 0 && ex.incl_violations == 0,
              double(ex.subset_violations + ex.incl_violations));
    write_json_file(
        out_path(opts, report_filename("exhaustion", map_slug(map.name()), opts.seed, "json")),
        doc);
    std::cout << "exhaustion " << map.name() << ": " << levels << " levels\n";
    return ex.subset_violations == 0 && ex.incl_violations == 0 ? kExitPass : kExitViolation;
}

void write_boundary_csv(const CommonOpts& opts, const std::string& subcommand,
                        const SelfMap& map, const ConvergenceReport& rep) {
    CsvTable tab;
    tab.header = {"n", "fraction_converged", "fraction_mod1", "fraction_undecided"};
    for (std::size_t c = 0; c < rep.checkpoints.size(); ++c)
        tab.rows.push_back({std::to_string(rep.checkpoints[c]),
                            format_double(rep.converged_series[c]),
                            format_double(rep.mod1_series[c]),
                            format_double(rep.undecided_series[c])});
    write_csv_file(
        out_path(opts, report_filename(subcommand, map_slug(map.name()), opts.seed, "csv")), tab);
}

int run_boundary(const CommonOpts& opts, double escape_modulus) {
    const SelfMap map = resolve_map(opts);
    const Classification cls = classify(map);
    if (cls.kind == MapKind::Undecided || cls.kind == MapKind::RejectedEllipticAutomorphism) {
        std::cerr << "boundary: classification undecided\n";
        return kExitUndecided;
    }
    ExperimentOptions eopts;
    eopts.n_max = opts.n_max;
    eopts.samples = opts.samples;
    eopts.seed = opts.seed;
    eopts.escape_modulus = escape_modulus;
    eopts.schedule_depth = opts.schedule_depth;
    const ConvergenceReport rep = convergence_experiment(map, cls, eopts);
    const InnerTestReport inner = inner_test(map, std::max<long>(100, opts.samples), opts.seed);

    json doc = report_envelope("boundary", opts.seed, config_echo(opts, map));
    doc["config"]["escape_modulus"] = escape_modulus;
    doc["results"]["classification"] = to_json(cls);
    doc["results"]["convergence"] = to_json(rep);
    doc["results"]["inner_test"] = to_json(inner);
    write_json_file(
        out_path(opts, report_filename("boundary", map_slug(map.name()), opts.seed, "json")), doc);
    write_boundary_csv(opts, "boundary", map, rep);
    std::cout << "boundary " << map.name() << ": converged " << rep.frac_converged << " mod1 "
              << rep.frac_mod1 << " undecided " << rep.frac_undecided << "\n";
    return kExitPass;
}

int run_probe_p2(const CommonOpts& opts, double escape_modulus) {
    const SelfMap map = resolve_map(opts);
    const Classification cls = classify(map);
    ExperimentOptions eopts;
    eopts.n_max = opts.n_max;
    eopts.samples = opts.samples;
    eopts.seed = opts.seed;
    eopts.escape_modulus = escape_modulus;
    eopts.schedule_depth = opts.schedule_depth;
    const Parabolic2Probe probe = parabolic2_probe(map, cls, eopts); // throws on wrong type

    json doc = report_envelope("probe-p2", opts.seed, config_echo(opts, map));
    doc["config"]["escape_modulus"] = escape_modulus;
    doc["results"]["flag"] = probe.flag;
    doc["results"]["classification"] = to_json(cls);
    doc["results"]["convergence"] = to_json(probe.trajectories);
    doc["results"]["inner_test"] = to_json(probe.inner);
    write_json_file(
        out_path(opts, report_filename("probe-p2", map_slug(map.name()), opts.seed, "json")), doc);
    write_boundary_csv(opts, "probe-p2", map, probe.trajectories);
    std::cout << "probe-p2 " << map.name() << ": escape fraction "
              << probe.trajectories.frac_converged << "\n";
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* cap = std::getenv("DWLAB_THREADS")) {
        const int n = std::atoi(cap);
        if (n > 0) omp_set_num_threads(std::min(n, omp_get_max_threads()));
    }
#endif

    CLI::App app{"dwlab: iteration laboratory for holomorphic self-maps"};
    app.set_config("--config", "", "key=value configuration file (flags override)");
    app.require_subcommand(1);
    app.fallthrough();

    CommonOpts opts;
    add_common(app, opts);
    std::string z0_text;
    std::string conj_kind = "auto";
    long conj_depth = 0;
    long levels = 8;
    double escape_modulus = 1e3;
    HarmonicFlags hflags;

    CLI::App* c_classify = app.add_subcommand("classify", "locate and type the Denjoy-Wolff point");
    add_mapref(c_classify, opts);

    CLI::App* c_orbit = app.add_subcommand("orbit", "forward iteration record");
    add_mapref(c_orbit, opts);
    c_orbit->add_option("--z0", z0_text, "starting point (complex literal)");

    CLI::App* c_conj = app.add_subcommand("conjugate", "build the conjugating map");
    add_mapref(c_conj, opts);
    c_conj->add_option("--kind", conj_kind, "auto, koenigs, valiron, or pommerenke")
        ->check(CLI::IsMember({"auto", "koenigs", "valiron", "pommerenke"}));
    c_conj->add_option("--depth", conj_depth, "truncation depth (0 = per-kind default)");

    CLI::App* c_harm = app.add_subcommand("harmonic", "lemma verifiers and omega decay");
    add_mapref(c_harm, opts);
    c_harm->add_option("--levels", hflags.levels, "exhaustion levels for omega decay");
    c_harm->add_option("--e-center", hflags.e_center, "target disk center (complex literal)");
    c_harm->add_option("--e-radius", hflags.e_radius, "target disk radius");
    c_harm->add_option("--f-radius", hflags.f_radius, "separator circle radius");
    c_harm->add_option("--slits", hflags.slits, "slit count for the arc comparison");
    c_harm->add_option("--slit-r", hflags.slit_r, "slit base radius");

    CLI::App* c_exh = app.add_subcommand("exhaustion", "sublevel regions as PGM bitmaps");
    add_mapref(c_exh, opts);
    c_exh->add_option("--levels", levels, "number of levels");

    CLI::App* c_bdry = app.add_subcommand("boundary", "convergence experiment and inner test");
    add_mapref(c_bdry, opts);
    c_bdry->add_option("--escape-modulus", escape_modulus, "escape threshold");

    CLI::App* c_p2 = app.add_subcommand("probe-p2", "exploratory type II evidence");
    add_mapref(c_p2, opts);
    c_p2->add_option("--escape-modulus", escape_modulus, "escape threshold");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_classify->parsed()) return run_classify(opts);
        if (c_orbit->parsed()) return run_orbit(opts, z0_text);
        if (c_conj->parsed()) return run_conjugate(opts, conj_kind, conj_depth);
        if (c_harm->parsed()) return run_harmonic(opts, hflags);
        if (c_exh->parsed()) return run_exhaustion(opts, levels);
        if (c_bdry->parsed()) return run_boundary(opts, escape_modulus);
        if (c_p2->parsed()) return run_probe_p2(opts, escape_modulus);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TypeMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUndecided;
    }
    return kExitUsage;
}
