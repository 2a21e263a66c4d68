#include "dwlab/report.hpp"

#include "dwlab/error.hpp"

#include <charconv>
#include <cctype>
#include <fstream>

namespace dwlab {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::string map_slug(const std::string& name) {
    std::string slug;
    bool gap = false;
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            if (gap && !slug.empty()) slug += '-';
            gap = false;
            slug += char(std::tolower(static_cast<unsigned char>(c)));
        } else {
            gap = true;
        }
    }
    return slug.empty() ? "map" : slug;
}

std::string report_filename(const std::string& subcommand, const std::string& slug,
                            std::uint64_t seed, const std::string& ext) {
    return subcommand + "-" + slug + "-" + std::to_string(seed) + "." + ext;
}

json report_envelope(const std::string& subcommand, std::uint64_t seed, const json& config_echo) {
    json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["subcommand"] = subcommand;
    doc["seed"] = seed;
    doc["config"] = config_echo;
    doc["results"] = json::object();
    doc["checks"] = json::array();
    return doc;
}

namespace {

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json ext_complex_json(const ExtComplex& z) {
    if (z.infinite) return json{{"infinite", true}};
    json j = complex_json(z.value);
    j["infinite"] = false;
    return j;
}

} // namespace

json to_json(const Classification& cls) {
    json j;
    j["kind"] = to_string(cls.kind);
    j["location"] = cls.boundary ? "boundary" : "interior";
    j["dw_point"] = ext_complex_json(cls.dw.point);
    j["multiplier"] = complex_json(cls.multiplier);
    j["multiplier_error"] = cls.multiplier_error;
    j["s_inf"] = cls.s_inf;
    j["step_fit"] = {{"s_inf", cls.step_fit.s_inf},
                     {"beta", cls.step_fit.beta},
                     {"rms_residual", cls.step_fit.rms_residual}};
    j["last_step"] = cls.last_step;
    j["orbit_length"] = cls.orbit_length;
    j["step_stride"] = cls.step_stride;
    j["step_tail"] = cls.step_tail;
    j["thresholds"] = {{"tau_A", cls.options.tau_A},
                       {"tau_s", cls.options.tau_s},
                       {"n_max", cls.options.n_max},
                       {"fit_residual_max", cls.options.fit_residual_max}};
    if (!cls.detail.empty()) j["detail"] = cls.detail;
    return j;
}

json to_json(const ResidualStats& stats) {
    return json{{"max", stats.max_residual}, {"mean", stats.mean_residual},
                {"points", stats.points}};
}

json to_json(const Conjugation& conj) {
    json j;
    j["kind"] = to_string(conj.kind);
    j["depth"] = conj.depth;
    j["parameter"] = complex_json(conj.parameter);
    j["residuals"] = to_json(conj.residuals);
    if (conj.kind == ConjugationKind::Koenigs) j["fixed_point"] = complex_json(conj.fixed_point);
    if (conj.kind != ConjugationKind::Koenigs) j["v_norm"] = conj.v_norm;
    if (conj.kind == ConjugationKind::Pommerenke) j["u_norm"] = conj.u_norm;
    return j;
}

json to_json(const InnerTestReport& rep) {
    const char* verdict = rep.verdict == InnerTestReport::Verdict::Inner
                              ? "inner"
                              : rep.verdict == InnerTestReport::Verdict::NotInner ? "not-inner"
                                                                                  : "undecided";
    json j;
    j["samples"] = rep.samples;
    j["decided"] = rep.decided;
    j["frac_mod1"] = rep.frac_mod1;
    j["frac_low"] = rep.frac_low;
    j["verdict"] = verdict;
    j["histogram"] = rep.histogram;
    return j;
}

json to_json(const ConvergenceReport& rep) {
    json j;
    j["kind"] = to_string(rep.kind);
    j["boundary_mode"] = rep.boundary_mode;
    j["n_max"] = rep.n_max;
    j["samples"] = rep.samples;
    j["frac_converged"] = rep.frac_converged;
    j["frac_mod1"] = rep.frac_mod1;
    j["frac_undecided"] = rep.frac_undecided;
    j["checkpoints"] = rep.checkpoints;
    j["converged_series"] = rep.converged_series;
    j["mod1_series"] = rep.mod1_series;
    j["undecided_series"] = rep.undecided_series;
    j["shortcut_used"] = rep.shortcut_used;
    json outs = json::array();
    for (const SampleOutcome& o : rep.outcomes) {
        const char* cat = "undecided";
        switch (o.category) {
        case SampleOutcome::Category::ConvergedToP: cat = "converged"; break;
        case SampleOutcome::Category::Escaped: cat = "escaped"; break;
        case SampleOutcome::Category::Mod1: cat = "mod1"; break;
        default: break;
        }
        json oj;
        oj["zeta"] = complex_json(o.zeta);
        oj["category"] = cat;
        oj["decided_at"] = o.decided_at;
        if (std::isfinite(o.final_distance)) oj["final_distance"] = o.final_distance;
        oj["used_shortcut"] = o.used_shortcut;
        outs.push_back(std::move(oj));
    }
    j["outcomes"] = std::move(outs);
    return j;
}

json to_json(const SchwarzReport& rep) {
    json j;
    j["vacuous"] = rep.vacuous;
    j["eps_grid"] = rep.eps_grid;
    j["min_margin"] = rep.min_margin;
    j["violations"] = rep.violations;
    j["samples"] = rep.samples.size();
    json margins = json::array();
    for (const InequalitySample& s : rep.samples)
        margins.push_back(json{{"z", complex_json(s.z)},
                               {"lhs", s.lhs},
                               {"rhs", s.rhs},
                               {"margin", s.margin}});
    j["sample_margins"] = std::move(margins);
    return j;
}

json to_json(const CondProbReport& rep) {
    return json{{"omega_z_E", rep.omega_z_E}, {"omega_z_F", rep.omega_z_F},
                {"sup_F", rep.sup_F},         {"margin", rep.margin},
                {"eps_grid", rep.eps_grid},   {"pass", rep.pass}};
}

json to_json(const SlitComparisonReport& rep) {
    return json{{"lhs", rep.lhs},           {"rhs", rep.rhs},
                {"eps_grid", rep.eps_grid}, {"slit_count", rep.slit_count},
                {"vacuous", rep.vacuous},   {"pass", rep.pass}};
}

json to_json(const OmegaDecay& rep, const Exhaustion& ex) {
    json j;
    j["map"] = ex.map_name;
    j["t0"] = ex.t0;
    j["h"] = ex.h;
    j["p"] = complex_json(ex.p);
    j["omega"] = rep.omega;
    j["residuals"] = rep.residuals;
    j["alpha_hat"] = rep.alpha_hat;
    j["first_below_0_05"] = rep.first_below;
    j["f_cell_counts"] = ex.f_cell_counts;
    j["visible_components"] = ex.visible_components;
    j["subset_violations"] = ex.subset_violations;
    j["incl_violations"] = ex.incl_violations;
    j["incl_checks"] = ex.incl_checks;
    return j;
}

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SolverError("report: cannot open '" + path + "' for writing");
    out << doc.dump(2) << "\n";
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

} // namespace

void write_csv_file(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SolverError("report: cannot open '" + path + "' for writing");
    auto emit_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_escape(row[i]);
        }
        out << "\r\n";
    };
    emit_row(table.header);
    for (const auto& row : table.rows) emit_row(row);
}

namespace {

bool type_matches(const json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "number") return doc.is_number();
    if (type == "integer") return doc.is_number_integer() || doc.is_number_unsigned();
    if (type == "boolean") return doc.is_boolean();
    if (type == "null") return doc.is_null();
    return false;
}

bool validate_node(const json& doc, const json& schema, std::string path, std::string* error) {
    auto fail = [&](const std::string& what) {
        if (error) *error = path + ": " + what;
        return false;
    };
    if (schema.contains("type") && !type_matches(doc, schema["type"].get<std::string>()))
        return fail("expected type " + schema["type"].get<std::string>());
    if (schema.contains("enum")) {
        bool ok = false;
        for (const json& v : schema["enum"])
            if (v == doc) ok = true;
        if (!ok) return fail("value not in enum");
    }
    if (schema.contains("required")) {
        for (const json& key : schema["required"])
            if (!doc.contains(key.get<std::string>()))
                return fail("missing required key '" + key.get<std::string>() + "'");
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
            if (!doc.contains(it.key())) continue;
            if (!validate_node(doc[it.key()], it.value(), path + "/" + it.key(), error))
                return false;
        }
    }
    if (schema.contains("items") && doc.is_array()) {
        std::size_t idx = 0;
        for (const json& item : doc) {
            if (!validate_node(item, schema["items"], path + "[" + std::to_string(idx) + "]",
                               error))
                return false;
            ++idx;
        }
    }
    return true;
}

} // namespace

bool validate_schema(const json& doc, const json& schema, std::string* error) {
    return validate_node(doc, schema, "$", error);
}

} // namespace dwlab
