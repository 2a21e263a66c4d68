#pragma once

#include "dwlab/boundary.hpp"
#include "dwlab/classify.hpp"
#include "dwlab/conjugation.hpp"
#include "dwlab/harmonic.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace dwlab {

inline constexpr const char* kToolName = "dwlab";
inline constexpr const char* kToolVersion = "0.1.0";

// Shortest round-trip decimal form; keeps emitted files byte-stable.
std::string format_double(double v);

// Filesystem-safe slug of a map name: lowercase alnum runs joined by '-'.
std::string map_slug(const std::string& name);

std::string report_filename(const std::string& subcommand, const std::string& slug,
                            std::uint64_t seed, const std::string& ext);

// Report envelope: tool name/version, subcommand, seed, config echo.
nlohmann::json report_envelope(const std::string& subcommand, std::uint64_t seed,
                               const nlohmann::json& config_echo);

nlohmann::json to_json(const Classification& cls);
nlohmann::json to_json(const ResidualStats& stats);
nlohmann::json to_json(const Conjugation& conj);
nlohmann::json to_json(const InnerTestReport& rep);
nlohmann::json to_json(const ConvergenceReport& rep);
nlohmann::json to_json(const SchwarzReport& rep);
nlohmann::json to_json(const CondProbReport& rep);
nlohmann::json to_json(const SlitComparisonReport& rep);
nlohmann::json to_json(const OmegaDecay& rep, const Exhaustion& ex);

void write_json_file(const std::string& path, const nlohmann::json& doc);

// RFC-4180: CRLF row endings, fields quoted when they contain separators.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
void write_csv_file(const std::string& path, const CsvTable& table);

// Structural validation against the subset of JSON Schema the repo ships:
// type, properties, required, items, enum. Returns false and fills `error`
// on the first mismatch.
bool validate_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                     std::string* error = nullptr);

} // namespace dwlab
