#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace ismi::harness {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct Column {
    std::string name;
    std::string description;
};

/// Plot-ready table; cells are preformatted so reruns are byte-identical.
struct Table {
    std::vector<Column> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
};

/// Shortest round-trip text for a double; infinities as "inf".
std::string format_number(double v);

struct Outcome {
    Table table;
    nlohmann::json metadata = nlohmann::json::object();
    std::vector<std::string> summary;  // one line per row
    bool valid = true;                 // false when a bound check failed
};

/// Experiments known to run_experiment.
const std::vector<std::string>& experiment_names();

/// Parameters with every default filled in; unknown keys are rejected.
nlohmann::json normalize_parameters(const std::string& experiment, const nlohmann::json& params);

/// Runs `experiment` with normalized parameters. `threads` only affects speed.
Outcome run_experiment(const std::string& experiment, const nlohmann::json& params, int threads);

struct WrittenRun {
    std::filesystem::path csv;
    std::filesystem::path manifest;
    Outcome outcome;
};

/// Runs, then writes <out_dir>/<experiment>.csv and <experiment>.manifest.json.
WrittenRun run_and_write(const std::string& experiment, const nlohmann::json& params, int threads,
                         const std::filesystem::path& out_dir);

/// Re-executes the run recorded in a manifest, writing into out_dir.
WrittenRun replay(const std::filesystem::path& manifest, int threads, const std::filesystem::path& out_dir);

/// Output directory from $ISMI_OUT_DIR, else "out".
std::filesystem::path default_out_dir();

}  // namespace ismi::harness
