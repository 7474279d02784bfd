#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "boostersim/calibration.hpp"
#include "boostersim/hardware.hpp"
#include "boostersim/workload.hpp"

namespace boostersim {

// Raised for malformed or inconsistent configuration; carries a field path or
// line diagnostic. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct OutputOptions {
    std::string format = "csv";  // csv | json | text
    bool quiet = false;
};

// Top-level configuration document. Hardware and topology accept either a
// named preset or explicit fields; workloads and measurement sets are named
// and cross-checked at load time.
struct Config {
    hw::SystemSpec system;
    std::map<std::string, wl::JobSpec> workloads;
    std::map<std::string, std::vector<calib::Measurement>> measurement_sets;
    OutputOptions output;

    const wl::JobSpec& workload(const std::string& name) const;
    const std::vector<calib::Measurement>& measurement_set(const std::string& name) const;

    void validate() const;

    // Built-in configuration: the JUWELS Booster presets plus the shipped
    // example workloads and their published measurement points.
    static Config builtin_default();

    static Config from_json_text(const std::string& text, const std::string& source_name);
    static Config load(const std::string& path);

    std::string to_json_text() const;
};

// Measurements CSV: header "p,time_s", one row per point.
std::vector<calib::Measurement> measurements_from_csv(const std::string& text);

}  // namespace boostersim
