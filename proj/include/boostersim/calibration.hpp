#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "boostersim/workload.hpp"

namespace boostersim::calib {

enum class FreeParam { Alpha, Beta, Eta, Overlap };

const char* to_string(FreeParam p);
FreeParam free_param_from_string(std::string_view name);

struct Measurement {
    std::uint64_t devices = 0;
    double time_s = 0.0;
    bool is_step_time = false;  // default: epoch time
};

struct ParamRange {
    double lo = 0.0;
    double hi = 0.0;
    bool log_scale = true;
};

ParamRange default_range(FreeParam p);

struct FitOptions {
    std::vector<FreeParam> free;           // parameters to search over
    std::map<FreeParam, ParamRange> bounds;  // missing entries use default_range
    std::uint32_t grid_points = 7;
    std::uint32_t refinement_rounds = 30;
};

struct PointReport {
    std::uint64_t devices = 0;
    double observed_s = 0.0;
    double predicted_s = 0.0;
    double relative_error = 0.0;
};

struct FitResult {
    double alpha_s = 0.0;
    double beta_s_per_byte = 0.0;
    double eta = 0.0;
    double overlap = 0.0;
    double residual = 0.0;  // RMS relative error over the measurements
    std::vector<FreeParam> fitted_params;
    std::vector<PointReport> points;
};

// Minimizes the sum of squared relative errors between predicted and observed
// times over a log/linear grid that is iteratively refined around the
// incumbent. Ties go to the lexicographically smallest parameter vector
// (Alpha, Beta, Eta, Overlap order), so the result does not depend on
// evaluation order. Throws when measurements are fewer than free parameters
// or a bound is invalid.
FitResult fit(const std::vector<Measurement>& measurements, const wl::JobSpec& job_template,
              const hw::SystemSpec& sys, const FitOptions& options,
              const topo::NetworkGraph* graph = nullptr);

// Fitted parameters as a JSON fragment mergeable into a workload's comm/
// efficiency settings.
std::string to_json(const FitResult& result);

}  // namespace boostersim::calib
