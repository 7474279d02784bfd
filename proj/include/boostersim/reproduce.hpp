#pragma once

#include <string>
#include <vector>

#include "boostersim/config.hpp"

namespace boostersim::repro {

struct CaseResult {
    std::string name;
    bool passed = false;
    std::vector<std::string> lines;  // derivation / check details
};

std::vector<std::string> case_names();

// Executes one validation case against the given configuration:
//   bisection   - DragonFly+ cell-cut bandwidth of the 936-node instance
//   peaks       - system peak and peak energy efficiency derivations
//   bigearthnet - 1-node vs 64-node epoch-time scaling fit
//   convlstm    - 1-GPU vs 16-GPU scaling fit at 90% target efficiency
CaseResult run_case(const std::string& name, const Config& cfg);

std::vector<CaseResult> run_all(const Config& cfg);

}  // namespace boostersim::repro
