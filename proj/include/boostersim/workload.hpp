#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boostersim/collectives.hpp"
#include "boostersim/hardware.hpp"

namespace boostersim::wl {

struct ModelSpec {
    std::string name;
    std::uint64_t parameter_count = 0;
    double flops_per_sample = 0.0;  // forward + backward
    hw::Precision gradient_precision = hw::Precision::FP32;
    hw::Precision compute_precision = hw::Precision::FP32;

    void validate() const;
};

enum class PlacementPolicy { Packed, RoundRobinCells };

const char* to_string(PlacementPolicy p);
PlacementPolicy placement_policy_from_string(std::string_view name);

// Communication settings for the gradient allreduce. When beta_s_per_byte is
// unset it is derived from link contention of the placement on the topology.
struct CommConfig {
    coll::Algorithm algorithm = coll::Algorithm::Ring;
    double alpha_s = 1e-5;
    double compression_factor = 1.0;
    std::optional<double> beta_s_per_byte;

    void validate() const;
};

// One data-parallel training job: p devices each process b samples per step,
// followed by a gradient allreduce of the full parameter set and, when
// enabled, a batch-statistics allreduce over a subset of the ranks.
struct JobSpec {
    ModelSpec model;
    std::uint64_t devices = 1;           // p
    std::uint64_t per_device_batch = 1;  // b
    std::uint64_t dataset_samples = 0;   // N
    std::uint32_t epochs = 1;
    PlacementPolicy placement = PlacementPolicy::Packed;
    double overlap_fraction = 0.0;          // o in [0, 1]
    double io_bandwidth_bytes_per_s = 400e9;  // gateway default; 0 disables the I/O term
    double bytes_per_sample = 0.0;
    double compute_efficiency = 1.0;        // eta in (0, 1], achieved fraction of peak
    double bn_sync_bytes = 0.0;             // batch-norm stats per step; 0 = no sync
    std::uint64_t bn_sync_ranks = 0;        // subset size; 0 = every rank
    CommConfig comm;

    void validate() const;
};

struct StepBreakdown {
    double compute_s = 0.0;
    double comm_s = 0.0;          // gradient allreduce plus any batch-norm sync
    double bn_sync_s = 0.0;       // contribution of the batch-norm sync alone
    double exposed_comm_s = 0.0;  // max(0, comm - overlap * compute)
    double io_s = 0.0;
    double total_s = 0.0;
    double beta_used_s_per_byte = 0.0;
    double message_bytes = 0.0;  // gradient bytes before compression
};

// T_step = T_compute + max(0, T_comm - o * T_compute) + T_io. The optional
// graph avoids rebuilding the topology when beta must be derived from
// contention; pass nullptr to build it on demand.
StepBreakdown step_breakdown(const JobSpec& job, const hw::SystemSpec& sys,
                             const topo::NetworkGraph* graph = nullptr);
double step_time(const JobSpec& job, const hw::SystemSpec& sys,
                 const topo::NetworkGraph* graph = nullptr);

std::uint64_t steps_per_epoch(const JobSpec& job);  // ceil(N / (p b))

double epoch_time(const JobSpec& job, const hw::SystemSpec& sys,
                  const topo::NetworkGraph* graph = nullptr);

double time_to_train(const JobSpec& job, const hw::SystemSpec& sys,
                     const topo::NetworkGraph* graph = nullptr);

// Strong scaling: (t_base * p_base) / (t_p * p). Throws on non-positive
// inputs or p < p_base.
double scaling_efficiency(double t_base_s, double p_base, double t_p_s, double p);

struct ScalingRow {
    std::uint64_t devices = 0;
    double step_time_s = 0.0;
    double epoch_time_s = 0.0;
    double samples_per_s = 0.0;
    double efficiency = 0.0;
    double ideal_epoch_time_s = 0.0;
    bool over_unity = false;  // efficiency above 1.0 (calibration overshoot), flagged
};

struct ScalingReport {
    std::vector<ScalingRow> rows;  // ordered by ascending device count
};

// Evaluates the job at each device count; the smallest count is the
// efficiency baseline. Rows are ordered by device count regardless of
// evaluation order. Efficiencies above 1.05 indicate a broken model and
// throw; values in (1.0, 1.05] are flagged.
ScalingReport sweep(const JobSpec& job_template, const std::vector<std::uint64_t>& device_counts,
                    const hw::SystemSpec& sys, const topo::NetworkGraph* graph = nullptr);

// CSV columns: p,step_time_s,epoch_time_s,samples_per_s,efficiency,ideal_epoch_time_s
std::string to_csv(const ScalingReport& report);
std::string to_text(const ScalingReport& report);

}  // namespace boostersim::wl
