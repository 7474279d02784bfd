#include "boostersim/workload.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "boostersim/util.hpp"

namespace boostersim::wl {

void ModelSpec::validate() const {
    if (parameter_count == 0) throw std::invalid_argument("model: parameter_count must be > 0");
    if (!(flops_per_sample > 0.0))
        throw std::invalid_argument("model: flops_per_sample must be > 0");
}

const char* to_string(PlacementPolicy p) {
    return p == PlacementPolicy::Packed ? "packed" : "round_robin_cells";
}

PlacementPolicy placement_policy_from_string(std::string_view name) {
    if (name == "packed") return PlacementPolicy::Packed;
    if (name == "round_robin_cells") return PlacementPolicy::RoundRobinCells;
    throw std::invalid_argument("unknown placement policy: " + std::string(name));
}

void CommConfig::validate() const {
    if (alpha_s < 0.0) throw std::invalid_argument("comm: alpha must be >= 0");
    if (!(compression_factor > 0.0) || compression_factor > 1.0)
        throw std::invalid_argument("comm: compression_factor must be in (0, 1]");
    if (beta_s_per_byte && !(*beta_s_per_byte >= 0.0))
        throw std::invalid_argument("comm: beta must be >= 0 when set");
}

void JobSpec::validate() const {
    model.validate();
    comm.validate();
    if (devices == 0) throw std::invalid_argument("job: devices must be >= 1");
    if (per_device_batch == 0) throw std::invalid_argument("job: per_device_batch must be >= 1");
    if (dataset_samples < devices * per_device_batch)
        throw std::invalid_argument("job: dataset_samples must cover at least one step");
    if (overlap_fraction < 0.0 || overlap_fraction > 1.0)
        throw std::invalid_argument("job: overlap_fraction must be in [0, 1]");
    if (!(compute_efficiency > 0.0) || compute_efficiency > 1.0)
        throw std::invalid_argument("job: compute_efficiency must be in (0, 1]");
    if (io_bandwidth_bytes_per_s < 0.0)
        throw std::invalid_argument("job: io_bandwidth must be >= 0");
    if (io_bandwidth_bytes_per_s > 0.0 && bytes_per_sample < 0.0)
        throw std::invalid_argument("job: bytes_per_sample must be >= 0");
    if (bn_sync_bytes < 0.0) throw std::invalid_argument("job: bn_sync_bytes must be >= 0");
}

namespace {

coll::Placement make_placement(const JobSpec& job, const hw::SystemSpec& sys) {
    switch (job.placement) {
        case PlacementPolicy::Packed:
            return coll::Placement::packed(job.devices, sys.node.gpus_per_node);
        case PlacementPolicy::RoundRobinCells:
            return coll::Placement::round_robin_cells(job.devices, sys.node.gpus_per_node,
                                                      sys.topology);
    }
    throw std::invalid_argument("unknown placement policy");
}

}  // namespace

StepBreakdown step_breakdown(const JobSpec& job, const hw::SystemSpec& sys,
                             const topo::NetworkGraph* graph) {
    job.validate();
    if (job.devices > sys.total_devices())
        throw std::invalid_argument("job: devices exceed system capacity");

    StepBreakdown out;
    const double peak = hw::peak_flops(sys.node.gpu, job.model.compute_precision);
    out.compute_s = static_cast<double>(job.per_device_batch) * job.model.flops_per_sample /
                    (job.compute_efficiency * peak);

    out.message_bytes = static_cast<double>(job.model.parameter_count) *
                        static_cast<double>(hw::bytes_per_element(job.model.gradient_precision));

    const coll::Placement placement = make_placement(job, sys);
    double beta = 0.0;
    if (job.comm.beta_s_per_byte) {
        beta = *job.comm.beta_s_per_byte;
    } else if (job.devices > 1) {
        topo::NetworkGraph local;
        if (graph == nullptr) {
            local = topo::build_dragonfly_plus(sys.topology);
            graph = &local;
        }
        beta = coll::contended_beta(*graph, placement, job.comm.algorithm);
    }
    out.beta_used_s_per_byte = beta;

    coll::CollectiveParams params;
    params.algorithm = job.comm.algorithm;
    params.participants = job.devices;
    params.message_bytes = out.message_bytes;
    params.alpha_s = job.comm.alpha_s;
    params.beta_s_per_byte = beta;
    params.compression_factor = job.comm.compression_factor;
    if (job.devices > 1) {
        out.comm_s = job.comm.algorithm == coll::Algorithm::Ring
                         ? coll::ring_allreduce_time(params)
                         : coll::hierarchical_allreduce_time(params, sys.node, placement);

        // Optional batch-statistics sync: a plain ring over a rank subset,
        // uncompressed, sharing the calibrated alpha/beta.
        if (job.bn_sync_bytes > 0.0) {
            coll::CollectiveParams bn;
            bn.algorithm = coll::Algorithm::Ring;
            bn.participants = job.bn_sync_ranks == 0
                                  ? job.devices
                                  : std::min(job.bn_sync_ranks, job.devices);
            bn.message_bytes = job.bn_sync_bytes;
            bn.alpha_s = job.comm.alpha_s;
            bn.beta_s_per_byte = beta;
            out.bn_sync_s = coll::ring_allreduce_time(bn);
            out.comm_s += out.bn_sync_s;
        }
    }

    if (job.io_bandwidth_bytes_per_s > 0.0)
        out.io_s = static_cast<double>(job.per_device_batch) * job.bytes_per_sample /
                   job.io_bandwidth_bytes_per_s;

    out.exposed_comm_s = std::max(0.0, out.comm_s - job.overlap_fraction * out.compute_s);
    out.total_s = out.compute_s + out.exposed_comm_s + out.io_s;
    return out;
}

double step_time(const JobSpec& job, const hw::SystemSpec& sys, const topo::NetworkGraph* graph) {
    return step_breakdown(job, sys, graph).total_s;
}

std::uint64_t steps_per_epoch(const JobSpec& job) {
    const std::uint64_t global_batch = job.devices * job.per_device_batch;
    return (job.dataset_samples + global_batch - 1) / global_batch;
}

double epoch_time(const JobSpec& job, const hw::SystemSpec& sys, const topo::NetworkGraph* graph) {
    return static_cast<double>(steps_per_epoch(job)) * step_time(job, sys, graph);
}

double time_to_train(const JobSpec& job, const hw::SystemSpec& sys,
                     const topo::NetworkGraph* graph) {
    if (job.epochs == 0) return 0.0;
    return static_cast<double>(job.epochs) * epoch_time(job, sys, graph);
}

double scaling_efficiency(double t_base_s, double p_base, double t_p_s, double p) {
    if (!(t_base_s > 0.0) || !(t_p_s > 0.0) || !(p_base > 0.0) || !(p > 0.0))
        throw std::invalid_argument("scaling_efficiency: inputs must be > 0");
    if (p < p_base) throw std::invalid_argument("scaling_efficiency: p must be >= p_base");
    return (t_base_s * p_base) / (t_p_s * p);
}

ScalingReport sweep(const JobSpec& job_template, const std::vector<std::uint64_t>& device_counts,
                    const hw::SystemSpec& sys, const topo::NetworkGraph* graph) {
    if (device_counts.empty()) throw std::invalid_argument("sweep: empty device count list");

    std::vector<std::uint64_t> counts = device_counts;
    std::sort(counts.begin(), counts.end());
    counts.erase(std::unique(counts.begin(), counts.end()), counts.end());

    topo::NetworkGraph local;
    if (graph == nullptr && !job_template.comm.beta_s_per_byte) {
        local = topo::build_dragonfly_plus(sys.topology);
        graph = &local;
    }

    ScalingReport report;
    report.rows.reserve(counts.size());
    for (std::uint64_t p : counts) {
        JobSpec job = job_template;
        job.devices = p;
        ScalingRow row;
        row.devices = p;
        row.step_time_s = step_time(job, sys, graph);
        row.epoch_time_s = static_cast<double>(steps_per_epoch(job)) * row.step_time_s;
        row.samples_per_s = static_cast<double>(job.dataset_samples) / row.epoch_time_s;
        report.rows.push_back(row);
    }

    const double t_base = report.rows.front().epoch_time_s;
    const double p_base = static_cast<double>(report.rows.front().devices);
    for (ScalingRow& row : report.rows) {
        row.efficiency =
            scaling_efficiency(t_base, p_base, row.epoch_time_s, static_cast<double>(row.devices));
        row.ideal_epoch_time_s = t_base * p_base / static_cast<double>(row.devices);
        row.over_unity = row.efficiency > 1.0;
        if (row.efficiency > 1.05 + 1e-12)
            throw std::runtime_error("sweep: efficiency above 1.05 at p=" +
                                     std::to_string(row.devices));
    }
    return report;
}

std::string to_csv(const ScalingReport& report) {
    std::string out = "p,step_time_s,epoch_time_s,samples_per_s,efficiency,ideal_epoch_time_s\n";
    for (const ScalingRow& r : report.rows) {
        out += std::to_string(r.devices) + "," + util::fmt_g(r.step_time_s) + "," +
               util::fmt_g(r.epoch_time_s) + "," + util::fmt_g(r.samples_per_s) + "," +
               util::fmt_g(r.efficiency) + "," + util::fmt_g(r.ideal_epoch_time_s) + "\n";
    }
    return out;
}

std::string to_text(const ScalingReport& report) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof(line), "%8s %14s %14s %14s %12s %16s\n", "p", "step_time_s",
                  "epoch_time_s", "samples_per_s", "efficiency", "ideal_epoch_s");
    out += line;
    for (const ScalingRow& r : report.rows) {
        std::snprintf(line, sizeof(line), "%8llu %14.6g %14.6g %14.6g %11.4f%s %16.6g\n",
                      static_cast<unsigned long long>(r.devices), r.step_time_s, r.epoch_time_s,
                      r.samples_per_s, r.efficiency, r.over_unity ? "!" : " ",
                      r.ideal_epoch_time_s);
        out += line;
    }
    return out;
}

}  // namespace boostersim::wl
