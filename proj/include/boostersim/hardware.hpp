#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "boostersim/topology.hpp"

namespace boostersim::hw {

enum class Precision { FP64, FP64_TC, FP32, TF32_TC, FP16, FP16_TC };

std::size_t bytes_per_element(Precision p);
const char* to_string(Precision p);
Precision precision_from_string(std::string_view name);  // throws on unknown name

struct GpuSpec {
    std::string name;
    std::map<Precision, double> peak_flops;  // flop/s per precision
    double tdp_watts = 0.0;
    double memory_bytes = 0.0;

    void validate() const;
};

struct NodeSpec {
    std::uint32_t gpus_per_node = 1;
    GpuSpec gpu;
    std::uint32_t nics_per_node = 1;
    double nic_bandwidth_bits_per_s = 0.0;      // per direction
    double intra_node_bandwidth_bytes_per_s = 0.0;
    double host_memory_bytes = 0.0;

    void validate() const;
};

struct SystemSpec {
    NodeSpec node;
    std::uint32_t num_nodes = 1;
    topo::TopologySpec topology;

    std::uint64_t total_devices() const {
        return static_cast<std::uint64_t>(num_nodes) * node.gpus_per_node;
    }
    void validate() const;  // requires num_nodes == topology.num_nodes
};

// Table lookup; throws std::invalid_argument when the precision is absent.
double peak_flops(const GpuSpec& gpu, Precision p);

// num_nodes * gpus_per_node * peak_flops(gpu, p)
double system_peak(const SystemSpec& sys, Precision p);

// flops / power; throws on power <= 0.
double energy_efficiency(double flops, double power_watts);

}  // namespace boostersim::hw
