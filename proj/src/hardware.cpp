#include "boostersim/hardware.hpp"

#include <stdexcept>

namespace boostersim::hw {

std::size_t bytes_per_element(Precision p) {
    switch (p) {
        case Precision::FP64:
        case Precision::FP64_TC: return 8;
        case Precision::FP32:
        case Precision::TF32_TC: return 4;
        case Precision::FP16:
        case Precision::FP16_TC: return 2;
    }
    throw std::invalid_argument("unknown precision");
}

const char* to_string(Precision p) {
    switch (p) {
        case Precision::FP64: return "fp64";
        case Precision::FP64_TC: return "fp64_tc";
        case Precision::FP32: return "fp32";
        case Precision::TF32_TC: return "tf32_tc";
        case Precision::FP16: return "fp16";
        case Precision::FP16_TC: return "fp16_tc";
    }
    return "?";
}

Precision precision_from_string(std::string_view name) {
    if (name == "fp64") return Precision::FP64;
    if (name == "fp64_tc") return Precision::FP64_TC;
    if (name == "fp32") return Precision::FP32;
    if (name == "tf32_tc") return Precision::TF32_TC;
    if (name == "fp16") return Precision::FP16;
    if (name == "fp16_tc") return Precision::FP16_TC;
    throw std::invalid_argument("unknown precision: " + std::string(name));
}

void GpuSpec::validate() const {
    if (!(tdp_watts > 0.0)) throw std::invalid_argument("gpu: tdp_watts must be > 0");
    for (const auto& [p, flops] : peak_flops)
        if (!(flops >= 0.0))
            throw std::invalid_argument(std::string("gpu: negative peak for ") + to_string(p));
    const auto has = [&](Precision p) { return peak_flops.count(p) != 0; };
    if (has(Precision::FP16_TC) && has(Precision::FP32) &&
        peak_flops.at(Precision::FP16_TC) < peak_flops.at(Precision::FP32))
        throw std::invalid_argument("gpu: fp16_tc peak below fp32 peak");
    if (has(Precision::FP32) && has(Precision::FP64) &&
        peak_flops.at(Precision::FP32) < peak_flops.at(Precision::FP64))
        throw std::invalid_argument("gpu: fp32 peak below fp64 peak");
}

void NodeSpec::validate() const {
    if (gpus_per_node == 0) throw std::invalid_argument("node: gpus_per_node must be >= 1");
    if (nics_per_node == 0) throw std::invalid_argument("node: nics_per_node must be >= 1");
    gpu.validate();
}

void SystemSpec::validate() const {
    node.validate();
    topology.validate();
    if (num_nodes != topology.num_nodes)
        throw std::invalid_argument("system: num_nodes must match topology.num_nodes");
}

double peak_flops(const GpuSpec& gpu, Precision p) {
    const auto it = gpu.peak_flops.find(p);
    if (it == gpu.peak_flops.end())
        throw std::invalid_argument(std::string("no peak entry for precision ") + to_string(p) +
                                    " on " + gpu.name);
    return it->second;
}

double system_peak(const SystemSpec& sys, Precision p) {
    return static_cast<double>(sys.num_nodes) * sys.node.gpus_per_node *
           peak_flops(sys.node.gpu, p);
}

double energy_efficiency(double flops, double power_watts) {
    if (!(power_watts > 0.0))
        throw std::invalid_argument("energy_efficiency: power must be > 0");
    return flops / power_watts;
}

}  // namespace boostersim::hw
