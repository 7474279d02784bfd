#include "boostersim/presets.hpp"

namespace boostersim::presets {

hw::GpuSpec a100_40gb() {
    hw::GpuSpec gpu;
    gpu.name = "A100-SXM4-40GB";
    gpu.peak_flops = {
        {hw::Precision::FP64, 9.7e12},
        {hw::Precision::FP64_TC, 19.5e12},
        {hw::Precision::FP32, 19.5e12},
        {hw::Precision::TF32_TC, 156e12},
        {hw::Precision::FP16, 78e12},
        {hw::Precision::FP16_TC, 312e12},
    };
    gpu.tdp_watts = 400.0;
    gpu.memory_bytes = 40e9;
    return gpu;
}

hw::NodeSpec juwels_booster_node() {
    hw::NodeSpec node;
    node.gpus_per_node = 4;
    node.gpu = a100_40gb();
    node.nics_per_node = 4;
    node.nic_bandwidth_bits_per_s = 200e9;
    node.intra_node_bandwidth_bytes_per_s = 300e9;  // NVLink3, per direction
    node.host_memory_bytes = 512e9;
    return node;
}

topo::TopologySpec juwels_booster_topology() {
    topo::TopologySpec t;
    t.num_nodes = 936;
    t.nodes_per_cell = 48;
    t.intercell_links_per_pair = 10;
    t.link_bandwidth_bits_per_s = 200e9;
    t.intra_cell_levels = 2;
    t.nics_per_node = 4;
    t.nic_bandwidth_bits_per_s = 200e9;
    t.intra_node_bandwidth_bytes_per_s = 300e9;
    t.switch_hop_latency_s = 150e-9;
    t.nic_latency_s = 1e-6;
    return t;
}

hw::SystemSpec juwels_booster() {
    hw::SystemSpec sys;
    sys.node = juwels_booster_node();
    sys.num_nodes = 936;
    sys.topology = juwels_booster_topology();
    return sys;
}

}  // namespace boostersim::presets
