#pragma once

#include "boostersim/hardware.hpp"
#include "boostersim/topology.hpp"

namespace boostersim::presets {

// NVIDIA A100 (40 GB, SXM): per-precision peaks and 400 W TDP.
hw::GpuSpec a100_40gb();

// One JUWELS Booster compute node: 4x A100, 4x HDR200 NICs, 512 GB host RAM.
hw::NodeSpec juwels_booster_node();

// 936 nodes in cells of 48, 10 links between every cell pair, 200 Gbit/s per
// link direction.
topo::TopologySpec juwels_booster_topology();

hw::SystemSpec juwels_booster();

}  // namespace boostersim::presets
