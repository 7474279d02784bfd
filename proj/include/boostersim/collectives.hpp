#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "boostersim/hardware.hpp"
#include "boostersim/topology.hpp"

namespace boostersim::coll {

enum class Algorithm { Ring, Hierarchical };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);

// One allreduce invocation under the alpha-beta cost model.
struct CollectiveParams {
    Algorithm algorithm = Algorithm::Ring;
    std::uint64_t participants = 1;   // p
    double message_bytes = 0.0;       // M, before compression
    double alpha_s = 0.0;             // per-step latency
    double beta_s_per_byte = 0.0;     // inverse effective bandwidth
    double compression_factor = 1.0;  // c in (0, 1]

    void validate() const;
};

// rank -> (node index, local device index)
struct Placement {
    struct Slot {
        std::uint32_t node = 0;
        std::uint32_t local_device = 0;
    };
    std::vector<Slot> slots;

    static Placement packed(std::uint64_t ranks, std::uint32_t gpus_per_node);
    // Spreads nodes across cells round-robin; each selected node is filled
    // with gpus_per_node consecutive ranks before moving on.
    static Placement round_robin_cells(std::uint64_t ranks, std::uint32_t gpus_per_node,
                                       const topo::TopologySpec& topology);

    void validate(std::uint32_t gpus_per_node, std::uint32_t num_nodes) const;
    std::uint64_t rank_count() const { return slots.size(); }
    std::uint32_t node_count() const;
    std::uint32_t max_devices_per_node() const;
    // Distinct nodes in order of first appearance by rank.
    std::vector<std::uint32_t> nodes_in_rank_order() const;
};

// Message size after casting elements from one precision to another.
double compressed_bytes(double message_bytes, hw::Precision from, hw::Precision to);

// Flat ring allreduce: p = 1 -> 0, else
//   2 (p-1) alpha + 2 ((p-1)/p) (M c) beta.
// Compression scales the bandwidth term only; latency is size-independent.
double ring_allreduce_time(const CollectiveParams& params);

// Three-phase hierarchical allreduce: ring reduce-scatter over the g local
// devices at intra-node bandwidth, ring allreduce across the n node leaders
// at `beta_s_per_byte`, then an intra-node allgather. With g = 1 this reduces
// exactly to ring_allreduce_time over the node count.
double hierarchical_allreduce_time(const CollectiveParams& params, const hw::NodeSpec& node,
                                   const Placement& placement);

// Per-edge load accounting for the algorithm's logical communication pattern
// on a concrete topology. Loads are kept per edge direction.
struct ContentionResult {
    double beta_s_per_byte = 0.0;                  // 1 / effective bandwidth
    double effective_bandwidth_bytes_per_s = 0.0;  // min over edges of bw / load
    std::uint32_t bottleneck_load = 0;             // message multiplicity on the bottleneck
    std::uint64_t routed_messages = 0;
    std::uint64_t total_hops = 0;        // sum over messages of path hop count
    std::uint64_t total_edge_load = 0;   // sum of all per-edge-direction loads
};

// Routes every inter-node message of the pattern (rank-order ring for Ring,
// node-leader ring for Hierarchical) and divides each edge's bandwidth by its
// load. A placement that crosses no network edge yields beta 0.
ContentionResult analyze_contention(const topo::NetworkGraph& graph, const Placement& placement,
                                    Algorithm algorithm);

double contended_beta(const topo::NetworkGraph& graph, const Placement& placement,
                      Algorithm algorithm);

}  // namespace boostersim::coll
