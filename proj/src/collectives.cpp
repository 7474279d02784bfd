#include "boostersim/collectives.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace boostersim::coll {

const char* to_string(Algorithm a) {
    return a == Algorithm::Ring ? "ring" : "hierarchical";
}

Algorithm algorithm_from_string(std::string_view name) {
    if (name == "ring") return Algorithm::Ring;
    if (name == "hierarchical") return Algorithm::Hierarchical;
    throw std::invalid_argument("unknown collective algorithm: " + std::string(name));
}

void CollectiveParams::validate() const {
    if (participants == 0) throw std::invalid_argument("collective: participants must be >= 1");
    if (message_bytes < 0.0) throw std::invalid_argument("collective: message_bytes must be >= 0");
    if (alpha_s < 0.0) throw std::invalid_argument("collective: alpha must be >= 0");
    if (!(beta_s_per_byte >= 0.0)) throw std::invalid_argument("collective: beta must be >= 0");
    if (!(compression_factor > 0.0) || compression_factor > 1.0)
        throw std::invalid_argument("collective: compression_factor must be in (0, 1]");
}

Placement Placement::packed(std::uint64_t ranks, std::uint32_t gpus_per_node) {
    if (gpus_per_node == 0) throw std::invalid_argument("placement: gpus_per_node must be >= 1");
    Placement p;
    p.slots.reserve(ranks);
    for (std::uint64_t r = 0; r < ranks; ++r)
        p.slots.push_back({static_cast<std::uint32_t>(r / gpus_per_node),
                           static_cast<std::uint32_t>(r % gpus_per_node)});
    return p;
}

Placement Placement::round_robin_cells(std::uint64_t ranks, std::uint32_t gpus_per_node,
                                       const topo::TopologySpec& topology) {
    if (gpus_per_node == 0) throw std::invalid_argument("placement: gpus_per_node must be >= 1");
    const std::uint32_t cells = topology.cell_count();
    // Node visit order: slot 0 of every cell, then slot 1, and so on; each
    // visited node receives gpus_per_node consecutive ranks.
    std::vector<std::uint32_t> node_order;
    for (std::uint32_t slot = 0; slot < topology.nodes_per_cell; ++slot) {
        for (std::uint32_t c = 0; c < cells; ++c) {
            const std::uint32_t node = c * topology.nodes_per_cell + slot;
            if (node < topology.num_nodes) node_order.push_back(node);
        }
    }
    const std::uint64_t needed_nodes = (ranks + gpus_per_node - 1) / gpus_per_node;
    if (needed_nodes > node_order.size())
        throw std::invalid_argument("placement: not enough nodes in topology");
    Placement p;
    p.slots.reserve(ranks);
    for (std::uint64_t r = 0; r < ranks; ++r)
        p.slots.push_back({node_order[r / gpus_per_node],
                           static_cast<std::uint32_t>(r % gpus_per_node)});
    return p;
}

void Placement::validate(std::uint32_t gpus_per_node, std::uint32_t num_nodes) const {
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const Slot& s : slots) {
        if (s.node >= num_nodes) throw std::invalid_argument("placement: node index out of range");
        if (s.local_device >= gpus_per_node)
            throw std::invalid_argument("placement: local device index out of range");
        if (!seen.insert({s.node, s.local_device}).second)
            throw std::invalid_argument("placement: duplicate (node, device) slot");
    }
}

std::uint32_t Placement::node_count() const {
    std::set<std::uint32_t> nodes;
    for (const Slot& s : slots) nodes.insert(s.node);
    return static_cast<std::uint32_t>(nodes.size());
}

std::uint32_t Placement::max_devices_per_node() const {
    std::map<std::uint32_t, std::uint32_t> counts;
    for (const Slot& s : slots) ++counts[s.node];
    std::uint32_t best = 0;
    for (const auto& [node, n] : counts) best = std::max(best, n);
    return best;
}

std::vector<std::uint32_t> Placement::nodes_in_rank_order() const {
    std::vector<std::uint32_t> order;
    std::set<std::uint32_t> seen;
    for (const Slot& s : slots)
        if (seen.insert(s.node).second) order.push_back(s.node);
    return order;
}

double compressed_bytes(double message_bytes, hw::Precision from, hw::Precision to) {
    if (message_bytes < 0.0) throw std::invalid_argument("compressed_bytes: negative size");
    return message_bytes * static_cast<double>(hw::bytes_per_element(to)) /
           static_cast<double>(hw::bytes_per_element(from));
}

double ring_allreduce_time(const CollectiveParams& params) {
    params.validate();
    const double p = static_cast<double>(params.participants);
    if (params.participants <= 1) return 0.0;
    const double payload = params.message_bytes * params.compression_factor;
    return 2.0 * (p - 1.0) * params.alpha_s +
           2.0 * ((p - 1.0) / p) * payload * params.beta_s_per_byte;
}

double hierarchical_allreduce_time(const CollectiveParams& params, const hw::NodeSpec& node,
                                   const Placement& placement) {
    params.validate();
    if (placement.slots.empty())
        throw std::invalid_argument("hierarchical allreduce: empty placement");
    if (placement.slots.size() != params.participants)
        throw std::invalid_argument("hierarchical allreduce: placement size != participants");
    if (!(node.intra_node_bandwidth_bytes_per_s > 0.0))
        throw std::invalid_argument("hierarchical allreduce: intra-node bandwidth must be > 0");

    const double payload = params.message_bytes * params.compression_factor;
    const double g = static_cast<double>(placement.max_devices_per_node());
    const double n = static_cast<double>(placement.node_count());
    const double beta_local = 1.0 / node.intra_node_bandwidth_bytes_per_s;

    double t = 0.0;
    if (g > 1.0) {  // ring reduce-scatter to the node leader
        t += (g - 1.0) * params.alpha_s + ((g - 1.0) / g) * payload * beta_local;
    }
    if (n > 1.0) {  // ring allreduce across node leaders
        t += 2.0 * (n - 1.0) * params.alpha_s +
             2.0 * ((n - 1.0) / n) * payload * params.beta_s_per_byte;
    }
    if (g > 1.0) {  // intra-node allgather of the result
        t += (g - 1.0) * params.alpha_s + ((g - 1.0) / g) * payload * beta_local;
    }
    return t;
}

ContentionResult analyze_contention(const topo::NetworkGraph& graph, const Placement& placement,
                                    Algorithm algorithm) {
    for (const Placement::Slot& s : placement.slots)
        if (s.node >= graph.num_compute_nodes())
            throw std::invalid_argument("contention: placed node not present in graph");

    // The inter-node messages of one algorithm step. Same-node neighbors
    // exchange over NVLink and put no load on the network.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> messages;
    if (algorithm == Algorithm::Ring) {
        const std::size_t p = placement.slots.size();
        for (std::size_t r = 0; p > 1 && r < p; ++r) {
            const std::uint32_t src = placement.slots[r].node;
            const std::uint32_t dst = placement.slots[(r + 1) % p].node;
            if (src != dst) messages.emplace_back(src, dst);
        }
    } else {
        const std::vector<std::uint32_t> leaders = placement.nodes_in_rank_order();
        const std::size_t n = leaders.size();
        for (std::size_t i = 0; n > 1 && i < n; ++i)
            messages.emplace_back(leaders[i], leaders[(i + 1) % n]);
    }

    // load[2*edge + direction]; direction 0 = a->b traversal.
    std::vector<std::uint32_t> load(2 * graph.edges.size(), 0);
    ContentionResult result;
    for (const auto& [src, dst] : messages) {
        const topo::Path path = route(graph, src, dst);
        for (std::size_t i = 0; i < path.edges.size(); ++i) {
            const std::uint32_t ei = path.edges[i];
            const bool forward = graph.edges[ei].a == path.vertices[i];
            ++load[2 * ei + (forward ? 0 : 1)];
        }
        ++result.routed_messages;
        result.total_hops += path.edges.size();
    }

    double min_effective = std::numeric_limits<double>::infinity();
    for (std::uint32_t ei = 0; ei < graph.edges.size(); ++ei) {
        const double bytes_per_s = graph.edges[ei].bandwidth_bits_per_s / 8.0;
        for (int dir = 0; dir < 2; ++dir) {
            const std::uint32_t l = load[2 * ei + dir];
            if (l == 0) continue;
            result.total_edge_load += l;
            const double effective = bytes_per_s / l;
            if (effective < min_effective) {
                min_effective = effective;
                result.bottleneck_load = l;
            }
        }
    }
    // Conservation: every routed hop is accounted exactly once.
    assert(result.total_edge_load == result.total_hops);
    if (result.total_edge_load != result.total_hops)
        throw std::runtime_error("contention: per-edge load does not match routed traffic");

    if (result.total_edge_load == 0) {
        result.effective_bandwidth_bytes_per_s = std::numeric_limits<double>::infinity();
        result.beta_s_per_byte = 0.0;
    } else {
        result.effective_bandwidth_bytes_per_s = min_effective;
        result.beta_s_per_byte = 1.0 / min_effective;
    }
    return result;
}

double contended_beta(const topo::NetworkGraph& graph, const Placement& placement,
                      Algorithm algorithm) {
    return analyze_contention(graph, placement, algorithm).beta_s_per_byte;
}

}  // namespace boostersim::coll
