#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace boostersim::topo {

// Parameters of a DragonFly+ instance: nodes grouped into cells, each cell
// internally a two-level non-blocking fat-tree, every cell pair joined by a
// fixed number of spine-to-spine links.
//
// Bandwidths are per direction. Latencies in seconds.
struct TopologySpec {
    std::uint32_t num_nodes = 1;
    std::uint32_t nodes_per_cell = 48;
    std::uint32_t intercell_links_per_pair = 10;
    double link_bandwidth_bits_per_s = 200e9;
    std::uint32_t intra_cell_levels = 2;  // switch tiers inside a cell
    std::uint32_t nics_per_node = 4;
    double nic_bandwidth_bits_per_s = 200e9;
    double intra_node_bandwidth_bytes_per_s = 300e9;  // GPU-to-GPU inside a node
    double switch_hop_latency_s = 150e-9;
    double nic_latency_s = 1e-6;
    // Total ports per leaf switch, split evenly between node-facing and
    // spine-facing sides. 0 selects the default of nodes_per_cell ports.
    std::uint32_t switch_radix = 0;

    std::uint32_t cell_count() const;  // ceil(num_nodes / nodes_per_cell)
    std::uint32_t effective_radix() const;

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

enum class VertexKind { ComputeNode, LeafSwitch, SpineSwitch };

const char* to_string(VertexKind kind);

struct Vertex {
    std::uint32_t id = 0;
    VertexKind kind = VertexKind::ComputeNode;
    std::uint32_t cell = 0;
};

// Undirected full-duplex link; bandwidth applies to each direction.
struct Edge {
    std::uint32_t a = 0;  // endpoint vertex ids, a < b
    std::uint32_t b = 0;
    double bandwidth_bits_per_s = 0.0;
    double latency_s = 0.0;
};

// Immutable after construction; safe to share across concurrent readers.
struct NetworkGraph {
    TopologySpec spec;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<std::vector<std::uint32_t>> adjacency;  // vertex -> incident edge indices

    std::uint32_t num_compute_nodes() const { return spec.num_nodes; }
    std::uint32_t cell_of(std::uint32_t vertex_id) const;
    std::uint32_t other_endpoint(std::uint32_t edge_index, std::uint32_t vertex_id) const;
    bool is_intercell_edge(std::uint32_t edge_index) const;
    std::size_t intercell_edge_count() const;
    bool is_connected() const;
};

struct Path {
    std::vector<std::uint32_t> edges;     // edge indices into the graph
    std::vector<std::uint32_t> vertices;  // visited vertex ids; edges.size() + 1 entries
    double bottleneck_bandwidth_bits_per_s = 0.0;
    double latency_s = 0.0;  // end-to-end, including both endpoint NICs

    std::uint32_t hop_count() const { return static_cast<std::uint32_t>(edges.size()); }
};

// Constructs the graph for `spec`. Compute nodes occupy vertex ids
// [0, num_nodes); switches follow, grouped per cell (leaves, then spines).
// The last cell may be partially populated; the switch fabric of every cell
// is identical so inter-cell wiring does not depend on occupancy.
NetworkGraph build_dragonfly_plus(const TopologySpec& spec);

// Minimum-hop path between two compute nodes. Ties are broken by the lowest
// vertex id at each branching point (and lowest edge index between parallel
// links), so results are deterministic.
Path route(const NetworkGraph& graph, std::uint32_t src, std::uint32_t dst);

// Aggregate bandwidth in bits/s across a balanced bipartition of the cells,
// both directions of every full-duplex link counted. Odd cell counts use a
// floor/ceil split. Single-cell instances have no inter-cell cut: returns 0.
double bisection_bandwidth(const NetworkGraph& graph);

// Sum of member-edge latencies plus both endpoint NIC latencies.
double path_latency(const NetworkGraph& graph, const Path& path);

// Edge list as CSV: src_id,dst_id,kind,bandwidth_bits_per_s,latency_s
std::string to_edge_csv(const NetworkGraph& graph);

// Graphviz DOT rendering (undirected).
std::string to_dot(const NetworkGraph& graph);

}  // namespace boostersim::topo
