#include "boostersim/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include "boostersim/util.hpp"

namespace boostersim::topo {

namespace {

constexpr std::uint32_t kNoDistance = std::numeric_limits<std::uint32_t>::max();

// Switch counts per cell derived from the radix: a leaf spends half its ports
// on nodes and half on spines, and each leaf is wired once to every spine.
struct CellFabric {
    std::uint32_t leaves = 0;
    std::uint32_t spines = 0;
    std::uint32_t node_ports_per_leaf = 0;
};

CellFabric cell_fabric(const TopologySpec& spec) {
    const std::uint32_t radix = spec.effective_radix();
    CellFabric f;
    f.node_ports_per_leaf = std::max<std::uint32_t>(1, radix / 2);
    const std::uint32_t node_ports = spec.nodes_per_cell * spec.nics_per_node;
    f.leaves = (node_ports + f.node_ports_per_leaf - 1) / f.node_ports_per_leaf;
    f.spines = std::max<std::uint32_t>(1, radix - f.node_ports_per_leaf);
    return f;
}

}  // namespace

std::uint32_t TopologySpec::cell_count() const {
    if (nodes_per_cell == 0) return 0;
    return (num_nodes + nodes_per_cell - 1) / nodes_per_cell;
}

std::uint32_t TopologySpec::effective_radix() const {
    return std::max<std::uint32_t>(2, switch_radix != 0 ? switch_radix : nodes_per_cell);
}

void TopologySpec::validate() const {
    if (num_nodes == 0) throw std::invalid_argument("topology: num_nodes must be >= 1");
    if (nodes_per_cell == 0) throw std::invalid_argument("topology: nodes_per_cell must be >= 1");
    if (intercell_links_per_pair == 0)
        throw std::invalid_argument("topology: intercell_links_per_pair must be >= 1");
    if (nics_per_node == 0) throw std::invalid_argument("topology: nics_per_node must be >= 1");
    if (intra_cell_levels != 2)
        throw std::invalid_argument("topology: only two-level cells are supported");
    if (!(link_bandwidth_bits_per_s > 0.0))
        throw std::invalid_argument("topology: link_bandwidth_bits_per_s must be > 0");
    if (!(nic_bandwidth_bits_per_s > 0.0))
        throw std::invalid_argument("topology: nic_bandwidth_bits_per_s must be > 0");
    if (!(intra_node_bandwidth_bytes_per_s > 0.0))
        throw std::invalid_argument("topology: intra_node_bandwidth_bytes_per_s must be > 0");
    if (switch_hop_latency_s < 0.0 || nic_latency_s < 0.0)
        throw std::invalid_argument("topology: latencies must be >= 0");
    const std::uint64_t capacity =
        static_cast<std::uint64_t>(cell_count()) * nodes_per_cell;
    if (num_nodes > capacity)
        throw std::invalid_argument("topology: num_nodes exceeds cell capacity");
}

const char* to_string(VertexKind kind) {
    switch (kind) {
        case VertexKind::ComputeNode: return "compute-node";
        case VertexKind::LeafSwitch: return "leaf-switch";
        case VertexKind::SpineSwitch: return "spine-switch";
    }
    return "?";
}

std::uint32_t NetworkGraph::cell_of(std::uint32_t vertex_id) const {
    return vertices.at(vertex_id).cell;
}

std::uint32_t NetworkGraph::other_endpoint(std::uint32_t edge_index, std::uint32_t vertex_id) const {
    const Edge& e = edges.at(edge_index);
    return e.a == vertex_id ? e.b : e.a;
}

bool NetworkGraph::is_intercell_edge(std::uint32_t edge_index) const {
    const Edge& e = edges.at(edge_index);
    return vertices[e.a].cell != vertices[e.b].cell;
}

std::size_t NetworkGraph::intercell_edge_count() const {
    std::size_t n = 0;
    for (std::uint32_t i = 0; i < edges.size(); ++i)
        if (is_intercell_edge(i)) ++n;
    return n;
}

bool NetworkGraph::is_connected() const {
    if (vertices.empty()) return true;
    std::vector<char> seen(vertices.size(), 0);
    std::deque<std::uint32_t> queue{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!queue.empty()) {
        const std::uint32_t v = queue.front();
        queue.pop_front();
        for (std::uint32_t ei : adjacency[v]) {
            const std::uint32_t w = other_endpoint(ei, v);
            if (!seen[w]) {
                seen[w] = 1;
                ++visited;
                queue.push_back(w);
            }
        }
    }
    return visited == vertices.size();
}

NetworkGraph build_dragonfly_plus(const TopologySpec& spec) {
    spec.validate();

    NetworkGraph g;
    g.spec = spec;

    const std::uint32_t cells = spec.cell_count();
    const CellFabric fabric = cell_fabric(spec);
    const std::uint32_t switches_per_cell = fabric.leaves + fabric.spines;

    g.vertices.reserve(spec.num_nodes + static_cast<std::size_t>(cells) * switches_per_cell);
    for (std::uint32_t n = 0; n < spec.num_nodes; ++n)
        g.vertices.push_back({n, VertexKind::ComputeNode, n / spec.nodes_per_cell});

    const std::uint32_t switch_base = spec.num_nodes;
    auto leaf_vertex = [&](std::uint32_t cell, std::uint32_t leaf) {
        return switch_base + cell * switches_per_cell + leaf;
    };
    auto spine_vertex = [&](std::uint32_t cell, std::uint32_t spine) {
        return switch_base + cell * switches_per_cell + fabric.leaves + spine;
    };
    for (std::uint32_t c = 0; c < cells; ++c) {
        for (std::uint32_t l = 0; l < fabric.leaves; ++l)
            g.vertices.push_back({leaf_vertex(c, l), VertexKind::LeafSwitch, c});
        for (std::uint32_t s = 0; s < fabric.spines; ++s)
            g.vertices.push_back({spine_vertex(c, s), VertexKind::SpineSwitch, c});
    }

    auto add_edge = [&](std::uint32_t a, std::uint32_t b, double bandwidth) {
        if (a > b) std::swap(a, b);
        g.edges.push_back({a, b, bandwidth, spec.switch_hop_latency_s});
    };

    // NIC ports are assigned to leaf down-ports sequentially, so all NICs of
    // one node usually land on the same leaf.
    for (std::uint32_t c = 0; c < cells; ++c) {
        const std::uint32_t first_node = c * spec.nodes_per_cell;
        const std::uint32_t nodes_in_cell =
            std::min(spec.nodes_per_cell, spec.num_nodes - first_node);
        for (std::uint32_t local = 0; local < nodes_in_cell; ++local) {
            for (std::uint32_t nic = 0; nic < spec.nics_per_node; ++nic) {
                const std::uint32_t port = local * spec.nics_per_node + nic;
                const std::uint32_t leaf = port / fabric.node_ports_per_leaf;
                add_edge(first_node + local, leaf_vertex(c, leaf),
                         spec.nic_bandwidth_bits_per_s);
            }
        }
        for (std::uint32_t l = 0; l < fabric.leaves; ++l)
            for (std::uint32_t s = 0; s < fabric.spines; ++s)
                add_edge(leaf_vertex(c, l), spine_vertex(c, s), spec.link_bandwidth_bits_per_s);
    }

    // Every unordered cell pair gets exactly intercell_links_per_pair links,
    // spread round-robin over the spines.
    for (std::uint32_t a = 0; a < cells; ++a) {
        for (std::uint32_t b = a + 1; b < cells; ++b) {
            for (std::uint32_t k = 0; k < spec.intercell_links_per_pair; ++k) {
                const std::uint32_t s = k % fabric.spines;
                add_edge(spine_vertex(a, s), spine_vertex(b, s), spec.link_bandwidth_bits_per_s);
            }
        }
    }

    g.adjacency.assign(g.vertices.size(), {});
    for (std::uint32_t ei = 0; ei < g.edges.size(); ++ei) {
        g.adjacency[g.edges[ei].a].push_back(ei);
        g.adjacency[g.edges[ei].b].push_back(ei);
    }
    return g;
}

Path route(const NetworkGraph& graph, std::uint32_t src, std::uint32_t dst) {
    if (src >= graph.vertices.size() || dst >= graph.vertices.size())
        throw std::invalid_argument("route: unknown vertex id");
    if (graph.vertices[src].kind != VertexKind::ComputeNode ||
        graph.vertices[dst].kind != VertexKind::ComputeNode)
        throw std::invalid_argument("route: endpoints must be compute nodes");
    if (src == dst) throw std::invalid_argument("route: src and dst must differ");

    // Distances to dst, then a greedy descent from src choosing the lowest
    // neighbor id (and lowest edge index) among shortest continuations.
    std::vector<std::uint32_t> dist(graph.vertices.size(), kNoDistance);
    std::deque<std::uint32_t> queue{dst};
    dist[dst] = 0;
    while (!queue.empty()) {
        const std::uint32_t v = queue.front();
        queue.pop_front();
        for (std::uint32_t ei : graph.adjacency[v]) {
            const std::uint32_t w = graph.other_endpoint(ei, v);
            if (dist[w] == kNoDistance) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    if (dist[src] == kNoDistance) throw std::runtime_error("route: graph is disconnected");

    Path path;
    path.vertices.push_back(src);
    std::uint32_t at = src;
    double bottleneck = std::numeric_limits<double>::infinity();
    while (at != dst) {
        std::uint32_t best_vertex = kNoDistance;
        std::uint32_t best_edge = kNoDistance;
        for (std::uint32_t ei : graph.adjacency[at]) {
            const std::uint32_t w = graph.other_endpoint(ei, at);
            if (dist[w] + 1 != dist[at]) continue;
            if (w < best_vertex || (w == best_vertex && ei < best_edge)) {
                best_vertex = w;
                best_edge = ei;
            }
        }
        path.edges.push_back(best_edge);
        path.vertices.push_back(best_vertex);
        bottleneck = std::min(bottleneck, graph.edges[best_edge].bandwidth_bits_per_s);
        at = best_vertex;
    }
    path.bottleneck_bandwidth_bits_per_s = bottleneck;
    path.latency_s = path_latency(graph, path);
    return path;
}

double bisection_bandwidth(const NetworkGraph& graph) {
    const std::uint32_t cells = graph.spec.cell_count();
    if (cells < 2) return 0.0;
    const std::uint32_t half = cells / 2;
    const std::uint32_t rest = cells - half;
    return static_cast<double>(half) * rest * graph.spec.intercell_links_per_pair *
           graph.spec.link_bandwidth_bits_per_s * 2.0;
}

double path_latency(const NetworkGraph& graph, const Path& path) {
    if (path.edges.empty()) throw std::invalid_argument("path_latency: empty path");
    double total = 2.0 * graph.spec.nic_latency_s;
    for (std::uint32_t ei : path.edges) total += graph.edges.at(ei).latency_s;
    return total;
}

std::string to_edge_csv(const NetworkGraph& graph) {
    std::string out = "src_id,dst_id,kind,bandwidth_bits_per_s,latency_s\n";
    for (std::uint32_t ei = 0; ei < graph.edges.size(); ++ei) {
        const Edge& e = graph.edges[ei];
        const VertexKind ka = graph.vertices[e.a].kind;
        const VertexKind kb = graph.vertices[e.b].kind;
        const char* kind = "leaf-spine";
        if (ka == VertexKind::ComputeNode || kb == VertexKind::ComputeNode)
            kind = "nic";
        else if (graph.is_intercell_edge(ei))
            kind = "inter-cell";
        out += std::to_string(e.a) + "," + std::to_string(e.b) + "," + kind + "," +
               util::fmt_g(e.bandwidth_bits_per_s) + "," + util::fmt_g(e.latency_s) + "\n";
    }
    return out;
}

std::string to_dot(const NetworkGraph& graph) {
    std::string out = "graph dragonfly_plus {\n";
    for (const Vertex& v : graph.vertices) {
        const char* shape = "ellipse";
        if (v.kind == VertexKind::ComputeNode) shape = "box";
        if (v.kind == VertexKind::SpineSwitch) shape = "diamond";
        out += "  v" + std::to_string(v.id) + " [shape=" + shape + ",label=\"" +
               to_string(v.kind) + " " + std::to_string(v.id) + "\\ncell " +
               std::to_string(v.cell) + "\"];\n";
    }
    for (const Edge& e : graph.edges)
        out += "  v" + std::to_string(e.a) + " -- v" + std::to_string(e.b) + ";\n";
    out += "}\n";
    return out;
}

}  // namespace boostersim::topo
