#pragma once

#include "coop_lms/linalg.hpp"
#include "coop_lms/rng.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coop_lms::graph {

using NodeId = std::size_t;
using Edge = std::pair<NodeId, NodeId>;

/// Simple undirected graph on nodes 0..K-1. Edges are stored once, as (u, v)
/// with u < v, sorted. Neighbor lists are sorted ascending.
class Graph {
public:
    /// Throws ConfigError on self-loops, duplicate edges, out-of-range
    /// endpoints or K == 0.
    Graph(std::size_t node_count, std::vector<Edge> edges);

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<NodeId>& neighbors(NodeId k) const { return adjacency_.at(k); }
    std::size_t degree(NodeId k) const { return adjacency_.at(k).size(); }
    std::size_t max_degree() const noexcept;
    bool has_edge(NodeId u, NodeId v) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
    }

private:
    std::size_t node_count_;
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> adjacency_;
};

enum class NamedGraph { karate, krackhardt_kite, chvatal, pappus, tutte };

/// Parses "karate", "krackhardt_kite", "chvatal", "pappus", "tutte".
NamedGraph parse_named_graph(std::string_view name);
std::string_view to_string(NamedGraph name);
std::vector<NamedGraph> all_named_graphs();

Graph named_graph(NamedGraph name);
Graph named_graph(std::string_view name);

/// Maximum number of whole-graph resamples before gen_er gives up.
inline constexpr int kErMaxResamples = 1000;

struct ErResult {
    Graph graph;
    int resamples;  // rejected draws before the accepted one
};

/// G(K, p): every pair independently with probability p, resampled until
/// connected. Throws GenerationError after kErMaxResamples failed draws.
ErResult gen_er(std::size_t node_count, double p, Rng& rng);

/// Preferential attachment. The seed component is the complete graph on
/// m_attach + 1 nodes, so |E| = m(m+1)/2 + m * (K - m - 1) with m = m_attach.
/// Each later node attaches to m_attach distinct existing nodes chosen with
/// probability proportional to their current degree.
Graph gen_ba(std::size_t node_count, std::size_t m_attach, Rng& rng);

/// L = D - A (degree minus adjacency), dense K x K.
linalg::Matrix laplacian(const Graph& g);

double laplacian_lambda_max(const Graph& g);

bool is_connected(const Graph& g);

/// Edge-list text format: "K <node_count>" then one "u v" line per edge.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

}  // namespace coop_lms::graph
