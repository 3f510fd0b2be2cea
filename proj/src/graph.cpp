#include "coop_lms/graph.hpp"

#include "coop_lms/errors.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

namespace coop_lms::graph {

Graph::Graph(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), adjacency_(node_count) {
    if (node_count == 0) throw ConfigError("graph: node_count must be positive");
    for (auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw ConfigError("graph: edge (" + std::to_string(u) + "," + std::to_string(v) +
                              ") has an endpoint outside [0, " + std::to_string(node_count) + ")");
        }
        if (u == v) throw ConfigError("graph: self-loop at node " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
        throw ConfigError("graph: duplicate edge (" + std::to_string(dup->first) + "," +
                          std::to_string(dup->second) + ")");
    }
    edges_ = std::move(edges);
    for (const auto& [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t best = 0;
    for (const auto& nb : adjacency_) best = std::max(best, nb.size());
    return best;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (u >= node_count_ || v >= node_count_) return false;
    const auto& nb = adjacency_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

bool is_connected(const Graph& g) {
    const std::size_t k = g.node_count();
    std::vector<char> seen(k, 0);
    std::queue<NodeId> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        for (NodeId v : g.neighbors(u)) {
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                frontier.push(v);
            }
        }
    }
    return reached == k;
}

ErResult gen_er(std::size_t node_count, double p, Rng& rng) {
    if (node_count < 2) throw ConfigError("gen_er: need at least 2 nodes");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("gen_er: p must lie in [0, 1]");

    std::bernoulli_distribution coin(p);
    for (int attempt = 0; attempt < kErMaxResamples; ++attempt) {
        std::vector<Edge> edges;
        for (NodeId u = 0; u < node_count; ++u) {
            for (NodeId v = u + 1; v < node_count; ++v) {
                if (coin(rng)) edges.emplace_back(u, v);
            }
        }
        Graph g(node_count, std::move(edges));
        if (is_connected(g)) return {std::move(g), attempt};
    }
    throw GenerationError("gen_er: no connected sample in " + std::to_string(kErMaxResamples) +
                          " draws (K=" + std::to_string(node_count) + ", p=" + std::to_string(p) + ")");
}

Graph gen_ba(std::size_t node_count, std::size_t m_attach, Rng& rng) {
    if (m_attach < 1) throw ConfigError("gen_ba: m_attach must be at least 1");
    if (node_count <= m_attach) {
        throw ConfigError("gen_ba: need K > m_attach (K=" + std::to_string(node_count) +
                          ", m_attach=" + std::to_string(m_attach) + ")");
    }

    std::vector<Edge> edges;
    // One entry per edge endpoint: sampling uniformly from this list is
    // sampling a node with probability proportional to its degree.
    std::vector<NodeId> endpoints;
    const std::size_t seed_nodes = m_attach + 1;
    for (NodeId u = 0; u < seed_nodes; ++u) {
        for (NodeId v = u + 1; v < seed_nodes; ++v) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }

    std::vector<NodeId> targets;
    for (NodeId fresh = seed_nodes; fresh < node_count; ++fresh) {
        targets.clear();
        std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
        while (targets.size() < m_attach) {
            const NodeId cand = endpoints[pick(rng)];
            if (std::find(targets.begin(), targets.end(), cand) == targets.end()) {
                targets.push_back(cand);
            }
        }
        for (NodeId t : targets) {
            edges.emplace_back(t, fresh);
            endpoints.push_back(t);
            endpoints.push_back(fresh);
        }
    }
    return Graph(node_count, std::move(edges));
}

linalg::Matrix laplacian(const Graph& g) {
    const auto k = static_cast<Eigen::Index>(g.node_count());
    linalg::Matrix lap = linalg::Matrix::Zero(k, k);
    for (const auto& [u, v] : g.edges()) {
        const auto i = static_cast<Eigen::Index>(u);
        const auto j = static_cast<Eigen::Index>(v);
        lap(i, j) -= 1.0;
        lap(j, i) -= 1.0;
        lap(i, i) += 1.0;
        lap(j, j) += 1.0;
    }
    return lap;
}

double laplacian_lambda_max(const Graph& g) { return linalg::sym_eigvals(laplacian(g)).back(); }

void write_edge_list(std::ostream& os, const Graph& g) {
    os << "K " << g.node_count() << '\n';
    for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& is) {
    std::string tag;
    long long k = 0;
    if (!(is >> tag >> k) || tag != "K" || k <= 0) {
        throw UsageError("edge list: expected header 'K <node_count>'");
    }
    std::vector<Edge> edges;
    long long u = 0;
    long long v = 0;
    while (is >> u) {
        if (!(is >> v)) throw UsageError("edge list: dangling endpoint");
        if (u < 0 || v < 0) throw UsageError("edge list: negative node id");
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    if (!is.eof()) throw UsageError("edge list: malformed line");
    return Graph(static_cast<std::size_t>(k), std::move(edges));
}

}  // namespace coop_lms::graph
