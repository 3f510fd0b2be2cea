#include "coop_lms/graph.hpp"

#include "coop_lms/errors.hpp"

#include <array>
#include <span>
#include <string>

namespace coop_lms::graph {

namespace {

struct CatalogEntry {
    NamedGraph id;
    std::string_view name;
    std::size_t nodes;
    std::size_t expected_edges;
    std::span<const Edge> edges;
};

// Zachary's karate club, 34 members, 78 ties.
constexpr Edge kKarate[] = {
    {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},   {0, 10},
    {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},  {1, 2},   {1, 3},
    {1, 7},   {1, 13},  {1, 17},  {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},
    {2, 9},   {2, 13},  {2, 27},  {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},  {4, 6},
    {4, 10},  {5, 6},   {5, 10},  {5, 16},  {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},
    {13, 33}, {14, 32}, {14, 33}, {15, 32}, {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32},
    {20, 33}, {22, 32}, {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25},
    {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31}, {28, 33}, {29, 32},
    {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33},
};

constexpr Edge kKrackhardtKite[] = {
    {0, 1}, {0, 2}, {0, 3}, {0, 5}, {1, 3}, {1, 4}, {1, 6}, {2, 3}, {2, 5},
    {3, 4}, {3, 5}, {3, 6}, {4, 6}, {5, 6}, {5, 7}, {6, 7}, {7, 8}, {8, 9},
};

constexpr Edge kChvatal[] = {
    {0, 1}, {0, 4},  {0, 6},  {0, 9},  {1, 2},  {1, 5},  {1, 7},  {2, 3},
    {2, 6}, {2, 8},  {3, 4},  {3, 7},  {3, 9},  {4, 5},  {4, 8},  {5, 10},
    {5, 11}, {6, 10}, {6, 11}, {7, 8}, {7, 11}, {8, 10}, {9, 10}, {9, 11},
};

constexpr Edge kPappus[] = {
    {0, 1},   {0, 5},   {0, 17},  {1, 2},   {1, 8},   {2, 3},   {2, 13},  {3, 4},   {3, 10},
    {4, 5},   {4, 15},  {5, 6},   {6, 7},   {6, 11},  {7, 8},   {7, 14},  {8, 9},   {9, 10},
    {9, 16},  {10, 11}, {11, 12}, {12, 13}, {12, 17}, {13, 14}, {14, 15}, {15, 16}, {16, 17},
};

constexpr Edge kTutte[] = {
    {0, 1},   {0, 2},   {0, 3},   {1, 4},   {1, 26},  {2, 10},  {2, 11},  {3, 18},  {3, 19},
    {4, 5},   {4, 40},  {5, 6},   {5, 29},  {6, 7},   {6, 27},  {7, 8},   {7, 14},  {8, 9},
    {8, 41},  {9, 10},  {9, 35},  {10, 42}, {11, 12}, {11, 42}, {12, 13}, {12, 33}, {13, 14},
    {13, 15}, {14, 32}, {15, 16}, {15, 22}, {16, 17}, {16, 43}, {17, 18}, {17, 39}, {18, 44},
    {19, 20}, {19, 44}, {20, 21}, {20, 37}, {21, 22}, {21, 23}, {22, 36}, {23, 24}, {23, 27},
    {24, 25}, {24, 45}, {25, 26}, {25, 31}, {26, 40}, {27, 28}, {28, 29}, {28, 45}, {29, 30},
    {30, 31}, {30, 40}, {31, 45}, {32, 33}, {32, 41}, {33, 34}, {34, 35}, {34, 42}, {35, 41},
    {36, 37}, {36, 43}, {37, 38}, {38, 39}, {38, 44}, {39, 43},
};

// |V| and |E| for the small graphs follow the usual references (kite 10/18,
// Chvatal 12/24, Pappus 18/27, Tutte 46/69).
constexpr std::array<CatalogEntry, 5> kCatalog{{
    {NamedGraph::karate, "karate", 34, 78, kKarate},
    {NamedGraph::krackhardt_kite, "krackhardt_kite", 10, 18, kKrackhardtKite},
    {NamedGraph::chvatal, "chvatal", 12, 24, kChvatal},
    {NamedGraph::pappus, "pappus", 18, 27, kPappus},
    {NamedGraph::tutte, "tutte", 46, 69, kTutte},
}};

const CatalogEntry& entry(NamedGraph id) {
    for (const auto& e : kCatalog) {
        if (e.id == id) return e;
    }
    throw ConfigError("unknown named graph");
}

}  // namespace

NamedGraph parse_named_graph(std::string_view name) {
    for (const auto& e : kCatalog) {
        if (e.name == name) return e.id;
    }
    throw ConfigError("unknown named graph '" + std::string(name) +
                      "' (expected karate, krackhardt_kite, chvatal, pappus or tutte)");
}

std::string_view to_string(NamedGraph name) { return entry(name).name; }

std::vector<NamedGraph> all_named_graphs() {
    std::vector<NamedGraph> out;
    for (const auto& e : kCatalog) out.push_back(e.id);
    return out;
}

Graph named_graph(NamedGraph name) {
    const auto& e = entry(name);
    Graph g(e.nodes, std::vector<Edge>(e.edges.begin(), e.edges.end()));
    if (g.edge_count() != e.expected_edges) {
        throw ConfigError("catalog graph '" + std::string(e.name) + "' has the wrong edge count");
    }
    return g;
}

Graph named_graph(std::string_view name) { return named_graph(parse_named_graph(name)); }

}  // namespace coop_lms::graph
