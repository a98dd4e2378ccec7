#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace agml {

// Simple undirected graph on vertices 0..p-1. Adjacency lists are kept
// sorted; self loops are rejected and duplicate edges are ignored, so
// add_edge is idempotent (the OR-rule merge in the engine relies on that).
class Graph {
public:
    explicit Graph(int p);

    int p() const { return p_; }
    long long edge_count() const { return edges_; }

    void add_edge(int i, int j);
    bool has_edge(int i, int j) const;

    const std::vector<int>& neighbors(int i) const;
    int degree(int i) const { return static_cast<int>(neighbors(i).size()); }

    // All edges as (i, j) with i < j, sorted lexicographically.
    std::vector<std::pair<int, int>> edge_list() const;

    bool operator==(const Graph& other) const;

private:
    void check_vertex(int v) const;

    int p_;
    long long edges_ = 0;
    std::vector<std::vector<int>> adj_;
};

// Per-vertex degree summaries. local_max[i] is the largest degree over the
// closed neighborhood of i (i itself included), dbar_max is the average of
// local_max, so dbar_max <= d_max always.
struct DegreeStats {
    std::vector<int> degree;
    std::vector<int> local_max;
    int d_max = 0;
    long long local_max_sum = 0;
    double dbar_max = 0.0;
};

DegreeStats degree_stats(const Graph& g);

// Clique on vertices 0..clique_size-1 plus a disjoint path on the rest.
// Requires 0 < clique_size <= p.
Graph gen_single_clique_chain(int p, int clique_size);

// Disjoint cliques of the given sizes on consecutive vertex blocks, then a
// disjoint path on whatever is left. Requires sum(sizes) <= p, sizes >= 1.
Graph gen_multi_clique_chain(int p, const std::vector<int>& clique_sizes);

// Preferential-attachment graph: the seed block is Erdos-Renyi(seed_size, 1/2)
// redrawn until it has at least one edge, then each new vertex attaches
// edges_per_step distinct edges to existing vertices with probability
// proportional to degree + 1. Deterministic for a fixed rng_seed.
Graph gen_power_law(int p, int seed_size, int edges_per_step, std::uint64_t rng_seed);

// Number of vertex pairs whose edge/non-edge status differs.
long long hamming_distance(const Graph& a, const Graph& b);

// Fraction of a's edges present in b (1.0 when a has no edges).
double edges_correct_fraction(const Graph& truth, const Graph& recovered);

// Text format: header "p <count>", then one "i j" line per edge with i < j,
// sorted ascending.
void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);
void save_graph(const Graph& g, const std::string& path);
Graph load_graph(const std::string& path);

}  // namespace agml
