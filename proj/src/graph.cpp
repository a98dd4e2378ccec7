#include "agml/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace agml {

Graph::Graph(int p) : p_(p) {
    if (p <= 0) throw std::invalid_argument("Graph: p must be positive");
    adj_.resize(static_cast<std::size_t>(p));
}

void Graph::check_vertex(int v) const {
    if (v < 0 || v >= p_) throw std::out_of_range("Graph: vertex out of range");
}

void Graph::add_edge(int i, int j) {
    check_vertex(i);
    check_vertex(j);
    if (i == j) throw std::invalid_argument("Graph: self loops not allowed");
    auto& ni = adj_[static_cast<std::size_t>(i)];
    auto pos = std::lower_bound(ni.begin(), ni.end(), j);
    if (pos != ni.end() && *pos == j) return;  // already present
    ni.insert(pos, j);
    auto& nj = adj_[static_cast<std::size_t>(j)];
    nj.insert(std::lower_bound(nj.begin(), nj.end(), i), i);
    ++edges_;
}

bool Graph::has_edge(int i, int j) const {
    check_vertex(i);
    check_vertex(j);
    if (i == j) return false;
    const auto& ni = adj_[static_cast<std::size_t>(i)];
    return std::binary_search(ni.begin(), ni.end(), j);
}

const std::vector<int>& Graph::neighbors(int i) const {
    check_vertex(i);
    return adj_[static_cast<std::size_t>(i)];
}

std::vector<std::pair<int, int>> Graph::edge_list() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(edges_));
    for (int i = 0; i < p_; ++i)
        for (int j : adj_[static_cast<std::size_t>(i)])
            if (i < j) out.emplace_back(i, j);
    return out;
}

bool Graph::operator==(const Graph& other) const {
    return p_ == other.p_ && adj_ == other.adj_;
}

DegreeStats degree_stats(const Graph& g) {
    const int p = g.p();
    DegreeStats s;
    s.degree.resize(static_cast<std::size_t>(p));
    s.local_max.resize(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) s.degree[static_cast<std::size_t>(i)] = g.degree(i);
    for (int i = 0; i < p; ++i) {
        int m = s.degree[static_cast<std::size_t>(i)];
        for (int j : g.neighbors(i)) m = std::max(m, s.degree[static_cast<std::size_t>(j)]);
        s.local_max[static_cast<std::size_t>(i)] = m;
        s.local_max_sum += m;
        s.d_max = std::max(s.d_max, s.degree[static_cast<std::size_t>(i)]);
    }
    s.dbar_max = static_cast<double>(s.local_max_sum) / static_cast<double>(p);
    return s;
}

namespace {

void add_clique(Graph& g, int first, int size) {
    for (int i = first; i < first + size; ++i)
        for (int j = i + 1; j < first + size; ++j) g.add_edge(i, j);
}

void add_path(Graph& g, int first, int count) {
    for (int i = first; i + 1 < first + count; ++i) g.add_edge(i, i + 1);
}

}  // namespace

Graph gen_single_clique_chain(int p, int clique_size) {
    if (clique_size <= 0 || clique_size > p)
        throw std::invalid_argument("gen_single_clique_chain: need 0 < clique_size <= p");
    Graph g(p);
    add_clique(g, 0, clique_size);
    add_path(g, clique_size, p - clique_size);
    return g;
}

Graph gen_multi_clique_chain(int p, const std::vector<int>& clique_sizes) {
    long long total = 0;
    for (int s : clique_sizes) {
        if (s <= 0) throw std::invalid_argument("gen_multi_clique_chain: clique sizes must be positive");
        total += s;
    }
    if (total > p) throw std::invalid_argument("gen_multi_clique_chain: clique sizes exceed p");
    Graph g(p);
    int next = 0;
    for (int s : clique_sizes) {
        add_clique(g, next, s);
        next += s;
    }
    add_path(g, next, p - next);
    return g;
}

Graph gen_power_law(int p, int seed_size, int edges_per_step, std::uint64_t rng_seed) {
    if (seed_size <= 1 || seed_size > p)
        throw std::invalid_argument("gen_power_law: need 1 < seed_size <= p");
    if (edges_per_step <= 0)
        throw std::invalid_argument("gen_power_law: edges_per_step must be positive");
    std::mt19937_64 rng(rng_seed);
    Graph g(p);

    // Seed block: ER(seed_size, 1/2) conditioned on having at least one edge.
    std::bernoulli_distribution coin(0.5);
    std::vector<std::pair<int, int>> seed_edges;
    do {
        seed_edges.clear();
        for (int i = 0; i < seed_size; ++i)
            for (int j = i + 1; j < seed_size; ++j)
                if (coin(rng)) seed_edges.emplace_back(i, j);
    } while (seed_edges.empty());
    for (auto [i, j] : seed_edges) g.add_edge(i, j);

    // Growth: attachment weights degree+1, frozen at the start of each step,
    // redrawing on duplicate targets so the m edges hit distinct vertices.
    for (int t = seed_size; t < p; ++t) {
        const int m = std::min(edges_per_step, t);
        std::vector<double> weight(static_cast<std::size_t>(t));
        for (int v = 0; v < t; ++v) weight[static_cast<std::size_t>(v)] = g.degree(v) + 1.0;
        std::discrete_distribution<int> pick(weight.begin(), weight.end());
        std::vector<int> targets;
        while (static_cast<int>(targets.size()) < m) {
            int v = pick(rng);
            if (std::find(targets.begin(), targets.end(), v) == targets.end())
                targets.push_back(v);
        }
        for (int v : targets) g.add_edge(t, v);
    }
    return g;
}

long long hamming_distance(const Graph& a, const Graph& b) {
    if (a.p() != b.p()) throw std::invalid_argument("hamming_distance: vertex counts differ");
    long long d = 0;
    for (int i = 0; i < a.p(); ++i) {
        for (int j : a.neighbors(i))
            if (i < j && !b.has_edge(i, j)) ++d;
        for (int j : b.neighbors(i))
            if (i < j && !a.has_edge(i, j)) ++d;
    }
    return d;
}

double edges_correct_fraction(const Graph& truth, const Graph& recovered) {
    if (truth.p() != recovered.p())
        throw std::invalid_argument("edges_correct_fraction: vertex counts differ");
    if (truth.edge_count() == 0) return 1.0;
    long long hit = 0;
    for (auto [i, j] : truth.edge_list())
        if (recovered.has_edge(i, j)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(truth.edge_count());
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << "p " << g.p() << "\n";
    for (auto [i, j] : g.edge_list()) out << i << " " << j << "\n";
}

Graph read_edge_list(std::istream& in) {
    std::string tag;
    int p = 0;
    if (!(in >> tag >> p) || tag != "p")
        throw std::runtime_error("read_edge_list: missing 'p <count>' header");
    Graph g(p);
    int i, j;
    while (in >> i >> j) g.add_edge(i, j);
    return g;
}

void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_graph: cannot open " + path);
    write_edge_list(g, out);
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_graph: cannot open " + path);
    return read_edge_list(in);
}

}  // namespace agml
