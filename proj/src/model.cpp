#include "agml/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "agml/errors.hpp"

namespace agml {

namespace {

Eigen::MatrixXd weighted_adjacency(const Graph& g, double w, bool normalized) {
    const int p = g.p();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
    for (auto [i, j] : g.edge_list()) {
        double wij = w;
        if (normalized) wij /= std::sqrt(double(g.degree(i)) * double(g.degree(j)));
        A(i, j) = A(j, i) = wij;
    }
    return A;
}

GaussianModel finish_model(const Graph& g, double diag_boost, double weight,
                           bool normalized) {
    const int p = g.p();
    const double diag = 1.0 + diag_boost;
    Eigen::MatrixXd K = weighted_adjacency(g, weight, normalized);
    K.diagonal().setConstant(diag);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K, Eigen::EigenvaluesOnly);
    double lmin = eig.eigenvalues().minCoeff();
    if (lmin <= 0.05) {
        // Rescale the off-diagonal block so lambda_min lands at
        // diag - 0.95 (diag - 0.05), i.e. just below 0.1 for diag = 1.
        const double shrink = 0.95 * (diag - 0.05) / std::abs(lmin - diag);
        weight *= shrink;
        K = weighted_adjacency(g, weight, normalized);
        K.diagonal().setConstant(diag);
    }

    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success)
        throw Error("precision_from_graph: K is not positive definite after shrinking");

    Eigen::MatrixXd Sigma = llt.solve(Eigen::MatrixXd::Identity(p, p));
    Sigma = ((Sigma + Sigma.transpose()) / 2.0).eval();

    Eigen::LLT<Eigen::MatrixXd> sllt(Sigma);
    if (sllt.info() != Eigen::Success)
        throw Error("precision_from_graph: Sigma is not positive definite");

    return GaussianModel{g, std::move(K), std::move(Sigma),
                         Eigen::MatrixXd(sllt.matrixL()), weight};
}

}  // namespace

GaussianModel precision_from_graph(const Graph& g, double edge_weight, double diag_boost) {
    return finish_model(g, diag_boost, edge_weight, false);
}

GaussianModel precision_from_graph_normalized(const Graph& g, double edge_weight,
                                              double diag_boost) {
    return finish_model(g, diag_boost, edge_weight, true);
}

double default_edge_weight(const DegreeStats& stats) {
    return 0.3 / std::sqrt(double(std::max(stats.d_max, 1)));
}

double population_partial_correlation(const Eigen::MatrixXd& Sigma, int i, int j,
                                      const std::vector<int>& S) {
    if (i == j) throw std::invalid_argument("partial correlation: i == j");
    std::vector<int> idx{i, j};
    for (int v : S) {
        if (v == i || v == j)
            throw std::invalid_argument("partial correlation: S must exclude i and j");
        idx.push_back(v);
    }
    const int k = static_cast<int>(idx.size());
    Eigen::MatrixXd sub(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub(r, c) = Sigma(idx[r], idx[c]);
    Eigen::MatrixXd theta = sub.inverse();
    return -theta(0, 1) / std::sqrt(theta(0, 0) * theta(1, 1));
}

bool is_separated(const Graph& g, int i, int j, const std::vector<int>& S) {
    if (i == j) throw std::invalid_argument("is_separated: i == j");
    std::vector<char> blocked(static_cast<std::size_t>(g.p()), 0);
    for (int v : S) {
        if (v == i || v == j)
            throw std::invalid_argument("is_separated: S must exclude i and j");
        blocked[static_cast<std::size_t>(v)] = 1;
    }
    std::vector<char> seen(static_cast<std::size_t>(g.p()), 0);
    std::deque<int> queue{i};
    seen[static_cast<std::size_t>(i)] = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : g.neighbors(v)) {
            if (w == j) return false;
            if (!seen[static_cast<std::size_t>(w)] && !blocked[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                queue.push_back(w);
            }
        }
    }
    return true;
}

double min_edge_partial_correlation(const GaussianModel& m) {
    double best = 0.0;
    bool any = false;
    for (auto [i, j] : m.graph.edge_list()) {
        double r = std::abs(m.K(i, j)) / std::sqrt(m.K(i, i) * m.K(j, j));
        best = any ? std::min(best, r) : r;
        any = true;
    }
    return any ? best : 0.0;
}

namespace {

// Calls fn(subset) for every size-k subset of items, in lexicographic order.
template <typename Fn>
void for_each_subset(const std::vector<int>& items, int k, Fn&& fn) {
    const int n = static_cast<int>(items.size());
    if (k > n) return;
    std::vector<int> pick(static_cast<std::size_t>(k));
    std::vector<int> subset(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) pick[static_cast<std::size_t>(t)] = t;
    while (true) {
        for (int t = 0; t < k; ++t)
            subset[static_cast<std::size_t>(t)] = items[static_cast<std::size_t>(pick[static_cast<std::size_t>(t)])];
        fn(subset);
        int t = k - 1;
        while (t >= 0 && pick[static_cast<std::size_t>(t)] == n - k + t) --t;
        if (t < 0) break;
        ++pick[static_cast<std::size_t>(t)];
        for (int u = t + 1; u < k; ++u)
            pick[static_cast<std::size_t>(u)] = pick[static_cast<std::size_t>(u - 1)] + 1;
    }
}

double binomial_capped(long long n, long long k, double cap) {
    double v = 1.0;
    for (long long t = 0; t < k; ++t) {
        v *= static_cast<double>(n - t) / static_cast<double>(t + 1);
        if (v > cap) return cap + 1.0;
    }
    return v;
}

}  // namespace

AssumptionReport assumption_scan(const GaussianModel& m, int max_cond_size,
                                 long long enum_cap) {
    const int p = m.p();
    if (max_cond_size < 0 || max_cond_size > p - 2)
        throw std::invalid_argument("assumption_scan: bad max_cond_size");

    double combos = 0.0;
    for (int s = 0; s <= max_cond_size; ++s)
        combos += binomial_capped(p - 2, s, static_cast<double>(enum_cap));
    combos *= static_cast<double>(p) * (p - 1) / 2.0;
    if (combos > static_cast<double>(enum_cap))
        throw EnumerationCapError("assumption_scan: enumeration exceeds cap");

    AssumptionReport rep;
    rep.search_depth = max_cond_size;

    std::vector<int> rest;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            rest.clear();
            for (int v = 0; v < p; ++v)
                if (v != i && v != j) rest.push_back(v);
            for (int s = 0; s <= max_cond_size; ++s) {
                for_each_subset(rest, s, [&](const std::vector<int>& S) {
                    double rho = population_partial_correlation(m.Sigma, i, j, S);
                    ++rep.triples_scanned;
                    rep.M_hat = std::max(rep.M_hat, std::abs(rho));
                    if (!is_separated(m.graph, i, j, S)) {
                        double a = std::abs(rho);
                        rep.m_hat = rep.m_hat ? std::min(*rep.m_hat, a) : a;
                    }
                });
            }
        }
    }

    // Neighborhood-block spectrum and incoherence, one reduced matrix per
    // vertex with at least one neighbor.
    for (int i = 0; i < p; ++i) {
        const auto& nbrs = m.graph.neighbors(i);
        if (nbrs.empty()) continue;
        std::vector<int> others, spos, cpos;
        for (int v = 0; v < p; ++v)
            if (v != i) others.push_back(v);
        for (std::size_t t = 0; t < others.size(); ++t) {
            if (std::binary_search(nbrs.begin(), nbrs.end(), others[t]))
                spos.push_back(static_cast<int>(t));
            else
                cpos.push_back(static_cast<int>(t));
        }
        const int q = static_cast<int>(others.size());
        Eigen::MatrixXd red(q, q);
        for (int r = 0; r < q; ++r)
            for (int c = 0; c < q; ++c)
                red(r, c) = m.Sigma(others[static_cast<std::size_t>(r)],
                                    others[static_cast<std::size_t>(c)]);
        const int ns = static_cast<int>(spos.size());
        Eigen::MatrixXd ss(ns, ns);
        for (int r = 0; r < ns; ++r)
            for (int c = 0; c < ns; ++c)
                ss(r, c) = red(spos[static_cast<std::size_t>(r)], spos[static_cast<std::size_t>(c)]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ss, Eigen::EigenvaluesOnly);
        double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
        rep.Cmin_hat = rep.Cmin_hat ? std::min(*rep.Cmin_hat, lo) : lo;
        rep.Cmax_hat = rep.Cmax_hat ? std::max(*rep.Cmax_hat, hi) : hi;

        double incoh = 0.0;
        if (!cpos.empty()) {
            const int nc = static_cast<int>(cpos.size());
            Eigen::MatrixXd cs(nc, ns);
            for (int r = 0; r < nc; ++r)
                for (int c = 0; c < ns; ++c)
                    cs(r, c) = red(cpos[static_cast<std::size_t>(r)], spos[static_cast<std::size_t>(c)]);
            Eigen::MatrixXd prod = cs * ss.inverse();
            incoh = prod.cwiseAbs().rowwise().sum().maxCoeff();
        }
        double gamma = 1.0 - incoh;
        rep.gamma_hat = rep.gamma_hat ? std::min(*rep.gamma_hat, gamma) : gamma;
    }
    return rep;
}

}  // namespace agml
