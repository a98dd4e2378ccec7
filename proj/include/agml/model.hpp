#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "agml/graph.hpp"

namespace agml {

// Zero-mean Gaussian whose precision matrix K carries the graph: K_ij != 0
// exactly at edges (and the diagonal). Sigma = K^-1, sigma_chol is the lower
// Cholesky factor of Sigma used by the sampler.
struct GaussianModel {
    Graph graph;
    Eigen::MatrixXd K;
    Eigen::MatrixXd Sigma;
    Eigen::MatrixXd sigma_chol;
    double edge_weight_used = 0.0;  // after any positive-definiteness shrink

    int p() const { return graph.p(); }
};

// K = (1 + diag_boost) I + w A. If lambda_min(K) <= 0.05 the off-diagonal
// block is rescaled by 0.95 (1 + diag_boost - 0.05) / |lambda_min - (1 +
// diag_boost)|, which lands lambda_min just under 0.1. Throws if K still
// fails a Cholesky factorization afterwards.
GaussianModel precision_from_graph(const Graph& g, double edge_weight,
                                   double diag_boost = 0.0);

// Same, but edge (i, j) gets weight w / sqrt(d_i d_j). The symmetrically
// normalized adjacency has spectrum in [-1, 1], so any |w| < 1 stays positive
// definite regardless of the graph; the benchmark module uses this variant
// when per-edge difficulty should not degrade with local degree.
GaussianModel precision_from_graph_normalized(const Graph& g, double edge_weight,
                                              double diag_boost = 0.0);

// 0.3 / sqrt(max(d_max, 1)).
double default_edge_weight(const DegreeStats& stats);

// Partial correlation of X_i and X_j given X_S, from the inverse of the
// ({i, j} u S)-submatrix of Sigma.
double population_partial_correlation(const Eigen::MatrixXd& Sigma, int i, int j,
                                      const std::vector<int>& S);

// True iff S separates i from j (every path between them meets S).
bool is_separated(const Graph& g, int i, int j, const std::vector<int>& S);

// min over edges (i, j) of |K_ij| / sqrt(K_ii K_jj); 0 for edgeless graphs.
// Half of this is the default AdPaCT/AMPL verification threshold.
double min_edge_partial_correlation(const GaussianModel& m);

// Exhaustive scan of partial correlations with |S| <= max_cond_size, split by
// graph separation, plus the eigenvalue/incoherence diagnostics of the
// per-vertex neighborhood blocks. Enumeration size is checked against
// enum_cap up front.
struct AssumptionReport {
    int search_depth = 0;
    long long triples_scanned = 0;
    std::optional<double> m_hat;   // min |rho| over non-separated triples
    double M_hat = 0.0;            // max |rho| over all triples
    std::optional<double> Cmin_hat;
    std::optional<double> Cmax_hat;
    std::optional<double> gamma_hat;
};

AssumptionReport assumption_scan(const GaussianModel& m, int max_cond_size,
                                 long long enum_cap = 2'000'000);

}  // namespace agml
