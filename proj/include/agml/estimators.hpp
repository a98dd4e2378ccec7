#pragma once

#include <Eigen/Dense>

#include <vector>

#include "agml/sampler.hpp"

namespace agml {

// Raw second-moment matrix (1/n) X^T X over a batch's support. No mean
// centering: the model is zero-mean by construction and the sample budget
// accounting assumes every scalar goes into the estimate.
struct EmpiricalCov {
    std::vector<int> support;
    long long n = 0;
    Eigen::MatrixXd S_hat;

    // Column position of a vertex id; throws if absent.
    int position_of(int vertex) const;
};

EmpiricalCov empirical_cov(const SampleBatch& batch);

// Wraps an externally supplied covariance (e.g. the exact Sigma) so the
// estimators below can be fed population quantities in tests.
EmpiricalCov cov_from_matrix(Eigen::MatrixXd S_hat, std::vector<int> support,
                             long long n);

// Partial correlation of vertices i, j given S, all of which must lie in
// cov.support. Inversion route: invert the ({i,j} u S)-submatrix of S_hat.
// Result clamped to [-1, 1]. Requires n > |S| + 2.
double empirical_partial_corr_inv(const EmpiricalCov& cov, int i, int j,
                                  const std::vector<int>& S);

// Same quantity via the one-variable-at-a-time reduction
//   rho_{ij|S} = (rho_{ij|S'} - rho_{ik|S'} rho_{jk|S'})
//                / sqrt((1 - rho_{ik|S'}^2)(1 - rho_{jk|S'}^2)),  S' = S \ {k},
// eliminating the largest vertex id of S at each step. Throws
// DegenerateCorrelationError when an intermediate hits +/-1.
double empirical_partial_corr_rec(const EmpiricalCov& cov, int i, int j,
                                  const std::vector<int>& S);

struct LassoOptions {
    double tol = 1e-7;
    long long max_iter = 100000;  // full coordinate sweeps
};

struct LassoSolution {
    Eigen::VectorXd beta;
    double lambda = 0.0;
    long long n_iter = 0;
    double kkt_residual = 0.0;
    std::vector<double> objective_per_sweep;
};

// Minimizes (1/2n) |y - X b|^2 + lambda |b|_1 by cyclic coordinate descent
// with soft thresholding on the Gram formulation. Converged when the largest
// coordinate update and the KKT residual both fall below tol; throws
// LassoDivergenceError (carrying the residual) after max_iter sweeps.
LassoSolution lasso_cd(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                       double lambda, const LassoOptions& opts = {});

// Positions of the k largest |beta| entries among the nonzeros, ties to the
// lowest index; the whole support if it has at most k elements. Sorted.
std::vector<int> top_k_support(const Eigen::VectorXd& beta, int k);

}  // namespace agml
