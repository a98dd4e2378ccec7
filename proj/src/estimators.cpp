#include "agml/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agml/errors.hpp"

namespace agml {

int EmpiricalCov::position_of(int vertex) const {
    auto pos = std::lower_bound(support.begin(), support.end(), vertex);
    if (pos == support.end() || *pos != vertex)
        throw std::invalid_argument("EmpiricalCov: vertex not in support");
    return static_cast<int>(pos - support.begin());
}

EmpiricalCov empirical_cov(const SampleBatch& batch) {
    EmpiricalCov cov;
    cov.support = batch.support;
    cov.n = batch.n();
    const int k = batch.dim();
    if (cov.n == 0)
        cov.S_hat = Eigen::MatrixXd::Zero(k, k);
    else
        cov.S_hat = (batch.data.transpose() * batch.data) / static_cast<double>(cov.n);
    return cov;
}

EmpiricalCov cov_from_matrix(Eigen::MatrixXd S_hat, std::vector<int> support,
                             long long n) {
    if (S_hat.rows() != S_hat.cols() ||
        S_hat.rows() != static_cast<Eigen::Index>(support.size()))
        throw std::invalid_argument("cov_from_matrix: dimension mismatch");
    return EmpiricalCov{std::move(support), n, std::move(S_hat)};
}

namespace {

double clamp_corr(double r) { return std::clamp(r, -1.0, 1.0); }

void check_sample_size(const EmpiricalCov& cov, std::size_t cond_size) {
    if (cov.n <= static_cast<long long>(cond_size) + 2)
        throw InsufficientSamplesError(
            "partial correlation: need n > |S| + 2 samples");
}

}  // namespace

double empirical_partial_corr_inv(const EmpiricalCov& cov, int i, int j,
                                  const std::vector<int>& S) {
    if (i == j) throw std::invalid_argument("partial correlation: i == j");
    check_sample_size(cov, S.size());
    std::vector<int> pos{cov.position_of(i), cov.position_of(j)};
    for (int v : S) {
        if (v == i || v == j)
            throw std::invalid_argument("partial correlation: S must exclude i and j");
        pos.push_back(cov.position_of(v));
    }
    const int k = static_cast<int>(pos.size());
    Eigen::MatrixXd sub(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            sub(r, c) = cov.S_hat(pos[static_cast<std::size_t>(r)],
                                  pos[static_cast<std::size_t>(c)]);
    Eigen::LLT<Eigen::MatrixXd> llt(sub);
    if (llt.info() != Eigen::Success)
        throw InsufficientSamplesError("partial correlation: singular submatrix");
    Eigen::MatrixXd theta = llt.solve(Eigen::MatrixXd::Identity(k, k));
    const double denom = theta(0, 0) * theta(1, 1);
    if (!(denom > 0.0))
        throw InsufficientSamplesError("partial correlation: non-positive diagonal");
    return clamp_corr(-theta(0, 1) / std::sqrt(denom));
}

namespace {

double partial_corr_recurse(const EmpiricalCov& cov, int i, int j,
                            std::vector<int> S) {
    if (S.empty()) {
        const int pi = cov.position_of(i), pj = cov.position_of(j);
        const double denom = cov.S_hat(pi, pi) * cov.S_hat(pj, pj);
        if (!(denom > 0.0))
            throw InsufficientSamplesError("partial correlation: zero variance");
        return clamp_corr(cov.S_hat(pi, pj) / std::sqrt(denom));
    }
    const int k = S.back();  // eliminate the largest vertex id
    S.pop_back();
    const double rij = partial_corr_recurse(cov, i, j, S);
    const double rik = partial_corr_recurse(cov, i, k, S);
    const double rjk = partial_corr_recurse(cov, j, k, S);
    const double denom = (1.0 - rik * rik) * (1.0 - rjk * rjk);
    if (denom < 1e-24)
        throw DegenerateCorrelationError(
            "partial correlation: intermediate correlation at +/-1");
    return clamp_corr((rij - rik * rjk) / std::sqrt(denom));
}

}  // namespace

double empirical_partial_corr_rec(const EmpiricalCov& cov, int i, int j,
                                  const std::vector<int>& S) {
    if (i == j) throw std::invalid_argument("partial correlation: i == j");
    check_sample_size(cov, S.size());
    std::vector<int> sorted = S;
    std::sort(sorted.begin(), sorted.end());
    for (int v : sorted) {
        if (v == i || v == j)
            throw std::invalid_argument("partial correlation: S must exclude i and j");
        cov.position_of(v);  // membership check up front
    }
    return partial_corr_recurse(cov, i, j, sorted);
}

LassoSolution lasso_cd(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                       double lambda, const LassoOptions& opts) {
    if (X.rows() != y.size()) throw std::invalid_argument("lasso_cd: row mismatch");
    if (X.rows() == 0) throw std::invalid_argument("lasso_cd: no samples");
    if (lambda < 0) throw std::invalid_argument("lasso_cd: negative lambda");
    const double n = static_cast<double>(X.rows());
    const int q = static_cast<int>(X.cols());

    // Gram formulation: every quantity below is exact in terms of
    // G = X^T X / n and b = X^T y / n, so sweeps cost O(q^2) regardless of n.
    const Eigen::MatrixXd G = (X.transpose() * X) / n;
    const Eigen::VectorXd b = (X.transpose() * y) / n;
    const double yty = y.squaredNorm() / n;

    LassoSolution sol;
    sol.lambda = lambda;
    sol.beta = Eigen::VectorXd::Zero(q);
    Eigen::VectorXd gb = Eigen::VectorXd::Zero(q);  // G * beta, kept incremental

    auto objective = [&] {
        return 0.5 * (yty - 2.0 * b.dot(sol.beta) + sol.beta.dot(gb)) +
               lambda * sol.beta.lpNorm<1>();
    };
    auto kkt_residual = [&] {
        double worst = 0.0;
        for (int j = 0; j < q; ++j) {
            const double grad = b(j) - gb(j);
            if (sol.beta(j) != 0.0)
                worst = std::max(worst, std::abs(grad - lambda * (sol.beta(j) > 0 ? 1.0 : -1.0)));
            else
                worst = std::max(worst, std::max(0.0, std::abs(grad) - lambda));
        }
        return worst;
    };

    for (long long sweep = 0; sweep < opts.max_iter; ++sweep) {
        double max_update = 0.0;
        for (int j = 0; j < q; ++j) {
            const double gjj = G(j, j);
            if (gjj <= 0.0) continue;  // zero column stays at zero
            const double u = b(j) - gb(j) + gjj * sol.beta(j);
            const double raw = std::abs(u) - lambda;
            const double next = raw > 0.0 ? (u > 0 ? raw : -raw) / gjj : 0.0;
            const double delta = next - sol.beta(j);
            if (delta != 0.0) {
                sol.beta(j) = next;
                gb += delta * G.col(j);
                max_update = std::max(max_update, std::abs(delta));
            }
        }
        sol.objective_per_sweep.push_back(objective());
        sol.n_iter = sweep + 1;
        if (max_update < opts.tol) {
            sol.kkt_residual = kkt_residual();
            if (sol.kkt_residual < opts.tol) return sol;
        }
    }
    sol.kkt_residual = kkt_residual();
    throw LassoDivergenceError("lasso_cd: no convergence within max_iter sweeps",
                               sol.kkt_residual);
}

std::vector<int> top_k_support(const Eigen::VectorXd& beta, int k) {
    if (k < 0) throw std::invalid_argument("top_k_support: negative k");
    std::vector<std::pair<double, int>> mag;
    for (int j = 0; j < beta.size(); ++j)
        if (beta(j) != 0.0) mag.emplace_back(std::abs(beta(j)), j);
    std::sort(mag.begin(), mag.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (static_cast<int>(mag.size()) > k) mag.resize(static_cast<std::size_t>(k));
    std::vector<int> out;
    out.reserve(mag.size());
    for (const auto& [v, j] : mag) out.push_back(j);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace agml
