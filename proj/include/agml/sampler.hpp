#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "agml/model.hpp"

namespace agml {

// Stream split: every independent consumer of randomness gets
// derive_seed(root, a, b) with a distinct (a, b), so replaying a trial never
// depends on call order elsewhere.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0);

// n joint observations of the coordinates in `support` (sorted vertex ids);
// data is n x |support|, one row per observation.
struct SampleBatch {
    std::vector<int> support;
    Eigen::MatrixXd data;

    long long n() const { return data.rows(); }
    int dim() const { return static_cast<int>(data.cols()); }
};

// Draws X_S ~ N(0, Sigma_SS) by Cholesky of the submatrix. n = 0 yields an
// empty batch; an empty S or a non-PD submatrix throws.
SampleBatch draw(const GaussianModel& m, const std::vector<int>& S, long long n,
                 std::mt19937_64& rng);
SampleBatch draw(const GaussianModel& m, const std::vector<int>& S, long long n,
                 std::uint64_t seed);

// Running record of every marginal batch the engine paid for. scalar_total
// is sum over stages of |S_k| * n_k; recompute_total re-derives it from the
// stage list for audits. An exhausted budget is the caller's concern: the
// ledger only stores the cap.
struct LedgerStage {
    std::vector<int> support;
    long long n = 0;
};

class SamplingLedger {
public:
    explicit SamplingLedger(std::optional<long long> budget = std::nullopt);

    void record(const std::vector<int>& support, long long n);
    long long scalar_total() const { return scalar_total_; }
    std::optional<long long> budget() const { return budget_; }
    const std::vector<LedgerStage>& stages() const { return stages_; }
    long long recompute_total() const;

private:
    std::optional<long long> budget_;
    long long scalar_total_ = 0;
    std::vector<LedgerStage> stages_;
};

// Smallest k with 2^k >= d; 0 for d <= 1.
int ceil_log2(long long d);

using StageSizeFn = std::function<long long(long long)>;

// Deterministic stage-accounting bound: sum over vertices of
// sum_{k=0..ceil_log2(local_max[i])} g(2^k) + h(2^k). Vertices with
// local_max 0 contribute the k = 0 term only.
long long sufficient_budget(const DegreeStats& stats, const StageSizeFn& g,
                            const StageSizeFn& h);

}  // namespace agml
