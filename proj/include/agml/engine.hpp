#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "agml/estimators.hpp"
#include "agml/model.hpp"
#include "agml/sampler.hpp"

namespace agml {

// Candidate neighborhood: nullopt is the "no candidate" sentinel; an engaged
// empty vector is a genuine claim that the vertex is isolated.
using Candidate = std::optional<std::vector<int>>;

// A neighborhood-selection strategy plugged into run_meta. nbd_select sees
// the stage's selection batch (support = currently unsettled vertices) and
// must return a subset of that support of size <= ell, never containing i.
// nbd_verify sees the independent verification batch and must return false
// for the sentinel. g and h are the per-vertex stage sample sizes.
struct SubroutinePair {
    std::function<Candidate(int i, long long ell, const SampleBatch& select)> nbd_select;
    std::function<bool(int i, const Candidate& cand, const SampleBatch& verify)> nbd_verify;
    StageSizeFn g;
    StageSizeFn h;
};

// Marginal sampling interface handed to run_meta; the engine passes a
// deterministic per-stage seed derived from the run's root seed.
using SampleFn = std::function<SampleBatch(const std::vector<int>& support,
                                           long long n, std::uint64_t seed)>;

SampleFn model_oracle(const GaussianModel& m);

enum class RunStatus { ok, budget_exceeded };
std::string to_string(RunStatus s);

struct StageTrace {
    long long stage = 0;        // 0-based
    long long ell = 0;
    long long subset_size = 0;  // unsettled count when the stage was issued
    long long n_select = 0;
    long long n_verify = 0;
    long long scalar_total = 0;  // cumulative, after this stage
    std::vector<int> newly_found;
    std::vector<int> newly_settled;
};

struct RunResult {
    Graph graph;  // OR-rule merge of the final candidate sets
    std::vector<StageTrace> trace;
    SamplingLedger ledger;
    RunStatus status = RunStatus::ok;
    std::vector<long long> found_at_ell;           // -1 when never enrolled
    std::vector<std::vector<int>> candidates;      // final per-vertex sets
};

// Doubling meta-loop: each stage draws one selection and one verification
// batch over the unsettled vertices, charges (p - |settled|)(g(ell) + h(ell))
// scalars against the budget *before* sampling (a stage is never partially
// issued), runs select/verify for every unenrolled vertex, then settles
// enrolled vertices whose whole candidate set is enrolled. Stops when
// ell >= 2p, every vertex is enrolled, or the next stage would exceed the
// budget (status budget_exceeded, partial graph returned).
RunResult run_meta(int p, const SampleFn& sample, const SubroutinePair& subs,
                   std::optional<long long> budget, std::uint64_t root_seed);

// Subset-sweep selection: for k = ell/2+1 .. ell (plus k = 0 when ell = 1,
// so isolated vertices can claim an empty neighborhood), find conditioning
// sets S with max_j |rho_hat(i, j | S)| <= xi over the remaining support and
// return the qualifying set minimizing that statistic at the first k where
// any qualifies. Enumeration across the call is capped at enum_cap subsets.
Candidate adpact_select(int i, long long ell, const SampleBatch& batch, double xi,
                        long long enum_cap = 10'000'000);

// g(ell) = ceil(c * ell * ln p), h = 0, verification = "candidate is not the
// sentinel".
SubroutinePair adpact_pair(double c, double xi, int p,
                           long long enum_cap = 10'000'000);

using LambdaRule = std::function<double(long long ell, long long n, int p)>;

// Lasso of X_i on the rest of the batch support, support truncated to the
// ell largest |beta| entries.
Candidate ampl_select(int i, long long ell, const SampleBatch& batch,
                      const LambdaRule& lambda_rule, const LassoOptions& opts = {});

// Accepts iff every unsettled j outside cand u {i} has
// |rho_hat(i, j | cand)| <= xi on the verification batch (vacuously true
// when no such j remains).
bool ampl_verify(int i, const Candidate& cand, const SampleBatch& batch, double xi);

// g = h = ceil(c * ell * ln p), lambda = lambda0 * sqrt(ln p / n).
SubroutinePair ampl_pair(double c, double xi, double lambda0, int p,
                         const LassoOptions& opts = {});

long long stage_size(double c, long long ell, int p);  // ceil(c * ell * ln p)

// Passive baseline: one full-dimensional batch of n samples, an identical
// lasso per vertex at a single shared lambda, OR-rule merge. The ledger
// charges n * p scalars in one stage.
RunResult mb_passive(const GaussianModel& m, long long n, double lambda,
                     std::uint64_t seed, const LassoOptions& opts = {});

}  // namespace agml
