#include "agml/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agml/errors.hpp"

namespace agml {

SampleFn model_oracle(const GaussianModel& m) {
    return [model = m](const std::vector<int>& support, long long n, std::uint64_t seed) {
        return draw(model, support, n, seed);
    };
}

std::string to_string(RunStatus s) {
    return s == RunStatus::ok ? "ok" : "budget_exceeded";
}

namespace {

void validate_candidate(const std::vector<int>& cand, int i, long long ell,
                        const std::vector<int>& support) {
    if (static_cast<long long>(cand.size()) > ell)
        throw std::logic_error("nbd_select returned more than ell vertices");
    for (int v : cand) {
        if (v == i) throw std::logic_error("nbd_select returned i itself");
        if (!std::binary_search(support.begin(), support.end(), v))
            throw std::logic_error("nbd_select returned a vertex outside the unsettled support");
    }
}

}  // namespace

RunResult run_meta(int p, const SampleFn& sample, const SubroutinePair& subs,
                   std::optional<long long> budget, std::uint64_t root_seed) {
    if (p <= 0) throw std::invalid_argument("run_meta: p must be positive");
    if (budget && *budget < 0) throw std::invalid_argument("run_meta: negative budget");

    std::vector<char> found(static_cast<std::size_t>(p), 0);
    std::vector<char> settled(static_cast<std::size_t>(p), 0);
    std::vector<std::vector<int>> cand(static_cast<std::size_t>(p));
    std::vector<long long> found_at(static_cast<std::size_t>(p), -1);
    SamplingLedger ledger(budget);
    std::vector<StageTrace> trace;
    RunStatus status = RunStatus::ok;

    long long ell = 1;
    long long stage = 0;
    int n_found = 0;

    while (true) {
        std::vector<int> unsettled;
        for (int i = 0; i < p; ++i)
            if (!settled[static_cast<std::size_t>(i)]) unsettled.push_back(i);

        const long long gl = subs.g(ell);
        const long long hl = subs.h(ell);
        const long long needed = static_cast<long long>(unsettled.size()) * (gl + hl);
        // Budget gate sits before the draw: a stage is all-or-nothing.
        if (budget && ledger.scalar_total() + needed > *budget) {
            status = RunStatus::budget_exceeded;
            break;
        }

        SampleBatch select_batch = sample(unsettled, gl, derive_seed(root_seed, stage, 1));
        SampleBatch verify_batch = sample(unsettled, hl, derive_seed(root_seed, stage, 2));
        if (gl > 0) ledger.record(unsettled, gl);
        if (hl > 0) ledger.record(unsettled, hl);

        StageTrace tr;
        tr.stage = stage;
        tr.ell = ell;
        tr.subset_size = static_cast<long long>(unsettled.size());
        tr.n_select = gl;
        tr.n_verify = hl;

        for (int i : unsettled) {
            if (found[static_cast<std::size_t>(i)]) continue;  // candidate frozen
            Candidate c = subs.nbd_select(i, ell, select_batch);
            if (c) validate_candidate(*c, i, ell, unsettled);
            const bool ok = c.has_value() && subs.nbd_verify(i, c, verify_batch);
            cand[static_cast<std::size_t>(i)] = c.value_or(std::vector<int>{});
            if (ok) tr.newly_found.push_back(i);
        }
        for (int i : tr.newly_found) {
            found[static_cast<std::size_t>(i)] = 1;
            found_at[static_cast<std::size_t>(i)] = ell;
            ++n_found;
        }
        for (int i = 0; i < p; ++i) {
            if (!found[static_cast<std::size_t>(i)] || settled[static_cast<std::size_t>(i)])
                continue;
            const auto& ci = cand[static_cast<std::size_t>(i)];
            const bool all_found = std::all_of(ci.begin(), ci.end(), [&](int v) {
                return found[static_cast<std::size_t>(v)] != 0;
            });
            if (all_found) {
                settled[static_cast<std::size_t>(i)] = 1;
                tr.newly_settled.push_back(i);
            }
        }
        tr.scalar_total = ledger.scalar_total();
        trace.push_back(std::move(tr));

        ++stage;
        ell *= 2;
        if (ell >= 2LL * p || n_found == p) break;
    }

    Graph recovered(p);
    for (int i = 0; i < p; ++i)
        for (int j : cand[static_cast<std::size_t>(i)]) recovered.add_edge(i, j);

    return RunResult{std::move(recovered), std::move(trace), std::move(ledger),
                     status, std::move(found_at), std::move(cand)};
}

namespace {

double binomial_capped(long long n, long long k, double cap) {
    double v = 1.0;
    for (long long t = 0; t < k; ++t) {
        v *= static_cast<double>(n - t) / static_cast<double>(t + 1);
        if (v > cap) return cap + 1.0;
    }
    return v;
}

// Calls fn(subset) for every size-k subset of items in lexicographic order.
template <typename Fn>
void for_each_subset(const std::vector<int>& items, int k, Fn&& fn) {
    const int n = static_cast<int>(items.size());
    if (k > n) return;
    std::vector<int> pick(static_cast<std::size_t>(k));
    std::vector<int> subset(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) pick[static_cast<std::size_t>(t)] = t;
    while (true) {
        for (int t = 0; t < k; ++t)
            subset[static_cast<std::size_t>(t)] =
                items[static_cast<std::size_t>(pick[static_cast<std::size_t>(t)])];
        fn(subset);
        int t = k - 1;
        while (t >= 0 && pick[static_cast<std::size_t>(t)] == n - k + t) --t;
        if (t < 0) break;
        ++pick[static_cast<std::size_t>(t)];
        for (int u = t + 1; u < k; ++u)
            pick[static_cast<std::size_t>(u)] = pick[static_cast<std::size_t>(u - 1)] + 1;
    }
}

}  // namespace

Candidate adpact_select(int i, long long ell, const SampleBatch& batch, double xi,
                        long long enum_cap) {
    const auto& F = batch.support;
    if (!std::binary_search(F.begin(), F.end(), i))
        throw std::invalid_argument("adpact_select: i not in batch support");
    std::vector<int> others;
    others.reserve(F.size() - 1);
    for (int v : F)
        if (v != i) others.push_back(v);
    const long long q = static_cast<long long>(others.size());

    double combos = (ell == 1) ? 1.0 : 0.0;
    for (long long k = ell / 2 + 1; k <= std::min(ell, q); ++k)
        combos += binomial_capped(q, k, static_cast<double>(enum_cap));
    if (combos > static_cast<double>(enum_cap))
        throw EnumerationCapError("adpact_select: subset enumeration exceeds cap");

    const EmpiricalCov cov = empirical_cov(batch);
    auto max_stat = [&](const std::vector<int>& S) {
        double worst = 0.0;
        for (int j : others) {
            if (std::find(S.begin(), S.end(), j) != S.end()) continue;
            worst = std::max(worst,
                             std::abs(empirical_partial_corr_inv(cov, i, j, S)));
        }
        return worst;
    };

    // k = 0 probe at the first stage: an isolated vertex's only correct
    // candidate is the empty set, which the k >= 1 sweep can never produce.
    if (ell == 1 && max_stat({}) <= xi) return std::vector<int>{};

    for (long long k = ell / 2 + 1; k <= std::min(ell, q); ++k) {
        bool any = false;
        double best_stat = 0.0;
        std::vector<int> best;
        for_each_subset(others, static_cast<int>(k), [&](const std::vector<int>& S) {
            const double stat = max_stat(S);
            if (stat <= xi && (!any || stat < best_stat)) {
                any = true;
                best_stat = stat;
                best = S;
            }
        });
        if (any) return best;
    }
    return std::nullopt;
}

long long stage_size(double c, long long ell, int p) {
    if (p < 1) throw std::invalid_argument("stage_size: p must be positive");
    return static_cast<long long>(
        std::ceil(c * static_cast<double>(ell) * std::log(static_cast<double>(p))));
}

SubroutinePair adpact_pair(double c, double xi, int p, long long enum_cap) {
    SubroutinePair subs;
    subs.nbd_select = [xi, enum_cap](int i, long long ell, const SampleBatch& batch) {
        return adpact_select(i, ell, batch, xi, enum_cap);
    };
    subs.nbd_verify = [](int, const Candidate& cand, const SampleBatch&) {
        return cand.has_value();
    };
    subs.g = [c, p](long long ell) { return stage_size(c, ell, p); };
    subs.h = [](long long) { return 0LL; };
    return subs;
}

Candidate ampl_select(int i, long long ell, const SampleBatch& batch,
                      const LambdaRule& lambda_rule, const LassoOptions& opts) {
    const auto& F = batch.support;
    auto pos = std::lower_bound(F.begin(), F.end(), i);
    if (pos == F.end() || *pos != i)
        throw std::invalid_argument("ampl_select: i not in batch support");
    const int pi = static_cast<int>(pos - F.begin());
    const int q = batch.dim() - 1;
    if (q == 0) return std::vector<int>{};
    if (batch.n() < 1)
        throw InsufficientSamplesError("ampl_select: empty selection batch");

    Eigen::VectorXd y = batch.data.col(pi);
    Eigen::MatrixXd X(batch.data.rows(), q);
    std::vector<int> others(static_cast<std::size_t>(q));
    for (int t = 0, w = 0; t < batch.dim(); ++t) {
        if (t == pi) continue;
        X.col(w) = batch.data.col(t);
        others[static_cast<std::size_t>(w)] = F[static_cast<std::size_t>(t)];
        ++w;
    }

    const double lambda = lambda_rule(ell, batch.n(), batch.dim());
    const LassoSolution sol = lasso_cd(y, X, lambda, opts);

    std::vector<int> support_pos;
    for (int t = 0; t < q; ++t)
        if (sol.beta(t) != 0.0) support_pos.push_back(t);
    if (static_cast<long long>(support_pos.size()) > ell)
        support_pos = top_k_support(sol.beta, static_cast<int>(ell));

    std::vector<int> out;
    out.reserve(support_pos.size());
    for (int t : support_pos) out.push_back(others[static_cast<std::size_t>(t)]);
    std::sort(out.begin(), out.end());
    return out;
}

bool ampl_verify(int i, const Candidate& cand, const SampleBatch& batch, double xi) {
    if (!cand) return false;
    const EmpiricalCov cov = empirical_cov(batch);
    for (int j : batch.support) {
        if (j == i) continue;
        if (std::binary_search(cand->begin(), cand->end(), j)) continue;
        if (std::abs(empirical_partial_corr_inv(cov, i, j, *cand)) > xi) return false;
    }
    return true;
}

SubroutinePair ampl_pair(double c, double xi, double lambda0, int p,
                         const LassoOptions& opts) {
    SubroutinePair subs;
    // The lambda rule keys on the ambient dimension, not the shrinking
    // unsettled support, so the penalty scale is stable across stages.
    LambdaRule rule = [lambda0, p](long long, long long n, int) {
        return lambda0 * std::sqrt(std::log(static_cast<double>(p)) /
                                   static_cast<double>(n));
    };
    subs.nbd_select = [rule, opts](int i, long long ell, const SampleBatch& batch) {
        return ampl_select(i, ell, batch, rule, opts);
    };
    subs.nbd_verify = [xi](int i, const Candidate& cand, const SampleBatch& batch) {
        return ampl_verify(i, cand, batch, xi);
    };
    subs.g = [c, p](long long ell) { return stage_size(c, ell, p); };
    subs.h = [c, p](long long ell) { return stage_size(c, ell, p); };
    return subs;
}

RunResult mb_passive(const GaussianModel& m, long long n, double lambda,
                     std::uint64_t seed, const LassoOptions& opts) {
    const int p = m.p();
    if (n < 1) throw std::invalid_argument("mb_passive: need n >= 1");
    std::vector<int> all(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) all[static_cast<std::size_t>(i)] = i;

    SampleBatch batch = draw(m, all, n, seed);
    SamplingLedger ledger;
    ledger.record(all, n);

    std::vector<std::vector<int>> cand(static_cast<std::size_t>(p));
    Graph recovered(p);
    for (int i = 0; i < p; ++i) {
        if (p == 1) break;
        Eigen::VectorXd y = batch.data.col(i);
        Eigen::MatrixXd X(n, p - 1);
        std::vector<int> others;
        others.reserve(static_cast<std::size_t>(p - 1));
        for (int t = 0, w = 0; t < p; ++t) {
            if (t == i) continue;
            X.col(w++) = batch.data.col(t);
            others.push_back(t);
        }
        const LassoSolution sol = lasso_cd(y, X, lambda, opts);
        for (int t = 0; t < p - 1; ++t)
            if (sol.beta(t) != 0.0) {
                cand[static_cast<std::size_t>(i)].push_back(others[static_cast<std::size_t>(t)]);
                recovered.add_edge(i, others[static_cast<std::size_t>(t)]);
            }
    }

    StageTrace tr;
    tr.stage = 0;
    tr.ell = 0;
    tr.subset_size = p;
    tr.n_select = n;
    tr.n_verify = 0;
    tr.scalar_total = ledger.scalar_total();
    std::vector<long long> found_at(static_cast<std::size_t>(p), 0);
    return RunResult{std::move(recovered), {std::move(tr)}, std::move(ledger),
                     RunStatus::ok, std::move(found_at), std::move(cand)};
}

}  // namespace agml
