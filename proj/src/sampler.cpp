#include "agml/sampler.hpp"

#include <stdexcept>

#include "agml/errors.hpp"

namespace agml {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(root ^ splitmix64(a)) ^ splitmix64(~b));
}

SampleBatch draw(const GaussianModel& m, const std::vector<int>& S, long long n,
                 std::mt19937_64& rng) {
    if (S.empty()) throw std::invalid_argument("draw: empty support");
    if (n < 0) throw std::invalid_argument("draw: negative sample count");
    const int k = static_cast<int>(S.size());
    for (int v : S)
        if (v < 0 || v >= m.p()) throw std::out_of_range("draw: vertex out of range");

    Eigen::MatrixXd sub(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            sub(r, c) = m.Sigma(S[static_cast<std::size_t>(r)], S[static_cast<std::size_t>(c)]);
    Eigen::LLT<Eigen::MatrixXd> llt(sub);
    if (llt.info() != Eigen::Success)
        throw Error("draw: covariance submatrix is not positive definite");

    SampleBatch batch{S, Eigen::MatrixXd(n, k)};
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (long long r = 0; r < n; ++r)
        for (int c = 0; c < k; ++c) batch.data(r, c) = gauss(rng);
    batch.data = batch.data * Eigen::MatrixXd(llt.matrixL()).transpose();
    return batch;
}

SampleBatch draw(const GaussianModel& m, const std::vector<int>& S, long long n,
                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return draw(m, S, n, rng);
}

SamplingLedger::SamplingLedger(std::optional<long long> budget) : budget_(budget) {}

void SamplingLedger::record(const std::vector<int>& support, long long n) {
    if (n < 0) throw std::invalid_argument("SamplingLedger::record: negative n");
    scalar_total_ += static_cast<long long>(support.size()) * n;
    stages_.push_back(LedgerStage{support, n});
}

long long SamplingLedger::recompute_total() const {
    long long total = 0;
    for (const auto& st : stages_) total += static_cast<long long>(st.support.size()) * st.n;
    return total;
}

int ceil_log2(long long d) {
    if (d <= 1) return 0;
    int k = 0;
    long long v = 1;
    while (v < d) {
        v <<= 1;
        ++k;
    }
    return k;
}

long long sufficient_budget(const DegreeStats& stats, const StageSizeFn& g,
                            const StageSizeFn& h) {
    long long total = 0;
    for (int lm : stats.local_max) {
        const int kmax = ceil_log2(lm);
        for (int k = 0; k <= kmax; ++k) {
            const long long ell = 1LL << k;
            total += g(ell) + h(ell);
        }
    }
    return total;
}

}  // namespace agml
