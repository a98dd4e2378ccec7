#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "agml/errors.hpp"
#include "agml/estimators.hpp"
#include "agml/graph.hpp"
#include "agml/model.hpp"
#include "agml/sampler.hpp"
#include "test_util.hpp"

using agml::Graph;

TEST_CASE("empirical covariance is the raw second moment over the support") {
    agml::SampleBatch b;
    b.support = {2, 5, 9};
    b.data.resize(2, 3);
    b.data << 1.0, 2.0, 0.0, 3.0, -1.0, 4.0;
    auto cov = agml::empirical_cov(b);
    CHECK(cov.n == 2);
    CHECK(cov.S_hat(0, 0) == doctest::Approx(5.0));     // (1 + 9) / 2
    CHECK(cov.S_hat(0, 1) == doctest::Approx(-0.5));    // (2 - 3) / 2
    CHECK(cov.S_hat(1, 2) == doctest::Approx(-2.0));    // (0 - 4) / 2
    CHECK(cov.S_hat(2, 2) == doctest::Approx(8.0));     // (0 + 16) / 2
    CHECK(cov.position_of(5) == 1);
    CHECK_THROWS(cov.position_of(3));

    agml::SampleBatch empty;
    empty.support = {0, 1};
    empty.data.resize(0, 2);
    CHECK(agml::empirical_cov(empty).S_hat.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("plugging in the population covariance recovers population partial correlations") {
    auto g = agml::gen_multi_clique_chain(12, {4, 3});
    auto m = agml::precision_from_graph(g, 0.25);
    std::vector<int> sup(12);
    for (int i = 0; i < 12; ++i) sup[i] = i;
    auto cov = agml::cov_from_matrix(m.Sigma, sup, 1000000);

    auto rng = testutil::make_rng(88);
    std::uniform_int_distribution<int> pick(0, 11);
    for (int t = 0; t < 50; ++t) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        std::vector<int> S;
        for (int v = 0; v < 12; ++v)
            if (v != i && v != j && rng() % 4 == 0) S.push_back(v);
        double want = agml::population_partial_correlation(m.Sigma, i, j, S);
        CHECK(agml::empirical_partial_corr_inv(cov, i, j, S) ==
              doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("with no conditioning both estimators reduce to plain correlation") {
    auto m = agml::precision_from_graph(agml::gen_single_clique_chain(6, 3), 0.3);
    auto b = agml::draw(m, {0, 1, 2, 3, 4, 5}, 400, std::uint64_t{7});
    auto cov = agml::empirical_cov(b);
    double plain = cov.S_hat(0, 1) / std::sqrt(cov.S_hat(0, 0) * cov.S_hat(1, 1));
    CHECK(agml::empirical_partial_corr_inv(cov, 0, 1, {}) == doctest::Approx(plain).epsilon(1e-12));
    CHECK(agml::empirical_partial_corr_rec(cov, 0, 1, {}) == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("inversion and recursion routes agree on random batches") {
    // Two structurally different computations of the same quantity; their
    // agreement across random supports is the main correctness evidence.
    auto g = agml::gen_power_law(14, 3, 2, 5);
    auto m = agml::precision_from_graph(g, agml::default_edge_weight(agml::degree_stats(g)));
    auto rng = testutil::make_rng(2211);
    std::uniform_int_distribution<int> pick(0, 13);
    std::uniform_int_distribution<int> nsize(30, 200);
    int done = 0;
    while (done < 100) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        std::vector<int> S;
        for (int v = 0; v < 14; ++v)
            if (v != i && v != j && rng() % 4 == 0) S.push_back(v);
        if (S.size() > 4) S.resize(4);
        std::vector<int> sup = S;
        sup.push_back(i);
        sup.push_back(j);
        std::sort(sup.begin(), sup.end());
        auto b = agml::draw(m, sup, nsize(rng), std::uint64_t(1000 + done));
        auto cov = agml::empirical_cov(b);
        double inv = agml::empirical_partial_corr_inv(cov, i, j, S);
        double rec = agml::empirical_partial_corr_rec(cov, i, j, S);
        CHECK(inv == doctest::Approx(rec).epsilon(1e-9));
        ++done;
    }
}

TEST_CASE("partial correlation estimators enforce their preconditions") {
    auto m = agml::precision_from_graph(agml::gen_single_clique_chain(8, 3), 0.3);
    auto b = agml::draw(m, {0, 1, 2, 3, 4}, 5, std::uint64_t{3});
    auto cov = agml::empirical_cov(b);
    // n = 5 supports |S| <= 2; |S| = 3 must be refused.
    CHECK_NOTHROW(agml::empirical_partial_corr_inv(cov, 0, 1, {2, 3}));
    CHECK_THROWS_AS(agml::empirical_partial_corr_inv(cov, 0, 1, {2, 3, 4}),
                    agml::InsufficientSamplesError);
    CHECK_THROWS_AS(agml::empirical_partial_corr_rec(cov, 0, 1, {2, 3, 4}),
                    agml::InsufficientSamplesError);
    CHECK_THROWS(agml::empirical_partial_corr_inv(cov, 0, 7, {}));  // 7 not in support
}

TEST_CASE("recursion route flags degenerate intermediate correlations") {
    // Duplicated column: rho_{ik} = 1 exactly, so the reduction divides by
    // zero and must say so rather than return garbage.
    Eigen::MatrixXd S(3, 3);
    S << 1.0, 0.3, 1.0, 0.3, 1.0, 0.3, 1.0, 0.3, 1.0;
    auto cov = agml::cov_from_matrix(S, {0, 1, 2}, 100);
    CHECK_THROWS_AS(agml::empirical_partial_corr_rec(cov, 0, 1, {2}),
                    agml::DegenerateCorrelationError);
}

TEST_CASE("clamping keeps noisy estimates inside [-1, 1]") {
    auto m = agml::precision_from_graph(agml::gen_single_clique_chain(6, 4), 0.28);
    for (int rep = 0; rep < 300; ++rep) {
        auto b = agml::draw(m, {0, 1, 2, 3, 4, 5}, 7, std::uint64_t(rep));
        auto cov = agml::empirical_cov(b);
        double r = agml::empirical_partial_corr_inv(cov, 0, 1, {2, 3});
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);
    }
}

TEST_CASE("lasso with overwhelming penalty returns all zeros") {
    auto rng = testutil::make_rng(17);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd X(50, 4);
    Eigen::VectorXd y(50);
    for (int r = 0; r < 50; ++r) {
        y(r) = gauss(rng);
        for (int c = 0; c < 4; ++c) X(r, c) = gauss(rng);
    }
    auto sol = agml::lasso_cd(y, X, 1e6);
    CHECK(sol.beta.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.kkt_residual < 1e-7);
}

TEST_CASE("single-column lasso is a closed-form soft threshold") {
    // With one unit-variance column, beta = sign(b) (|b| - lambda)_+ where
    // b = x.y / n. Build x deterministic with x.x/n = 1 and x.y/n = 0.9.
    Eigen::MatrixXd X(4, 1);
    X << 1.0, 1.0, -1.0, -1.0;
    Eigen::VectorXd y(4);
    y << 1.2, 0.6, -1.2, -0.6;  // b = (1.2 + 0.6 + 1.2 + 0.6) / 4 = 0.9
    auto s1 = agml::lasso_cd(y, X, 0.5);
    CHECK(s1.beta(0) == doctest::Approx(0.4).epsilon(1e-10));
    auto s2 = agml::lasso_cd(y, X, 0.9);
    CHECK(s2.beta(0) == doctest::Approx(0.0));
    auto s3 = agml::lasso_cd(y, X, 0.0);
    CHECK(s3.beta(0) == doctest::Approx(0.9).epsilon(1e-10));
}

TEST_CASE("zero penalty on a square well-conditioned system matches least squares") {
    auto rng = testutil::make_rng(23);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd X(40, 5);
    Eigen::VectorXd y(40);
    for (int r = 0; r < 40; ++r) {
        y(r) = gauss(rng);
        for (int c = 0; c < 5; ++c) X(r, c) = gauss(rng);
    }
    Eigen::VectorXd ols = X.colPivHouseholderQr().solve(y);
    auto sol = agml::lasso_cd(y, X, 0.0, {1e-10, 200000});
    CHECK((sol.beta - ols).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("objective decreases monotonically across sweeps") {
    auto rng = testutil::make_rng(31);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd X(60, 8);
    Eigen::VectorXd y(60);
    for (int r = 0; r < 60; ++r) {
        y(r) = gauss(rng);
        for (int c = 0; c < 8; ++c) X(r, c) = gauss(rng);
    }
    auto sol = agml::lasso_cd(y, X, 0.05);
    REQUIRE(sol.objective_per_sweep.size() >= 2);
    for (std::size_t t = 1; t < sol.objective_per_sweep.size(); ++t)
        CHECK(sol.objective_per_sweep[t] <= sol.objective_per_sweep[t - 1] + 1e-12);
    CHECK(std::abs(sol.objective_per_sweep.back() -
                   testutil::lasso_objective(y, X, sol.beta, 0.05)) < 1e-9);
}

TEST_CASE("coordinate descent finds the global optimum certified by sign enumeration") {
    // The enumeration oracle solves every sign-restricted KKT system
    // explicitly; matching objectives on random instances certifies the
    // iterative solver end to end.
    auto rng = testutil::make_rng(4099);
    std::normal_distribution<double> gauss;
    std::uniform_int_distribution<int> qpick(1, 8);
    std::uniform_real_distribution<double> lpick(0.01, 0.6);
    for (int inst = 0; inst < 50; ++inst) {
        int q = qpick(rng);
        int n = 12 + int(rng() % 40);
        Eigen::MatrixXd X(n, q);
        Eigen::VectorXd beta_true = Eigen::VectorXd::Zero(q);
        for (int c = 0; c < q; ++c)
            if (rng() % 2 == 0) beta_true(c) = gauss(rng);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < q; ++c) X(r, c) = gauss(rng);
        Eigen::VectorXd y = X * beta_true;
        for (int r = 0; r < n; ++r) y(r) += 0.3 * gauss(rng);
        double lambda = lpick(rng);

        auto cd = agml::lasso_cd(y, X, lambda);
        auto enumer = testutil::lasso_sign_enum(y, X, lambda);
        REQUIRE(enumer.found);
        double got = testutil::lasso_objective(y, X, cd.beta, lambda);
        CHECK(got == doctest::Approx(enumer.objective).epsilon(1e-6));
        CHECK((cd.beta - enumer.beta).cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("lasso ignores identically zero columns") {
    Eigen::MatrixXd X(10, 3);
    X.setZero();
    auto rng = testutil::make_rng(5);
    std::normal_distribution<double> gauss;
    for (int r = 0; r < 10; ++r) X(r, 0) = gauss(rng);
    Eigen::VectorXd y = 2.0 * X.col(0);
    auto sol = agml::lasso_cd(y, X, 0.01);
    CHECK(sol.beta(1) == 0.0);
    CHECK(sol.beta(2) == 0.0);
    CHECK(sol.beta(0) > 1.0);
}

TEST_CASE("top-k support keeps the largest magnitudes with ties to low index") {
    Eigen::VectorXd beta(6);
    beta << 0.0, -3.0, 1.0, 3.0, 0.5, 0.0;
    CHECK(agml::top_k_support(beta, 2) == std::vector<int>{1, 3});
    CHECK(agml::top_k_support(beta, 3) == std::vector<int>{1, 2, 3});
    CHECK(agml::top_k_support(beta, 10) == std::vector<int>{1, 2, 3, 4});
    CHECK(agml::top_k_support(Eigen::VectorXd::Zero(4), 2).empty());
    Eigen::VectorXd tie(4);
    tie << 2.0, -2.0, 2.0, 1.0;
    CHECK(agml::top_k_support(tie, 2) == std::vector<int>{0, 1});
}
