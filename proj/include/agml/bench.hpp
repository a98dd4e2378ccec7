#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "agml/engine.hpp"

namespace agml {

// One recovery attempt. effective_samples = scalar_total / p, which for the
// passive baseline is just its per-vertex n. For baseline rows the c column
// carries the per-vertex n (grid scans) or the paired active c (paired runs).
struct TrialReport {
    std::string algo;
    std::string graph_id;
    std::uint64_t seed = 0;
    double c = 0.0;
    long long hamming = 0;
    bool exact = false;
    long long scalar_total = 0;
    double effective_samples = 0.0;
    double edges_correct = 0.0;
    std::string status = "ok";
};

struct ESCSummary {
    std::string algo;
    std::string graph_id;
    double target = 1.0;
    double mean_esc = 0.0;  // NaN when every trial is censored
    int trials = 0;
    int censored = 0;
};

struct HammingPoint {
    std::string algo;
    double c = 0.0;
    double mean_effective_samples = 0.0;
    double mean_hamming = 0.0;
    int trials = 0;
};

// Flat key = value configuration for a benchmark battery. Zero means "auto"
// for edge_weight (0.3 / sqrt(d_max)) and xi (half the smallest edge partial
// correlation of the generated model).
struct BatteryConfig {
    std::string family = "single-clique";  // single-clique | multi-clique | power-law | chain
    int p = 60;
    int clique = 12;
    std::vector<int> cliques;
    int seed_size = 5;
    int edges_per_step = 1;
    std::uint64_t graph_seed = 1;

    std::string weight_mode = "flat";  // flat | degree-normalized
    double edge_weight = 0.0;
    double diag_boost = 0.0;

    std::string algo = "ampl";  // adpact | ampl | mb | paired
    std::vector<double> c_grid = {2.0};
    double xi = 0.0;
    double lambda0 = 1.0;

    long long budget = 0;                    // > 0 overrides budget_rule
    std::string budget_rule = "unlimited";   // unlimited | scaled
    double budget_c_mult = 3.0;              // scaled rule: B = 2 (mult c) dbar p ln p

    int trials = 10;
    std::uint64_t root_seed = 1;

    std::vector<long long> mb_n_grid;  // explicit grid; empty = geometric
    long long mb_n_min = 50;
    long long mb_n_max = 8000;
    double mb_grid_ratio = 1.3;

    long long enum_cap = 10'000'000;
    double lasso_tol = 1e-7;
    long long lasso_max_iter = 100000;
};

BatteryConfig parse_config(std::istream& in);
BatteryConfig load_config(const std::string& path);
void echo_config(const BatteryConfig& cfg, std::ostream& out);  // "# key = value" lines

Graph battery_graph(const BatteryConfig& cfg);
std::string battery_graph_id(const BatteryConfig& cfg);
GaussianModel battery_model(const BatteryConfig& cfg, const Graph& g);
double resolve_xi(const BatteryConfig& cfg, const GaussianModel& m);
std::optional<long long> resolve_budget(const BatteryConfig& cfg, double c,
                                        const DegreeStats& stats);
std::vector<long long> mb_grid(const BatteryConfig& cfg);

// Runs trials x c-grid recovery attempts (or trials x n-grid for the passive
// baseline; "paired" runs the active algorithm and hands each trial's
// effective sample count to the baseline as its per-vertex n). Individual
// trial failures become status entries, never exceptions. Deterministic for
// a fixed config.
std::vector<TrialReport> run_battery(const BatteryConfig& cfg);

// Mean effective samples to reach the target edge fraction (1.0 = exact).
// Active rows use each attaining trial's own cost; baseline grid rows are
// scanned per seed for the smallest attaining n. Censored trials never
// attain the target and are excluded from the mean.
std::vector<ESCSummary> esc_summary(const std::vector<TrialReport>& reports,
                                    double target);

// (mean effective samples, mean hamming) per (algo, c), sorted by cost.
std::vector<HammingPoint> hamming_curve(const std::vector<TrialReport>& reports);

// Empirical tail of the partial-correlation estimator: frequency of
// |rho_hat - rho| >= eps over fresh batches of each size in n_grid. Every n
// must satisfy n >= |S| + 3.
struct DecayRow {
    long long n = 0;
    double freq = 0.0;
};
struct DecayTable {
    double eps = 0.0;
    long long replicates = 0;
    std::vector<DecayRow> rows;
};

DecayTable estimator_tail_probe(const GaussianModel& m, int i, int j,
                              const std::vector<int>& S, double eps,
                              const std::vector<long long>& n_grid,
                              long long replicates, std::uint64_t seed);

// CSV encodings (stable column order, bools as 0/1, NaN spelled "nan").
void write_trial_reports(const std::vector<TrialReport>& reports, std::ostream& out);
std::vector<TrialReport> parse_trial_reports(std::istream& in);
void write_esc_summaries(const std::vector<ESCSummary>& summaries, std::ostream& out);
void write_hamming_curve(const std::vector<HammingPoint>& points, std::ostream& out);
void write_trace_csv(const RunResult& run, std::ostream& out);
void write_decay_table(const DecayTable& table, std::ostream& out);

}  // namespace agml
