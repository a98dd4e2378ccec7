#include "agml/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "agml/errors.hpp"

namespace agml {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    for (const auto& tok : split(s, ',')) {
        if (tok.empty()) continue;
        std::stringstream ss(tok);
        T v;
        if (!(ss >> v)) throw std::runtime_error("config: bad list element '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

BatteryConfig parse_config(std::istream& in) {
    BatteryConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "family") cfg.family = val;
            else if (key == "p") cfg.p = std::stoi(val);
            else if (key == "clique") cfg.clique = std::stoi(val);
            else if (key == "cliques") cfg.cliques = parse_list<int>(val);
            else if (key == "seed_size") cfg.seed_size = std::stoi(val);
            else if (key == "edges_per_step") cfg.edges_per_step = std::stoi(val);
            else if (key == "graph_seed") cfg.graph_seed = std::stoull(val);
            else if (key == "weight_mode") cfg.weight_mode = val;
            else if (key == "edge_weight") cfg.edge_weight = std::stod(val);
            else if (key == "diag_boost") cfg.diag_boost = std::stod(val);
            else if (key == "algo") cfg.algo = val;
            else if (key == "c_grid") cfg.c_grid = parse_list<double>(val);
            else if (key == "xi") cfg.xi = std::stod(val);
            else if (key == "lambda0") cfg.lambda0 = std::stod(val);
            else if (key == "budget") cfg.budget = std::stoll(val);
            else if (key == "budget_rule") cfg.budget_rule = val;
            else if (key == "budget_c_mult") cfg.budget_c_mult = std::stod(val);
            else if (key == "trials") cfg.trials = std::stoi(val);
            else if (key == "root_seed") cfg.root_seed = std::stoull(val);
            else if (key == "mb_n_grid") cfg.mb_n_grid = parse_list<long long>(val);
            else if (key == "mb_n_min") cfg.mb_n_min = std::stoll(val);
            else if (key == "mb_n_max") cfg.mb_n_max = std::stoll(val);
            else if (key == "mb_grid_ratio") cfg.mb_grid_ratio = std::stod(val);
            else if (key == "enum_cap") cfg.enum_cap = std::stoll(val);
            else if (key == "lasso_tol") cfg.lasso_tol = std::stod(val);
            else if (key == "lasso_max_iter") cfg.lasso_max_iter = std::stoll(val);
            else throw std::runtime_error("config: unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": bad value for '" + key + "'");
        }
    }
    return cfg;
}

BatteryConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    return parse_config(in);
}

void echo_config(const BatteryConfig& c, std::ostream& out) {
    out << "# family = " << c.family << "\n# p = " << c.p
        << "\n# clique = " << c.clique << "\n# cliques =";
    for (int s : c.cliques) out << " " << s;
    out << "\n# seed_size = " << c.seed_size
        << "\n# edges_per_step = " << c.edges_per_step
        << "\n# graph_seed = " << c.graph_seed
        << "\n# weight_mode = " << c.weight_mode
        << "\n# edge_weight = " << c.edge_weight
        << "\n# diag_boost = " << c.diag_boost << "\n# algo = " << c.algo
        << "\n# c_grid =";
    for (double v : c.c_grid) out << " " << v;
    out << "\n# xi = " << c.xi << "\n# lambda0 = " << c.lambda0
        << "\n# budget = " << c.budget << "\n# budget_rule = " << c.budget_rule
        << "\n# budget_c_mult = " << c.budget_c_mult
        << "\n# trials = " << c.trials << "\n# root_seed = " << c.root_seed
        << "\n# mb_n_min = " << c.mb_n_min << "\n# mb_n_max = " << c.mb_n_max
        << "\n# mb_grid_ratio = " << c.mb_grid_ratio
        << "\n# enum_cap = " << c.enum_cap << "\n";
}

Graph battery_graph(const BatteryConfig& cfg) {
    if (cfg.family == "single-clique")
        return gen_single_clique_chain(cfg.p, cfg.clique);
    if (cfg.family == "multi-clique")
        return gen_multi_clique_chain(cfg.p, cfg.cliques);
    if (cfg.family == "power-law")
        return gen_power_law(cfg.p, cfg.seed_size, cfg.edges_per_step, cfg.graph_seed);
    if (cfg.family == "chain") return gen_multi_clique_chain(cfg.p, {});
    throw std::runtime_error("battery_graph: unknown family '" + cfg.family + "'");
}

std::string battery_graph_id(const BatteryConfig& cfg) {
    std::ostringstream id;
    id << cfg.family << "-p" << cfg.p;
    if (cfg.family == "single-clique") id << "-k" << cfg.clique;
    if (cfg.family == "multi-clique") {
        id << "-k";
        for (std::size_t t = 0; t < cfg.cliques.size(); ++t)
            id << (t ? "." : "") << cfg.cliques[t];
    }
    if (cfg.family == "power-law")
        id << "-s" << cfg.seed_size << "-m" << cfg.edges_per_step << "-g" << cfg.graph_seed;
    return id.str();
}

GaussianModel battery_model(const BatteryConfig& cfg, const Graph& g) {
    double w = cfg.edge_weight;
    if (w == 0.0) w = default_edge_weight(degree_stats(g));
    if (cfg.weight_mode == "flat") return precision_from_graph(g, w, cfg.diag_boost);
    if (cfg.weight_mode == "degree-normalized")
        return precision_from_graph_normalized(g, w, cfg.diag_boost);
    throw std::runtime_error("battery_model: unknown weight_mode '" + cfg.weight_mode + "'");
}

double resolve_xi(const BatteryConfig& cfg, const GaussianModel& m) {
    if (cfg.xi != 0.0) return cfg.xi;
    return 0.5 * min_edge_partial_correlation(m);
}

std::optional<long long> resolve_budget(const BatteryConfig& cfg, double c,
                                        const DegreeStats& stats) {
    if (cfg.budget > 0) return cfg.budget;
    if (cfg.budget_rule == "unlimited") return std::nullopt;
    if (cfg.budget_rule == "scaled") {
        const double p = static_cast<double>(stats.degree.size());
        return static_cast<long long>(std::llround(
            2.0 * cfg.budget_c_mult * c * stats.dbar_max * p * std::log(p)));
    }
    throw std::runtime_error("resolve_budget: unknown budget_rule '" + cfg.budget_rule + "'");
}

std::vector<long long> mb_grid(const BatteryConfig& cfg) {
    if (!cfg.mb_n_grid.empty()) {
        auto grid = cfg.mb_n_grid;
        std::sort(grid.begin(), grid.end());
        return grid;
    }
    if (cfg.mb_n_min < 1 || cfg.mb_n_max < cfg.mb_n_min || cfg.mb_grid_ratio <= 1.0)
        throw std::runtime_error("mb_grid: bad geometric grid parameters");
    std::vector<long long> grid;
    double v = static_cast<double>(cfg.mb_n_min);
    while (true) {
        const long long n = static_cast<long long>(std::llround(v));
        if (grid.empty() || n != grid.back()) grid.push_back(n);
        if (n >= cfg.mb_n_max) break;
        v *= cfg.mb_grid_ratio;
    }
    if (grid.back() > cfg.mb_n_max) grid.back() = cfg.mb_n_max;
    return grid;
}

namespace {

TrialReport score_run(const RunResult& run, const Graph& truth,
                      const std::string& algo, const std::string& graph_id,
                      std::uint64_t seed, double c) {
    TrialReport r;
    r.algo = algo;
    r.graph_id = graph_id;
    r.seed = seed;
    r.c = c;
    r.hamming = hamming_distance(truth, run.graph);
    r.exact = (r.hamming == 0);
    r.scalar_total = run.ledger.scalar_total();
    r.effective_samples = static_cast<double>(r.scalar_total) / truth.p();
    r.edges_correct = edges_correct_fraction(truth, run.graph);
    r.status = to_string(run.status);
    return r;
}

TrialReport failed_trial(const Graph& truth, const std::string& algo,
                         const std::string& graph_id, std::uint64_t seed, double c,
                         const std::string& status) {
    TrialReport r;
    r.algo = algo;
    r.graph_id = graph_id;
    r.seed = seed;
    r.c = c;
    r.hamming = truth.edge_count();
    r.exact = (truth.edge_count() == 0);
    r.edges_correct = truth.edge_count() == 0 ? 1.0 : 0.0;
    r.status = status;
    return r;
}

std::string status_of(const Error& e) {
    if (dynamic_cast<const EnumerationCapError*>(&e)) return "enum_cap_exceeded";
    return "error";
}

}  // namespace

std::vector<TrialReport> run_battery(const BatteryConfig& cfg) {
    if (cfg.trials < 0) throw std::invalid_argument("run_battery: negative trials");
    const Graph truth = battery_graph(cfg);
    const std::string graph_id = battery_graph_id(cfg);
    const GaussianModel model = battery_model(cfg, truth);
    const DegreeStats stats = degree_stats(truth);
    const double xi = resolve_xi(cfg, model);
    const LassoOptions lasso{cfg.lasso_tol, cfg.lasso_max_iter};
    const SampleFn oracle = model_oracle(model);

    std::vector<TrialReport> reports;

    auto run_active = [&](const std::string& algo, double c, std::uint64_t seed) {
        const SubroutinePair subs =
            algo == "adpact" ? adpact_pair(c, xi, cfg.p, cfg.enum_cap)
                             : ampl_pair(c, xi, cfg.lambda0, cfg.p, lasso);
        const auto budget = resolve_budget(cfg, c, stats);
        try {
            const RunResult run = run_meta(cfg.p, oracle, subs, budget, seed);
            return score_run(run, truth, algo, graph_id, seed, c);
        } catch (const Error& e) {
            return failed_trial(truth, algo, graph_id, seed, c, status_of(e));
        }
    };
    auto run_baseline = [&](long long n, std::uint64_t seed, double c_column) {
        const double lambda =
            cfg.lambda0 * std::sqrt(std::log(static_cast<double>(cfg.p)) /
                                    static_cast<double>(n));
        try {
            const RunResult run = mb_passive(model, n, lambda, seed, lasso);
            return score_run(run, truth, "mb", graph_id, seed, c_column);
        } catch (const Error& e) {
            return failed_trial(truth, "mb", graph_id, seed, c_column, status_of(e));
        }
    };

    // Seed streams: actives use (ci, t), grid baselines (10^5, t), paired
    // baselines (2 * 10^5 + ci, t); disjoint lanes per purpose. A whole
    // baseline n-scan shares one seed so the scan reads as "how much of this
    // sample stream is enough", and so the summary can group the scan rows.
    if (cfg.algo == "adpact" || cfg.algo == "ampl") {
        for (std::size_t ci = 0; ci < cfg.c_grid.size(); ++ci)
            for (int t = 0; t < cfg.trials; ++t)
                reports.push_back(run_active(cfg.algo, cfg.c_grid[ci],
                                             derive_seed(cfg.root_seed, ci, t)));
    } else if (cfg.algo == "mb") {
        const auto grid = mb_grid(cfg);
        for (std::size_t ni = 0; ni < grid.size(); ++ni)
            for (int t = 0; t < cfg.trials; ++t)
                reports.push_back(run_baseline(
                    grid[ni], derive_seed(cfg.root_seed, 100000, t),
                    static_cast<double>(grid[ni])));
    } else if (cfg.algo == "paired") {
        for (std::size_t ci = 0; ci < cfg.c_grid.size(); ++ci)
            for (int t = 0; t < cfg.trials; ++t) {
                const double c = cfg.c_grid[ci];
                TrialReport active =
                    run_active("ampl", c, derive_seed(cfg.root_seed, ci, t));
                const long long n_mb = std::max<long long>(
                    1, std::llround(active.effective_samples));
                reports.push_back(std::move(active));
                reports.push_back(run_baseline(
                    n_mb, derive_seed(cfg.root_seed, 200000 + ci, t), c));
            }
    } else {
        throw std::runtime_error("run_battery: unknown algo '" + cfg.algo + "'");
    }
    return reports;
}

namespace {

bool attained(const TrialReport& r, double target) {
    if (target >= 1.0) return r.exact;
    return r.edges_correct >= target;
}

}  // namespace

std::vector<ESCSummary> esc_summary(const std::vector<TrialReport>& reports,
                                    double target) {
    std::map<std::pair<std::string, std::string>, std::vector<const TrialReport*>> groups;
    for (const auto& r : reports) groups[{r.algo, r.graph_id}].push_back(&r);

    std::vector<ESCSummary> out;
    for (const auto& [key, rows] : groups) {
        ESCSummary s;
        s.algo = key.first;
        s.graph_id = key.second;
        s.target = target;
        std::vector<double> values;
        if (s.algo == "mb") {
            // Grid scan: per seed, the smallest n whose fresh draw attains
            // the target.
            std::map<std::uint64_t, std::vector<const TrialReport*>> by_seed;
            for (const auto* r : rows) by_seed[r->seed].push_back(r);
            for (auto& [seed, trials] : by_seed) {
                std::sort(trials.begin(), trials.end(),
                          [](const TrialReport* a, const TrialReport* b) {
                              return a->effective_samples < b->effective_samples;
                          });
                ++s.trials;
                bool hit = false;
                for (const auto* r : trials)
                    if (attained(*r, target)) {
                        values.push_back(r->effective_samples);
                        hit = true;
                        break;
                    }
                if (!hit) ++s.censored;
            }
        } else {
            for (const auto* r : rows) {
                ++s.trials;
                if (attained(*r, target))
                    values.push_back(r->effective_samples);
                else
                    ++s.censored;
            }
        }
        if (values.empty()) {
            s.mean_esc = std::numeric_limits<double>::quiet_NaN();
        } else {
            double sum = 0.0;
            for (double v : values) sum += v;
            s.mean_esc = sum / static_cast<double>(values.size());
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<HammingPoint> hamming_curve(const std::vector<TrialReport>& reports) {
    std::map<std::pair<std::string, double>, std::vector<const TrialReport*>> groups;
    for (const auto& r : reports) groups[{r.algo, r.c}].push_back(&r);
    std::vector<HammingPoint> out;
    for (const auto& [key, rows] : groups) {
        HammingPoint pt;
        pt.algo = key.first;
        pt.c = key.second;
        pt.trials = static_cast<int>(rows.size());
        double se = 0.0, sh = 0.0;
        for (const auto* r : rows) {
            se += r->effective_samples;
            sh += static_cast<double>(r->hamming);
        }
        pt.mean_effective_samples = se / pt.trials;
        pt.mean_hamming = sh / pt.trials;
        out.push_back(pt);
    }
    std::sort(out.begin(), out.end(), [](const HammingPoint& a, const HammingPoint& b) {
        if (a.algo != b.algo) return a.algo < b.algo;
        return a.mean_effective_samples < b.mean_effective_samples;
    });
    return out;
}

DecayTable estimator_tail_probe(const GaussianModel& m, int i, int j,
                              const std::vector<int>& S, double eps,
                              const std::vector<long long>& n_grid,
                              long long replicates, std::uint64_t seed) {
    if (replicates < 1) throw std::invalid_argument("estimator_tail_probe: replicates < 1");
    for (long long n : n_grid)
        if (n < static_cast<long long>(S.size()) + 3)
            throw std::invalid_argument("estimator_tail_probe: need n >= |S| + 3");

    const double rho = population_partial_correlation(m.Sigma, i, j, S);
    std::vector<int> support{i, j};
    support.insert(support.end(), S.begin(), S.end());
    std::sort(support.begin(), support.end());

    DecayTable table;
    table.eps = eps;
    table.replicates = replicates;
    for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
        const long long n = n_grid[ni];
        long long exceed = 0;
        for (long long r = 0; r < replicates; ++r) {
            const SampleBatch batch =
                draw(m, support, n, derive_seed(seed, ni, static_cast<std::uint64_t>(r)));
            const double rho_hat =
                empirical_partial_corr_inv(empirical_cov(batch), i, j, S);
            if (std::abs(rho_hat - rho) >= eps) ++exceed;
        }
        table.rows.push_back(
            DecayRow{n, static_cast<double>(exceed) / static_cast<double>(replicates)});
    }
    return table;
}

void write_trial_reports(const std::vector<TrialReport>& reports, std::ostream& out) {
    out.precision(12);
    out << "algo,graph,seed,c,hamming,exact,scalar_total,effective_samples,"
           "edges_correct_fraction,status\n";
    for (const auto& r : reports)
        out << r.algo << ',' << r.graph_id << ',' << r.seed << ',' << r.c << ','
            << r.hamming << ',' << (r.exact ? 1 : 0) << ',' << r.scalar_total << ','
            << r.effective_samples << ',' << r.edges_correct << ',' << r.status << "\n";
}

std::vector<TrialReport> parse_trial_reports(std::istream& in) {
    std::vector<TrialReport> out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("algo,", 0) == 0) continue;  // header row
        }
        const auto f = split(line, ',');
        if (f.size() != 10)
            throw std::runtime_error("parse_trial_reports: expected 10 fields");
        TrialReport r;
        r.algo = f[0];
        r.graph_id = f[1];
        r.seed = std::stoull(f[2]);
        r.c = std::stod(f[3]);
        r.hamming = std::stoll(f[4]);
        r.exact = (f[5] == "1");
        r.scalar_total = std::stoll(f[6]);
        r.effective_samples = std::stod(f[7]);
        r.edges_correct = std::stod(f[8]);
        r.status = f[9];
        out.push_back(std::move(r));
    }
    return out;
}

void write_esc_summaries(const std::vector<ESCSummary>& summaries, std::ostream& out) {
    out.precision(12);
    out << "algo,graph,target,mean_esc,trials,censored\n";
    for (const auto& s : summaries)
        out << s.algo << ',' << s.graph_id << ',' << s.target << ',' << s.mean_esc
            << ',' << s.trials << ',' << s.censored << "\n";
}

void write_hamming_curve(const std::vector<HammingPoint>& points, std::ostream& out) {
    out.precision(12);
    out << "algo,c,mean_effective_samples,mean_hamming,trials\n";
    for (const auto& p : points)
        out << p.algo << ',' << p.c << ',' << p.mean_effective_samples << ','
            << p.mean_hamming << ',' << p.trials << "\n";
}

void write_trace_csv(const RunResult& run, std::ostream& out) {
    out << "stage,ell,subset_size,n_select,n_verify,scalar_total\n";
    for (const auto& t : run.trace)
        out << t.stage << ',' << t.ell << ',' << t.subset_size << ',' << t.n_select
            << ',' << t.n_verify << ',' << t.scalar_total << "\n";
}

void write_decay_table(const DecayTable& table, std::ostream& out) {
    out.precision(12);
    out << "n,freq,eps,replicates\n";
    for (const auto& row : table.rows)
        out << row.n << ',' << row.freq << ',' << table.eps << ',' << table.replicates
            << "\n";
}

}  // namespace agml
