#include "coop_lms/errors.hpp"
#include "coop_lms/harness.hpp"

#include <functional>
#include <utility>

namespace coop_lms::harness {

namespace {

// Karate club, N=3, m=2, sigma=0.1, eps=0.05, 100 trials.
ExperimentConfig karate_base(std::string name) {
    ExperimentConfig c;
    c.name = std::move(name);
    c.graphs = {GraphSpec::named_graph("karate")};
    c.dim = 3;
    c.obs = 2;
    c.sigma = 0.1;
    c.epsilon = 0.05;
    c.cheb_a = 0.15;
    c.cheb_b = 1.0;
    c.iterations = 100;
    c.trials = 100;
    return c;
}

// N=10, m=1, sigma=1, [a,b] = [0.2, 1].
ExperimentConfig random_graph_base(std::string name, GraphSpec g) {
    ExperimentConfig c;
    c.name = std::move(name);
    c.graphs = {std::move(g)};
    c.dim = 10;
    c.obs = 1;
    c.sigma = 1.0;
    c.epsilon = 0.05;
    c.cheb_a = 0.2;
    c.cheb_b = 1.0;
    c.periods = {1, 2, 6};
    c.iterations = 100;
    c.trials = 100;
    return c;
}

using Factory = std::function<ExperimentConfig()>;

const std::vector<std::pair<std::string, Factory>>& registry() {
    static const std::vector<std::pair<std::string, Factory>> presets = {
        {"karate_ase",
         [] {
             auto c = karate_base("karate_ase");
             c.periods = {1, 2, 6};
             return c;
         }},
        {"mismatched_mu",
         [] {
             auto c = karate_base("mismatched_mu");
             c.periods = {};
             c.mu_sweep = {0.02, 0.04, 0.06, 0.07};
             c.mu_probe = {0.09};
             return c;
         }},
        {"mismatched_eta",
         [] {
             auto c = karate_base("mismatched_eta");
             c.periods = {};
             c.eta_sweep = {0.02, 0.04, 0.06, 0.08};
             return c;
         }},
        {"q_eigen_hist",
         [] {
             auto c = karate_base("q_eigen_hist");
             c.kind = ExperimentKind::q_eigen;
             c.trials = 1;
             c.iterations = 1;
             return c;
         }},
        {"small_graphs",
         [] {
             ExperimentConfig c;
             c.name = "small_graphs";
             c.graphs = {GraphSpec::named_graph("krackhardt_kite"), GraphSpec::named_graph("chvatal"),
                         GraphSpec::named_graph("pappus"), GraphSpec::named_graph("tutte")};
             c.dim = 20;
             c.obs = 5;
             c.sigma = 1.0;
             c.epsilon = 0.05;
             c.cheb_a = 0.15;
             c.cheb_b = 1.0;
             c.periods = {1, 2, 6};
             c.iterations = 100;
             c.trials = 100;
             return c;
         }},
        {"er_sparse", [] { return random_graph_base("er_sparse", GraphSpec::er(100, 0.05)); }},
        {"er_dense", [] { return random_graph_base("er_dense", GraphSpec::er(100, 0.25)); }},
        {"ba_small", [] { return random_graph_base("ba_small", GraphSpec::ba(30, 3)); }},
        {"ba_large", [] { return random_graph_base("ba_large", GraphSpec::ba(200, 3)); }},
        {"beta_plot",
         [] {
             ExperimentConfig c;
             c.name = "beta_plot";
             c.kind = ExperimentKind::beta;
             c.cheb_a = 0.1;
             c.cheb_b = 1.0;
             c.periods = {1, 2, 4, 8};
             c.beta_lo = 0.0;
             c.beta_hi = 1.0;
             c.beta_grid = 1001;
             c.trials = 1;
             c.iterations = 1;
             return c;
         }},
        {"omega_schedule",
         [] {
             ExperimentConfig c;
             c.name = "omega_schedule";
             c.kind = ExperimentKind::omega;
             c.cheb_a = 0.1;
             c.cheb_b = 1.0;
             c.periods = {1, 2, 6};
             c.iterations = 30;
             c.trials = 1;
             return c;
         }},
        {"comm_cost",
         [] {
             auto c = karate_base("comm_cost");
             c.kind = ExperimentKind::comm;
             c.periods = {6};
             c.iterations = 50;
             c.comm_max_rounds = 100;
             return c;
         }},
    };
    return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [name, _] : registry()) out.push_back(name);
    return out;
}

ExperimentConfig preset(std::string_view name) {
    for (const auto& [key, make] : registry()) {
        if (key == name) return make();
    }
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw UsageError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace coop_lms::harness
