// coop-lms: experiment driver for cooperative / Chebyshev-accelerated LMS.
//
//   coop-lms run --preset karate_ase [--seed S] [--trials N] [--iters L] [--out DIR]
//   coop-lms run --config experiment.json
//   coop-lms list-presets
//   coop-lms show-config --preset er_dense
//   coop-lms graph --name karate --emit-edgelist

#include "coop_lms/errors.hpp"
#include "coop_lms/graph.hpp"
#include "coop_lms/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace coop_lms;

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative LMS over agent networks with Chebyshev PSOR acceleration"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an experiment and write CSV files plus meta.json");
    std::string preset_name;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> iters;
    std::optional<std::size_t> threads;
    std::optional<std::string> out_dir;
    auto* preset_opt = run->add_option("--preset", preset_name, "Named preset (see list-presets)");
    auto* config_opt = run->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    preset_opt->excludes(config_opt);
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
    run->add_option("--iters", iters, "Iterations L")->check(CLI::PositiveNumber);
    run->add_option("--threads", threads, "Worker threads for trials")->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "Output directory");

    auto* list = app.add_subcommand("list-presets", "List built-in presets");

    auto* show = app.add_subcommand("show-config", "Print a preset as a JSON config");
    std::string show_name;
    show->add_option("--preset", show_name, "Preset name")->required();

    auto* graph_cmd = app.add_subcommand("graph", "Inspect a named graph");
    std::string graph_name = "karate";
    bool emit_edges = false;
    graph_cmd->add_option("--name", graph_name, "karate, krackhardt_kite, chvatal, pappus or tutte");
    graph_cmd->add_flag("--emit-edgelist", emit_edges, "Write the edge list to stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            if (preset_name.empty() && config_path.empty()) throw UsageError("run: give --preset or --config");
            harness::ExperimentConfig cfg = preset_name.empty() ? harness::config_from_json(read_file(config_path))
                                                                : harness::preset(preset_name);
            if (seed) cfg.seed = *seed;
            if (trials) cfg.trials = *trials;
            if (iters) cfg.iterations = *iters;
            if (threads) cfg.threads = *threads;
            if (out_dir) cfg.output_dir = *out_dir;
            cfg.validate();

            const auto result = harness::run_experiment(cfg);
            for (const auto& path : harness::write_outputs(result, cfg.output_dir)) {
                std::cout << path.string() << '\n';
            }
            std::cerr << cfg.name << ": " << result.elapsed_seconds << " s\n";
        } else if (*list) {
            for (const auto& name : harness::preset_names()) std::cout << name << '\n';
        } else if (*show) {
            std::cout << harness::config_to_json(harness::preset(show_name)) << '\n';
        } else if (*graph_cmd) {
            const auto g = graph::named_graph(graph_name);
            if (emit_edges) {
                graph::write_edge_list(std::cout, g);
            } else {
                std::cout << graph_name << ": |V|=" << g.node_count() << " |E|=" << g.edge_count()
                          << " lambda_max(L)=" << harness::format_real(graph::laplacian_lambda_max(g)) << '\n';
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
