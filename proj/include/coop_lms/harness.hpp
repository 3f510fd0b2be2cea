#pragma once

#include "coop_lms/graph.hpp"
#include "coop_lms/simnet.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace coop_lms::harness {

enum class ExperimentKind {
    ase,      // ASE curves per variant
    q_eigen,  // eigenvalues of Q for one sampled scenario
    beta,     // |beta(lambda)| table for each period
    omega,    // relaxation factor per iteration for each period
    comm,     // messages needed to reach the plain-LMS ASE
};

std::string_view to_string(ExperimentKind k);
ExperimentKind parse_kind(std::string_view s);

struct GraphSpec {
    enum class Type { named, er, ba };

    Type type = Type::named;
    std::string name = "karate";  // named graphs
    std::size_t nodes = 0;        // er, ba
    double p = 0.0;               // er
    std::size_t m_attach = 0;     // ba

    static GraphSpec named_graph(std::string name);
    static GraphSpec er(std::size_t nodes, double p);
    static GraphSpec ba(std::size_t nodes, std::size_t m_attach);

    bool is_random() const noexcept { return type != Type::named; }
    /// File-name friendly tag, e.g. "karate", "er_K100_p0.25", "ba_K30_m3".
    std::string label() const;

    friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

struct ExperimentConfig {
    std::string name = "custom";
    ExperimentKind kind = ExperimentKind::ase;
    std::vector<GraphSpec> graphs{GraphSpec::named_graph("karate")};

    std::size_t dim = 3;  // N
    std::size_t obs = 2;  // m
    double sigma = 0.1;
    double epsilon = 0.05;

    double cheb_a = 0.15;
    double cheb_b = 1.0;
    std::vector<std::size_t> periods{1, 2, 6};

    bool include_plain = true;
    bool include_noncoop = true;
    std::vector<double> mu_sweep;   // plain runs with eta from the rule, mu overridden
    std::vector<double> mu_probe;   // extra mu values probed for instability
    std::vector<double> eta_sweep;  // plain runs with mu from the rule, eta overridden
    bool compute_floor = true;      // ASE of the fixed point against x*

    std::size_t iterations = 100;
    std::size_t trials = 100;
    std::uint64_t seed = 2021;
    std::size_t threads = 1;
    std::string output_dir = "out";

    double beta_lo = 0.0;
    double beta_hi = 1.0;
    std::size_t beta_grid = 1001;

    std::size_t comm_max_rounds = 0;  // 0: 2 * iterations

    /// Throws UsageError naming the offending field.
    void validate() const;
};

ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
/// Throws UsageError listing the known presets.
ExperimentConfig preset(std::string_view name);

struct VariantCurve {
    std::string name;
    std::vector<double> mean;                 // per t; NaN when no trial usable
    std::size_t trials_used = 0;
    std::size_t diverged = 0;
    std::vector<std::vector<double>> per_trial;  // [trial][t]; empty row when diverged
};

struct AseCurve {
    std::string graph_label;
    std::size_t iterations = 0;
    std::vector<VariantCurve> variants;
    std::vector<double> floor_per_trial;  // NaN when not computed
    std::vector<int> er_resamples;        // per trial, ER only

    const VariantCurve& variant(std::string_view name) const;
};

struct QSpectrum {
    std::string graph_label;
    double eta = 0.0;
    double mu = 0.0;
    std::vector<double> eigenvalues;
};

struct BetaTable {
    std::vector<std::size_t> periods;
    std::vector<double> lambdas;
    std::vector<std::vector<double>> beta_abs;  // [period index][lambda index]
};

struct OmegaSeries {
    std::size_t period = 0;
    std::vector<double> omega;  // per iteration t
};

struct CommTrial {
    std::size_t trial = 0;
    std::string variant;
    bool reached = false;
    simnet::CommStats stats;
};

struct CommRow {
    std::string variant;
    std::size_t reached = 0;  // trials that hit the target
    simnet::CommStats total;  // summed over trials; misses count max_rounds
};

struct CommSummary {
    std::string graph_label;
    std::vector<CommRow> rows;
    std::vector<CommTrial> trials;

    const CommRow& row(std::string_view variant) const;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<AseCurve> curves;
    std::vector<QSpectrum> spectra;
    BetaTable beta;
    std::vector<OmegaSeries> omegas;
    std::vector<CommSummary> comm;
    double elapsed_seconds = 0.0;
};

/// Runs every trial of `cfg`. Nothing is written to disk.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes the CSV files and meta.json into `dir` (created if needed).
/// Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result,
                                                 const std::filesystem::path& dir);

/// Header `t,variant,mean_ase,trials_used,diverged`, one row per (t, variant),
/// values with 17 significant digits. Throws IoError on an unwritable path.
void emit_csv(const AseCurve& curve, const std::filesystem::path& path);
void emit_csv(const AseCurve& curve, std::ostream& os);

/// %.17g, with "nan"/"inf" spelled out.
std::string format_real(double v);

}  // namespace coop_lms::harness
