#include "coop_lms/chebyshev.hpp"
#include "coop_lms/errors.hpp"
#include "coop_lms/harness.hpp"
#include "coop_lms/lms.hpp"
#include "coop_lms/rng.hpp"
#include "coop_lms/simnet.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

namespace coop_lms::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string real_tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct VariantSpec {
    enum class Kind { noncoop, plain, chebyshev };
    std::string name;
    Kind kind = Kind::plain;
    std::optional<chebyshev::ChebyshevSchedule> schedule;
    std::optional<double> mu;   // override
    std::optional<double> eta;  // override
};

std::vector<VariantSpec> variant_specs(const ExperimentConfig& cfg) {
    using Kind = VariantSpec::Kind;
    std::vector<VariantSpec> out;
    if (cfg.include_noncoop) out.push_back({"noncoop", Kind::noncoop, {}, {}, {}});
    if (cfg.include_plain) out.push_back({"plain", Kind::plain, {}, {}, {}});
    for (auto t : cfg.periods) {
        out.push_back({"cheb_T" + std::to_string(t), Kind::chebyshev,
                       chebyshev::chebyshev_factors(cfg.cheb_a, cfg.cheb_b, t), {}, {}});
    }
    for (double mu : cfg.mu_sweep) out.push_back({"mu_" + real_tag(mu), Kind::plain, {}, mu, {}});
    for (double mu : cfg.mu_probe) out.push_back({"mu_" + real_tag(mu), Kind::plain, {}, mu, {}});
    for (double eta : cfg.eta_sweep) out.push_back({"eta_" + real_tag(eta), Kind::plain, {}, {}, eta});
    return out;
}

struct TrialGraph {
    graph::Graph graph;
    int resamples = 0;
};

TrialGraph make_graph(const GraphSpec& spec, const graph::Graph* fixed, Rng& rng) {
    switch (spec.type) {
        case GraphSpec::Type::named: return {*fixed, 0};
        case GraphSpec::Type::er: {
            auto r = graph::gen_er(spec.nodes, spec.p, rng);
            return {std::move(r.graph), r.resamples};
        }
        case GraphSpec::Type::ba: return {graph::gen_ba(spec.nodes, spec.m_attach, rng), 0};
    }
    throw UsageError("unknown graph type");
}

struct TrialScenario {
    lms::Scenario scenario;
    int resamples;
};

TrialScenario trial_scenario(const ExperimentConfig& cfg, const GraphSpec& spec, const graph::Graph* fixed,
                             std::size_t trial) {
    Rng graph_rng = make_stream(cfg.seed, trial, streams::graph);
    Rng scen_rng = make_stream(cfg.seed, trial, streams::scenario);
    auto g = make_graph(spec, fixed, graph_rng);
    return {lms::sample_scenario(g.graph, cfg.dim, cfg.obs, cfg.sigma, cfg.epsilon, scen_rng), g.resamples};
}

/// Runs body(i) for i in [0, n) on `threads` workers. Results are written by
/// index, so the outcome does not depend on the schedule.
template <typename Body>
void for_each_trial(std::size_t n, std::size_t threads, Body&& body) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

struct AseTrial {
    std::vector<std::vector<double>> curves;  // per variant; empty when diverged
    double floor = kNaN;
    int resamples = 0;
};

std::vector<double> ase_curve(const lms::Trajectory& traj, const lms::Vector& reference) {
    std::vector<double> out;
    out.reserve(traj.states.size());
    for (const auto& st : traj.states) out.push_back(lms::ase(st, reference));
    return out;
}

AseTrial run_ase_trial(const ExperimentConfig& cfg, const GraphSpec& spec, const graph::Graph* fixed,
                       const std::vector<VariantSpec>& variants, std::size_t trial) {
    auto [s, resamples] = trial_scenario(cfg, spec, fixed, trial);
    const lms::Vector reference = lms::lms_solution(s);

    AseTrial out;
    out.resamples = resamples;
    for (const auto& v : variants) {
        using Kind = VariantSpec::Kind;
        if (v.kind == Kind::noncoop) {
            out.curves.emplace_back(cfg.iterations + 1, lms::noncooperative_ase(s));
            continue;
        }
        const lms::Scenario run_s = (v.mu || v.eta)
                                        ? s.with_steps({v.eta.value_or(s.eta()), v.mu.value_or(s.mu())})
                                        : s;
        const lms::Trajectory traj = v.kind == Kind::chebyshev
                                         ? lms::run_chebyshev_lms(run_s, cfg.iterations, *v.schedule)
                                         : lms::run_cooperative_lms(run_s, cfg.iterations);
        out.curves.push_back(traj.diverged() ? std::vector<double>{} : ase_curve(traj, reference));
    }
    if (cfg.compute_floor) {
        try {
            out.floor = lms::ase(lms::fixed_point(s), reference);
        } catch (const NumericError&) {
            out.floor = kNaN;
        }
    }
    return out;
}

AseCurve run_ase(const ExperimentConfig& cfg, const GraphSpec& spec) {
    const auto variants = variant_specs(cfg);
    std::optional<graph::Graph> fixed;
    if (!spec.is_random()) fixed = graph::named_graph(spec.name);

    std::vector<AseTrial> trials(cfg.trials);
    for_each_trial(cfg.trials, cfg.threads, [&](std::size_t i) {
        trials[i] = run_ase_trial(cfg, spec, fixed ? &*fixed : nullptr, variants, i);
    });

    AseCurve curve;
    curve.graph_label = spec.label();
    curve.iterations = cfg.iterations;
    for (std::size_t v = 0; v < variants.size(); ++v) {
        VariantCurve vc;
        vc.name = variants[v].name;
        std::vector<double> sum(cfg.iterations + 1, 0.0);
        for (const auto& tr : trials) {  // ascending trial index
            const auto& row = tr.curves[v];
            vc.per_trial.push_back(row);
            if (row.empty()) {
                ++vc.diverged;
                continue;
            }
            ++vc.trials_used;
            for (std::size_t t = 0; t < row.size(); ++t) sum[t] += row[t];
        }
        vc.mean.resize(sum.size());
        for (std::size_t t = 0; t < sum.size(); ++t) {
            vc.mean[t] = vc.trials_used ? sum[t] / static_cast<double>(vc.trials_used) : kNaN;
        }
        curve.variants.push_back(std::move(vc));
    }
    for (const auto& tr : trials) {
        curve.floor_per_trial.push_back(tr.floor);
        if (spec.type == GraphSpec::Type::er) curve.er_resamples.push_back(tr.resamples);
    }
    return curve;
}

QSpectrum run_q_eigen(const ExperimentConfig& cfg, const GraphSpec& spec) {
    std::optional<graph::Graph> fixed;
    if (!spec.is_random()) fixed = graph::named_graph(spec.name);
    auto ts = trial_scenario(cfg, spec, fixed ? &*fixed : nullptr, 0);
    return {spec.label(), ts.scenario.eta(), ts.scenario.mu(), lms::q_eigvals(ts.scenario)};
}

BetaTable run_beta(const ExperimentConfig& cfg) {
    BetaTable table;
    table.periods = cfg.periods;
    const double step = (cfg.beta_hi - cfg.beta_lo) / static_cast<double>(cfg.beta_grid - 1);
    for (std::size_t i = 0; i < cfg.beta_grid; ++i) {
        table.lambdas.push_back(i + 1 == cfg.beta_grid ? cfg.beta_hi : cfg.beta_lo + step * static_cast<double>(i));
    }
    for (auto t : cfg.periods) {
        const auto sched = chebyshev::chebyshev_factors(cfg.cheb_a, cfg.cheb_b, t);
        std::vector<double> col;
        col.reserve(table.lambdas.size());
        for (double lam : table.lambdas) col.push_back(std::abs(chebyshev::beta_eval(lam, sched)));
        table.beta_abs.push_back(std::move(col));
    }
    return table;
}

std::vector<OmegaSeries> run_omega(const ExperimentConfig& cfg) {
    std::vector<OmegaSeries> out;
    for (auto t : cfg.periods) {
        const auto sched = chebyshev::chebyshev_factors(cfg.cheb_a, cfg.cheb_b, t);
        OmegaSeries series{t, {}};
        for (std::size_t i = 0; i < cfg.iterations; ++i) series.omega.push_back(sched.factor_at(i));
        out.push_back(std::move(series));
    }
    return out;
}

CommSummary run_comm(const ExperimentConfig& cfg, const GraphSpec& spec) {
    std::vector<std::pair<std::string, simnet::Variant>> variants;
    variants.emplace_back("plain", simnet::Variant::plain());
    for (auto t : cfg.periods) {
        variants.emplace_back("cheb_T" + std::to_string(t),
                              simnet::Variant::chebyshev(chebyshev::chebyshev_factors(cfg.cheb_a, cfg.cheb_b, t)));
    }
    const std::size_t max_rounds = cfg.comm_max_rounds ? cfg.comm_max_rounds : 2 * cfg.iterations;
    std::optional<graph::Graph> fixed;
    if (!spec.is_random()) fixed = graph::named_graph(spec.name);

    std::vector<std::vector<CommTrial>> per_trial(cfg.trials);
    for_each_trial(cfg.trials, cfg.threads, [&](std::size_t i) {
        auto ts = trial_scenario(cfg, spec, fixed ? &*fixed : nullptr, i);
        const auto& s = ts.scenario;
        // Target: what plain cooperative LMS reaches after `iterations` rounds.
        const auto plain = simnet::run_distributed(s, cfg.iterations, simnet::Variant::plain());
        const double target = lms::ase(plain.trajectory.final_state(), lms::lms_solution(s));
        for (const auto& [name, variant] : variants) {
            CommTrial ct{i, name, false, {}};
            if (auto stats = simnet::messages_to_target_ase(s, target, variant, max_rounds)) {
                ct.reached = true;
                ct.stats = *stats;
            } else {
                const std::size_t per_round = 2 * s.graph().edge_count();
                ct.stats = {per_round * max_rounds, per_round * max_rounds * s.dim(), max_rounds};
            }
            per_trial[i].push_back(std::move(ct));
        }
    });

    CommSummary summary;
    summary.graph_label = spec.label();
    for (const auto& [name, _] : variants) summary.rows.push_back({name, 0, {}});
    for (auto& rows : per_trial) {
        for (std::size_t v = 0; v < rows.size(); ++v) {
            auto& agg = summary.rows[v];
            agg.reached += rows[v].reached ? 1 : 0;
            agg.total.messages_sent += rows[v].stats.messages_sent;
            agg.total.scalars_sent += rows[v].stats.scalars_sent;
            agg.total.rounds += rows[v].stats.rounds;
            summary.trials.push_back(std::move(rows[v]));
        }
    }
    return summary;
}

}  // namespace

const VariantCurve& AseCurve::variant(std::string_view name) const {
    for (const auto& v : variants) {
        if (v.name == name) return v;
    }
    throw UsageError("no variant '" + std::string(name) + "' in curve " + graph_label);
}

const CommRow& CommSummary::row(std::string_view variant) const {
    for (const auto& r : rows) {
        if (r.variant == variant) return r;
    }
    throw UsageError("no variant '" + std::string(variant) + "' in comm summary " + graph_label);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult result;
    result.config = cfg;
    switch (cfg.kind) {
        case ExperimentKind::ase:
            for (const auto& g : cfg.graphs) result.curves.push_back(run_ase(cfg, g));
            break;
        case ExperimentKind::q_eigen:
            for (const auto& g : cfg.graphs) result.spectra.push_back(run_q_eigen(cfg, g));
            break;
        case ExperimentKind::beta: result.beta = run_beta(cfg); break;
        case ExperimentKind::omega: result.omegas = run_omega(cfg); break;
        case ExperimentKind::comm:
            for (const auto& g : cfg.graphs) result.comm.push_back(run_comm(cfg, g));
            break;
    }
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace coop_lms::harness
