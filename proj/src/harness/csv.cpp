#include "coop_lms/errors.hpp"
#include "coop_lms/harness.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#ifndef COOP_LMS_VERSION
#define COOP_LMS_VERSION "unknown"
#endif

namespace coop_lms::harness {

namespace fs = std::filesystem;

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_csv(const AseCurve& curve, std::ostream& os) {
    os << "t,variant,mean_ase,trials_used,diverged\n";
    for (std::size_t t = 0; t <= curve.iterations; ++t) {
        for (const auto& v : curve.variants) {
            const double m = t < v.mean.size() ? v.mean[t] : std::nan("");
            os << t << ',' << v.name << ',' << format_real(m) << ',' << v.trials_used << ',' << v.diverged << '\n';
        }
    }
}

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    return os;
}

void finish(std::ofstream& os, const fs::path& path) {
    os.flush();
    if (!os) throw IoError("write to '" + path.string() + "' failed");
}

void emit_trials(const AseCurve& curve, std::ostream& os) {
    os << "trial,variant,t,ase\n";
    for (const auto& v : curve.variants) {
        for (std::size_t i = 0; i < v.per_trial.size(); ++i) {
            const auto& row = v.per_trial[i];
            for (std::size_t t = 0; t < row.size(); ++t) {
                os << i << ',' << v.name << ',' << t << ',' << format_real(row[t]) << '\n';
            }
        }
    }
}

void emit_floor(const AseCurve& curve, std::ostream& os) {
    os << "trial,floor_ase\n";
    for (std::size_t i = 0; i < curve.floor_per_trial.size(); ++i) {
        os << i << ',' << format_real(curve.floor_per_trial[i]) << '\n';
    }
}

template <typename Fn>
fs::path write_file(const fs::path& path, Fn&& fn) {
    auto os = open_out(path);
    fn(os);
    finish(os, path);
    return path;
}

}  // namespace

void emit_csv(const AseCurve& curve, const fs::path& path) {
    write_file(path, [&](std::ostream& os) { emit_csv(curve, os); });
}

std::vector<fs::path> write_outputs(const ExperimentResult& result, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    std::vector<fs::path> written;
    nlohmann::json extra = nlohmann::json::object();

    for (const auto& curve : result.curves) {
        const auto& label = curve.graph_label;
        written.push_back(write_file(dir / ("ase_" + label + ".csv"), [&](std::ostream& os) { emit_csv(curve, os); }));
        written.push_back(
            write_file(dir / ("ase_trials_" + label + ".csv"), [&](std::ostream& os) { emit_trials(curve, os); }));
        if (result.config.compute_floor) {
            written.push_back(write_file(dir / ("floor_" + label + ".csv"), [&](std::ostream& os) { emit_floor(curve, os); }));
        }
        nlohmann::json info = {{"diverged", nlohmann::json::object()}};
        for (const auto& v : curve.variants) info["diverged"][v.name] = v.diverged;
        if (!curve.er_resamples.empty()) info["er_resamples"] = curve.er_resamples;
        extra[label] = info;
    }

    for (const auto& spec : result.spectra) {
        written.push_back(write_file(dir / ("q_eigenvalues_" + spec.graph_label + ".csv"), [&](std::ostream& os) {
            os << "index,eigenvalue\n";
            for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
                os << i << ',' << format_real(spec.eigenvalues[i]) << '\n';
            }
        }));
        extra[spec.graph_label] = {{"eta", spec.eta}, {"mu", spec.mu}};
    }

    if (result.config.kind == ExperimentKind::beta) {
        const auto& b = result.beta;
        written.push_back(write_file(dir / "beta.csv", [&](std::ostream& os) {
            os << "lambda";
            for (auto t : b.periods) os << ",beta_abs_T" << t;
            os << '\n';
            for (std::size_t i = 0; i < b.lambdas.size(); ++i) {
                os << format_real(b.lambdas[i]);
                for (const auto& col : b.beta_abs) os << ',' << format_real(col[i]);
                os << '\n';
            }
        }));
    }

    for (const auto& series : result.omegas) {
        written.push_back(write_file(dir / ("omega_T" + std::to_string(series.period) + ".csv"), [&](std::ostream& os) {
            os << "t,omega\n";
            for (std::size_t t = 0; t < series.omega.size(); ++t) os << t << ',' << format_real(series.omega[t]) << '\n';
        }));
    }

    for (const auto& summary : result.comm) {
        const auto& label = summary.graph_label;
        written.push_back(write_file(dir / ("comm_" + label + ".csv"), [&](std::ostream& os) {
            os << "variant,rounds,messages,scalars\n";
            for (const auto& r : summary.rows) {
                os << r.variant << ',' << r.total.rounds << ',' << r.total.messages_sent << ',' << r.total.scalars_sent
                   << '\n';
            }
        }));
        written.push_back(write_file(dir / ("comm_trials_" + label + ".csv"), [&](std::ostream& os) {
            os << "trial,variant,reached,rounds,messages,scalars\n";
            for (const auto& t : summary.trials) {
                os << t.trial << ',' << t.variant << ',' << (t.reached ? 1 : 0) << ',' << t.stats.rounds << ','
                   << t.stats.messages_sent << ',' << t.stats.scalars_sent << '\n';
            }
        }));
        nlohmann::json reached = nlohmann::json::object();
        for (const auto& r : summary.rows) reached[r.variant] = r.reached;
        extra[label] = {{"trials_reaching_target", reached}};
    }

    bool any_random = false;
    for (const auto& g : result.config.graphs) any_random = any_random || g.is_random();
    const nlohmann::json meta = {
        {"config", nlohmann::json::parse(config_to_json(result.config))},
        {"seed", result.config.seed},
        {"seed_derivation", "splitmix64(splitmix64(master ^ splitmix64(trial)) + stream); stream 0 graph, 1 scenario"},
        {"graph_resampling", any_random ? "fresh graph per trial for random ensembles" : "fixed named graph"},
        {"version", COOP_LMS_VERSION},
        {"compiler", __VERSION__},
        {"elapsed_seconds", result.elapsed_seconds},
        {"results", extra},
    };
    written.push_back(write_file(dir / "meta.json", [&](std::ostream& os) { os << meta.dump(2) << '\n'; }));
    return written;
}

}  // namespace coop_lms::harness
