#include "coop_lms/errors.hpp"
#include "coop_lms/harness.hpp"

#include <json.hpp>

#include <cstdio>
#include <set>

namespace coop_lms::harness {

using nlohmann::json;

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKinds[] = {
    {ExperimentKind::ase, "ase"},       {ExperimentKind::q_eigen, "q_eigen"}, {ExperimentKind::beta, "beta"},
    {ExperimentKind::omega, "omega"},   {ExperimentKind::comm, "comm"},
};

std::string short_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw UsageError("config field '" + field + "': " + why);
}

template <typename T>
T get(const json& j, const std::string& field) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        bad_field(field, e.what());
    }
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) bad_field(where + key, "unknown key");
    }
}

GraphSpec graph_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) bad_field(where, "expected an object");
    reject_unknown(j, {"type", "name", "nodes", "p", "m_attach"}, where + ".");
    const auto type = j.contains("type") ? get<std::string>(j["type"], where + ".type") : "named";
    if (type == "named") {
        if (!j.contains("name")) bad_field(where + ".name", "required for named graphs");
        return GraphSpec::named_graph(get<std::string>(j["name"], where + ".name"));
    }
    if (!j.contains("nodes")) bad_field(where + ".nodes", "required for random graphs");
    const auto nodes = get<std::size_t>(j["nodes"], where + ".nodes");
    if (type == "er") {
        if (!j.contains("p")) bad_field(where + ".p", "required for er graphs");
        return GraphSpec::er(nodes, get<double>(j["p"], where + ".p"));
    }
    if (type == "ba") {
        if (!j.contains("m_attach")) bad_field(where + ".m_attach", "required for ba graphs");
        return GraphSpec::ba(nodes, get<std::size_t>(j["m_attach"], where + ".m_attach"));
    }
    bad_field(where + ".type", "expected named, er or ba");
}

json graph_to_json(const GraphSpec& g) {
    switch (g.type) {
        case GraphSpec::Type::named: return {{"type", "named"}, {"name", g.name}};
        case GraphSpec::Type::er: return {{"type", "er"}, {"nodes", g.nodes}, {"p", g.p}};
        case GraphSpec::Type::ba: return {{"type", "ba"}, {"nodes", g.nodes}, {"m_attach", g.m_attach}};
    }
    return {};
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
    for (const auto& [kind, name] : kKinds) {
        if (kind == k) return name;
    }
    return "ase";
}

ExperimentKind parse_kind(std::string_view s) {
    for (const auto& [kind, name] : kKinds) {
        if (name == s) return kind;
    }
    throw UsageError("config field 'kind': expected ase, q_eigen, beta, omega or comm");
}

GraphSpec GraphSpec::named_graph(std::string name) {
    GraphSpec g;
    g.type = Type::named;
    g.name = std::move(name);
    return g;
}

GraphSpec GraphSpec::er(std::size_t nodes, double p) {
    GraphSpec g;
    g.type = Type::er;
    g.name.clear();
    g.nodes = nodes;
    g.p = p;
    return g;
}

GraphSpec GraphSpec::ba(std::size_t nodes, std::size_t m_attach) {
    GraphSpec g;
    g.type = Type::ba;
    g.name.clear();
    g.nodes = nodes;
    g.m_attach = m_attach;
    return g;
}

std::string GraphSpec::label() const {
    switch (type) {
        case Type::named: return name;
        case Type::er: return "er_K" + std::to_string(nodes) + "_p" + short_real(p);
        case Type::ba: return "ba_K" + std::to_string(nodes) + "_m" + std::to_string(m_attach);
    }
    return name;
}

void ExperimentConfig::validate() const {
    if (graphs.empty()) bad_field("graphs", "at least one graph is required");
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const auto& g = graphs[i];
        const std::string where = "graphs[" + std::to_string(i) + "]";
        switch (g.type) {
            case GraphSpec::Type::named:
                try {
                    graph::parse_named_graph(g.name);
                } catch (const ConfigError& e) {
                    bad_field(where + ".name", e.what());
                }
                break;
            case GraphSpec::Type::er:
                if (g.nodes < 2) bad_field(where + ".nodes", "must be at least 2");
                if (!(g.p >= 0.0 && g.p <= 1.0)) bad_field(where + ".p", "must lie in [0, 1]");
                break;
            case GraphSpec::Type::ba:
                if (g.m_attach < 1) bad_field(where + ".m_attach", "must be at least 1");
                if (g.nodes <= g.m_attach) bad_field(where + ".nodes", "must exceed m_attach");
                break;
        }
    }
    if (dim < 1) bad_field("N", "must be positive");
    if (obs < 1) bad_field("m", "must be positive");
    if (!(sigma >= 0.0)) bad_field("sigma", "must be non-negative");
    if (!(epsilon > 0.0 && epsilon < 1.0)) bad_field("epsilon", "must lie in (0, 1)");
    if (!(cheb_a > 0.0)) bad_field("chebyshev.a", "must be positive");
    if (!(cheb_a < cheb_b)) bad_field("chebyshev.b", "must exceed chebyshev.a");
    for (auto t : periods) {
        if (t < 1) bad_field("chebyshev.periods", "every period must be at least 1");
    }
    for (const auto* sweep : {&mu_sweep, &mu_probe, &eta_sweep}) {
        for (double v : *sweep) {
            if (!(v > 0.0)) bad_field("mu_sweep/mu_probe/eta_sweep", "values must be positive");
        }
    }
    if (iterations < 1) bad_field("iterations", "must be at least 1");
    if (trials < 1) bad_field("trials", "must be at least 1");
    if (threads < 1) bad_field("threads", "must be at least 1");
    if (!(beta_lo < beta_hi)) bad_field("beta.hi", "must exceed beta.lo");
    if (beta_grid < 2) bad_field("beta.grid_points", "must be at least 2");
}

ExperimentConfig config_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config: top level must be an object");
    reject_unknown(j,
                   {"name", "kind", "graphs", "N", "m", "sigma", "epsilon", "chebyshev", "include_plain",
                    "include_noncoop", "mu_sweep", "mu_probe", "eta_sweep", "compute_floor", "iterations",
                    "trials", "seed", "threads", "output_dir", "beta", "comm_max_rounds"},
                   "");

    ExperimentConfig cfg;
    if (j.contains("name")) cfg.name = get<std::string>(j["name"], "name");
    if (j.contains("kind")) cfg.kind = parse_kind(get<std::string>(j["kind"], "kind"));
    if (j.contains("graphs")) {
        const auto& gs = j["graphs"];
        if (!gs.is_array()) bad_field("graphs", "expected an array");
        cfg.graphs.clear();
        for (std::size_t i = 0; i < gs.size(); ++i) {
            cfg.graphs.push_back(graph_from_json(gs[i], "graphs[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("N")) cfg.dim = get<std::size_t>(j["N"], "N");
    if (j.contains("m")) cfg.obs = get<std::size_t>(j["m"], "m");
    if (j.contains("sigma")) cfg.sigma = get<double>(j["sigma"], "sigma");
    if (j.contains("epsilon")) cfg.epsilon = get<double>(j["epsilon"], "epsilon");
    if (j.contains("chebyshev")) {
        const auto& c = j["chebyshev"];
        if (!c.is_object()) bad_field("chebyshev", "expected an object");
        reject_unknown(c, {"a", "b", "periods"}, "chebyshev.");
        if (c.contains("a")) cfg.cheb_a = get<double>(c["a"], "chebyshev.a");
        if (c.contains("b")) cfg.cheb_b = get<double>(c["b"], "chebyshev.b");
        if (c.contains("periods")) cfg.periods = get<std::vector<std::size_t>>(c["periods"], "chebyshev.periods");
    }
    if (j.contains("include_plain")) cfg.include_plain = get<bool>(j["include_plain"], "include_plain");
    if (j.contains("include_noncoop")) cfg.include_noncoop = get<bool>(j["include_noncoop"], "include_noncoop");
    if (j.contains("mu_sweep")) cfg.mu_sweep = get<std::vector<double>>(j["mu_sweep"], "mu_sweep");
    if (j.contains("mu_probe")) cfg.mu_probe = get<std::vector<double>>(j["mu_probe"], "mu_probe");
    if (j.contains("eta_sweep")) cfg.eta_sweep = get<std::vector<double>>(j["eta_sweep"], "eta_sweep");
    if (j.contains("compute_floor")) cfg.compute_floor = get<bool>(j["compute_floor"], "compute_floor");
    if (j.contains("iterations")) cfg.iterations = get<std::size_t>(j["iterations"], "iterations");
    if (j.contains("trials")) cfg.trials = get<std::size_t>(j["trials"], "trials");
    if (j.contains("seed")) cfg.seed = get<std::uint64_t>(j["seed"], "seed");
    if (j.contains("threads")) cfg.threads = get<std::size_t>(j["threads"], "threads");
    if (j.contains("output_dir")) cfg.output_dir = get<std::string>(j["output_dir"], "output_dir");
    if (j.contains("beta")) {
        const auto& b = j["beta"];
        if (!b.is_object()) bad_field("beta", "expected an object");
        reject_unknown(b, {"lo", "hi", "grid_points"}, "beta.");
        if (b.contains("lo")) cfg.beta_lo = get<double>(b["lo"], "beta.lo");
        if (b.contains("hi")) cfg.beta_hi = get<double>(b["hi"], "beta.hi");
        if (b.contains("grid_points")) cfg.beta_grid = get<std::size_t>(b["grid_points"], "beta.grid_points");
    }
    if (j.contains("comm_max_rounds")) cfg.comm_max_rounds = get<std::size_t>(j["comm_max_rounds"], "comm_max_rounds");
    cfg.validate();
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json graphs = json::array();
    for (const auto& g : cfg.graphs) graphs.push_back(graph_to_json(g));
    const json j = {
        {"name", cfg.name},
        {"kind", std::string(to_string(cfg.kind))},
        {"graphs", graphs},
        {"N", cfg.dim},
        {"m", cfg.obs},
        {"sigma", cfg.sigma},
        {"epsilon", cfg.epsilon},
        {"chebyshev", {{"a", cfg.cheb_a}, {"b", cfg.cheb_b}, {"periods", cfg.periods}}},
        {"include_plain", cfg.include_plain},
        {"include_noncoop", cfg.include_noncoop},
        {"mu_sweep", cfg.mu_sweep},
        {"mu_probe", cfg.mu_probe},
        {"eta_sweep", cfg.eta_sweep},
        {"compute_floor", cfg.compute_floor},
        {"iterations", cfg.iterations},
        {"trials", cfg.trials},
        {"seed", cfg.seed},
        {"threads", cfg.threads},
        {"output_dir", cfg.output_dir},
        {"beta", {{"lo", cfg.beta_lo}, {"hi", cfg.beta_hi}, {"grid_points", cfg.beta_grid}}},
        {"comm_max_rounds", cfg.comm_max_rounds},
    };
    return j.dump(2);
}

}  // namespace coop_lms::harness
