#include "coop_lms/lms.hpp"

#include "coop_lms/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace coop_lms::lms {

namespace {

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

}  // namespace

StepSizes step_sizes(double lambda_max_laplacian, std::span<const double> gram_maxes,
                     double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("step_sizes: epsilon must lie in (0, 1)");
    if (!(lambda_max_laplacian > 0.0)) {
        throw ConfigError("step_sizes: lambda_max(L) must be positive (graph needs an edge)");
    }
    if (gram_maxes.empty()) throw ConfigError("step_sizes: no agents");
    const double gram = *std::max_element(gram_maxes.begin(), gram_maxes.end());
    if (!(gram > 0.0)) throw ConfigError("step_sizes: every H_k is zero");
    return {(1.0 - epsilon) / lambda_max_laplacian, (1.0 - epsilon) / gram};
}

Scenario::Scenario(graph::Graph g, std::vector<Matrix> h, std::vector<Vector> y, StepSizes steps,
                   Vector x0, double sigma)
    : graph_(std::move(g)),
      h_(std::move(h)),
      y_(std::move(y)),
      steps_(steps),
      x0_(std::move(x0)),
      sigma_(sigma) {
    const std::size_t k = graph_.node_count();
    if (!graph::is_connected(graph_)) throw ConfigError("scenario: graph is not connected");
    if (h_.size() != k || y_.size() != k) {
        throw ConfigError("scenario: expected one H_k and y_k per agent (K=" + std::to_string(k) + ")");
    }
    obs_ = static_cast<std::size_t>(h_[0].rows());
    dim_ = static_cast<std::size_t>(h_[0].cols());
    if (obs_ == 0 || dim_ == 0) throw ConfigError("scenario: H_k must be non-empty");
    for (std::size_t a = 0; a < k; ++a) {
        if (h_[a].rows() != idx(obs_) || h_[a].cols() != idx(dim_)) {
            throw ConfigError("scenario: H_" + std::to_string(a) + " has inconsistent shape");
        }
        if (y_[a].size() != idx(obs_)) {
            throw ConfigError("scenario: y_" + std::to_string(a) + " has the wrong length");
        }
        if (!h_[a].allFinite() || !y_[a].allFinite()) {
            throw ConfigError("scenario: non-finite data at agent " + std::to_string(a));
        }
    }
    if (x0_.size() != 0 && x0_.size() != idx(dim_)) throw ConfigError("scenario: x0 has the wrong length");
    if (!(steps_.eta > 0.0) || !(steps_.mu > 0.0)) throw ConfigError("scenario: step sizes must be positive");

    lambda_max_lap_ = k > 1 ? graph::laplacian_lambda_max(graph_) : 0.0;
    gram_maxes_.reserve(k);
    for (const auto& hk : h_) gram_maxes_.push_back(linalg::gram_lambda_max(hk));
}

bool Scenario::valid_for_convergence() const noexcept {
    const double gram = *std::max_element(gram_maxes_.begin(), gram_maxes_.end());
    const bool eta_ok = steps_.eta * lambda_max_lap_ < 1.0;
    const bool mu_ok = steps_.mu * gram < 1.0;
    return eta_ok && mu_ok;
}

Scenario Scenario::with_steps(StepSizes steps) const {
    if (!(steps.eta > 0.0) || !(steps.mu > 0.0)) throw ConfigError("scenario: step sizes must be positive");
    Scenario copy = *this;
    copy.steps_ = steps;
    return copy;
}

Scenario sample_scenario(const graph::Graph& g, std::size_t dim, std::size_t obs_per_agent,
                         double sigma, double epsilon, Rng& rng) {
    if (dim < 1 || obs_per_agent < 1) throw ConfigError("sample_scenario: N and m must be positive");
    if (!(sigma >= 0.0)) throw ConfigError("sample_scenario: sigma must be non-negative");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("sample_scenario: epsilon must lie in (0, 1)");
    if (!graph::is_connected(g)) throw ConfigError("sample_scenario: graph is not connected");

    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t k = g.node_count();

    Vector x0(idx(dim));
    for (auto& v : x0) v = normal(rng);

    std::vector<Matrix> h;
    std::vector<Vector> y;
    std::vector<double> grams;
    h.reserve(k);
    y.reserve(k);
    for (std::size_t a = 0; a < k; ++a) {
        Matrix hk(idx(obs_per_agent), idx(dim));
        for (Eigen::Index r = 0; r < hk.rows(); ++r) {
            for (Eigen::Index c = 0; c < hk.cols(); ++c) hk(r, c) = normal(rng);
        }
        Vector yk = hk * x0;
        for (auto& v : yk) v += sigma * normal(rng);
        grams.push_back(linalg::gram_lambda_max(hk));
        h.push_back(std::move(hk));
        y.push_back(std::move(yk));
    }
    const double lam = k > 1 ? graph::laplacian_lambda_max(g) : 1.0;
    const StepSizes steps = step_sizes(lam, grams, epsilon);
    return Scenario(g, std::move(h), std::move(y), steps, std::move(x0), sigma);
}

GlobalState::GlobalState(std::size_t agents, std::size_t dim)
    : agents_(agents), dim_(dim), chi_(Vector::Zero(idx(agents * dim))) {}

GlobalState::GlobalState(std::size_t agents, std::size_t dim, Vector chi)
    : agents_(agents), dim_(dim), chi_(std::move(chi)) {
    if (chi_.size() != idx(agents * dim)) throw UsageError("GlobalState: length must equal K*N");
}

namespace {

void require_shape(const Scenario& s, const GlobalState& x) {
    if (x.agents() != s.agents() || x.dim() != s.dim()) {
        throw UsageError("state shape does not match the scenario");
    }
}

}  // namespace

GlobalState coop_lms_step(const Scenario& s, const GlobalState& x) {
    require_shape(s, x);
    const std::size_t k = s.agents();
    const double mu = s.mu();
    const double eta = s.eta();

    GlobalState u(k, s.dim());
    for (std::size_t a = 0; a < k; ++a) {
        const auto xa = x.block(a);
        u.block(a) = xa + mu * s.h(a).transpose() * (s.y(a) - s.h(a) * xa);
    }

    GlobalState next(k, s.dim());
    Vector acc(idx(s.dim()));
    for (std::size_t a = 0; a < k; ++a) {
        acc.setZero();
        for (graph::NodeId j : s.graph().neighbors(a)) acc += u.block(j) - u.block(a);
        next.block(a) = u.block(a) + eta * acc;
    }
    return next;
}

GlobalState cheb_lms_step(const Scenario& s, const GlobalState& x, double omega) {
    GlobalState v = coop_lms_step(s, x);
    v.chi() = (1.0 - omega) * x.chi() + omega * v.chi();
    return v;
}

namespace {

template <typename Step>
Trajectory iterate(const Scenario& s, std::size_t iterations, Step&& step) {
    Trajectory traj;
    traj.states.reserve(iterations + 1);
    traj.states.push_back(GlobalState::zeros(s));
    for (std::size_t t = 0; t < iterations; ++t) {
        GlobalState next = step(traj.states.back(), t);
        const double norm = next.chi().norm();
        if (!std::isfinite(norm) || norm > kDivergenceNorm) {
            traj.diverged_at = t + 1;
            break;
        }
        traj.states.push_back(std::move(next));
    }
    return traj;
}

}  // namespace

Trajectory run_cooperative_lms(const Scenario& s, std::size_t iterations) {
    return iterate(s, iterations, [&](const GlobalState& x, std::size_t) { return coop_lms_step(s, x); });
}

Trajectory run_chebyshev_lms(const Scenario& s, std::size_t iterations,
                             const chebyshev::ChebyshevSchedule& sched) {
    return iterate(s, iterations, [&](const GlobalState& x, std::size_t t) {
        return cheb_lms_step(s, x, sched.factor_at(t));
    });
}

Matrix consensus_factor(const Scenario& s) {
    const std::size_t n = s.dim();
    const Matrix lap = graph::laplacian(s.graph());
    const Eigen::Index kn = idx(s.agents() * n);
    Matrix c = Matrix::Identity(kn, kn);
    for (Eigen::Index i = 0; i < lap.rows(); ++i) {
        for (Eigen::Index j = 0; j < lap.cols(); ++j) {
            if (lap(i, j) == 0.0) continue;
            for (Eigen::Index d = 0; d < idx(n); ++d) c(i * idx(n) + d, j * idx(n) + d) -= s.eta() * lap(i, j);
        }
    }
    return c;
}

Matrix gradient_factor(const Scenario& s) {
    const Eigen::Index n = idx(s.dim());
    const Eigen::Index kn = idx(s.agents()) * n;
    Matrix d = Matrix::Zero(kn, kn);
    for (std::size_t a = 0; a < s.agents(); ++a) {
        d.block(idx(a) * n, idx(a) * n, n, n) =
            Matrix::Identity(n, n) - s.mu() * s.h(a).transpose() * s.h(a);
    }
    return d;
}

Vector offset_vector(const Scenario& s) {
    const Eigen::Index n = idx(s.dim());
    Vector beta(idx(s.agents()) * n);
    for (std::size_t a = 0; a < s.agents(); ++a) {
        beta.segment(idx(a) * n, n) = s.mu() * s.h(a).transpose() * s.y(a);
    }
    return beta;
}

QMatrix build_q(const Scenario& s) {
    QMatrix out{Matrix(), consensus_factor(s), gradient_factor(s)};
    // D is block diagonal, so C * D is formed one column block at a time.
    const Eigen::Index n = idx(s.dim());
    out.q.resize(out.consensus.rows(), out.consensus.cols());
    for (std::size_t a = 0; a < s.agents(); ++a) {
        const Eigen::Index off = idx(a) * n;
        out.q.middleCols(off, n) = out.consensus.middleCols(off, n) * out.gradient.block(off, off, n, n);
    }
    return out;
}

Trajectory run_global_form(const Scenario& s, std::size_t iterations) {
    const QMatrix q = build_q(s);
    const Vector drive = q.consensus * offset_vector(s);
    return iterate(s, iterations, [&](const GlobalState& x, std::size_t) {
        return GlobalState(s.agents(), s.dim(), q.q * x.chi() + drive);
    });
}

GlobalState fixed_point(const Scenario& s) {
    const QMatrix q = build_q(s);
    const Eigen::Index kn = q.q.rows();
    const Matrix lhs = Matrix::Identity(kn, kn) - q.q;
    const Vector rhs = q.consensus * offset_vector(s);
    return GlobalState(s.agents(), s.dim(), linalg::solve_linear(lhs, rhs));
}

std::vector<double> q_eigvals(const Scenario& s) {
    const QMatrix q = build_q(s);
    return linalg::eigvals_general(q.consensus, q.gradient);
}

double gradient_factor_lambda_max(const Scenario& s) {
    double best = -std::numeric_limits<double>::infinity();
    const Eigen::Index n = idx(s.dim());
    for (std::size_t a = 0; a < s.agents(); ++a) {
        const Matrix ak = Matrix::Identity(n, n) - s.mu() * s.h(a).transpose() * s.h(a);
        best = std::max(best, linalg::sym_eigvals(ak).back());
    }
    return best;
}

double ase(std::span<const Vector> estimates, const Vector& reference) {
    if (estimates.empty()) throw UsageError("ase: no estimates");
    double total = 0.0;
    for (const auto& e : estimates) {
        if (e.size() != reference.size()) throw UsageError("ase: estimate length differs from reference");
        total += (reference - e).squaredNorm();
    }
    return total / static_cast<double>(estimates.size());
}

double ase(const GlobalState& state, const Vector& reference) {
    if (idx(state.dim()) != reference.size()) throw UsageError("ase: state block length differs from reference");
    double total = 0.0;
    for (std::size_t a = 0; a < state.agents(); ++a) total += (reference - state.block(a)).squaredNorm();
    return total / static_cast<double>(state.agents());
}

Vector lms_solution(const Scenario& s) {
    const Eigen::Index n = idx(s.dim());
    Matrix normal = Matrix::Zero(n, n);
    Vector rhs = Vector::Zero(n);
    for (std::size_t a = 0; a < s.agents(); ++a) {
        normal.noalias() += s.h(a).transpose() * s.h(a);
        rhs.noalias() += s.h(a).transpose() * s.y(a);
    }
    return linalg::solve_linear(normal, rhs);
}

std::vector<Vector> noncooperative_solutions(const Scenario& s) {
    std::vector<Vector> out;
    out.reserve(s.agents());
    for (std::size_t a = 0; a < s.agents(); ++a) out.push_back(linalg::min_norm_lstsq(s.h(a), s.y(a)));
    return out;
}

double noncooperative_ase(const Scenario& s) { return ase(noncooperative_solutions(s), lms_solution(s)); }

}  // namespace coop_lms::lms
