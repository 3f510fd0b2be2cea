#pragma once

#include "coop_lms/chebyshev.hpp"
#include "coop_lms/graph.hpp"
#include "coop_lms/linalg.hpp"
#include "coop_lms/rng.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace coop_lms::lms {

using linalg::Matrix;
using linalg::Vector;

struct StepSizes {
    double eta;  // consensus step
    double mu;   // gradient step
};

/// eta = (1 - eps) / lambda_max(L), mu = (1 - eps) / max_k lambda_max(H_k^T H_k).
/// Throws ConfigError unless every input is positive and 0 < eps < 1.
StepSizes step_sizes(double lambda_max_laplacian, std::span<const double> gram_maxes,
                     double epsilon);

/// Agents on a connected graph, each holding y_k = H_k x0 + w_k, plus the two
/// step sizes shared by every agent.
class Scenario {
public:
    /// Throws ConfigError on a disconnected graph, on H/y shape mismatches, or
    /// on non-positive step sizes. `x0` may be empty when the truth is unknown.
    Scenario(graph::Graph g, std::vector<Matrix> h, std::vector<Vector> y, StepSizes steps,
             Vector x0 = {}, double sigma = 0.0);

    const graph::Graph& graph() const noexcept { return graph_; }
    std::size_t agents() const noexcept { return graph_.node_count(); }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t obs_per_agent() const noexcept { return obs_; }
    const Matrix& h(std::size_t k) const { return h_.at(k); }
    const Vector& y(std::size_t k) const { return y_.at(k); }
    const Vector& x0() const noexcept { return x0_; }
    double sigma() const noexcept { return sigma_; }
    double eta() const noexcept { return steps_.eta; }
    double mu() const noexcept { return steps_.mu; }
    StepSizes steps() const noexcept { return steps_; }

    double lambda_max_laplacian() const noexcept { return lambda_max_lap_; }
    /// lambda_max(H_k^T H_k) for every agent.
    std::span<const double> gram_maxes() const noexcept { return gram_maxes_; }

    /// eta < 1/lambda_max(L) and mu < 1/max_k lambda_max(H_k^T H_k).
    bool valid_for_convergence() const noexcept;

    /// Same data, different step sizes (mismatched-parameter sweeps).
    Scenario with_steps(StepSizes steps) const;

private:
    graph::Graph graph_;
    std::vector<Matrix> h_;
    std::vector<Vector> y_;
    StepSizes steps_;
    Vector x0_;
    double sigma_;
    std::size_t dim_;
    std::size_t obs_;
    double lambda_max_lap_;
    std::vector<double> gram_maxes_;
};

/// Draw order from `rng`: the N entries of x0, then for each agent k the m*N
/// entries of H_k (row-major) followed by its m noise samples. All entries
/// standard normal; noise scaled by sigma. Step sizes from step_sizes(epsilon).
Scenario sample_scenario(const graph::Graph& g, std::size_t dim, std::size_t obs_per_agent,
                         double sigma, double epsilon, Rng& rng);

/// Stacked agent estimates chi = (x_1; ...; x_K).
class GlobalState {
public:
    GlobalState(std::size_t agents, std::size_t dim);  // zeros
    GlobalState(std::size_t agents, std::size_t dim, Vector chi);

    static GlobalState zeros(const Scenario& s) { return GlobalState(s.agents(), s.dim()); }

    std::size_t agents() const noexcept { return agents_; }
    std::size_t dim() const noexcept { return dim_; }
    const Vector& chi() const noexcept { return chi_; }
    Vector& chi() noexcept { return chi_; }

    auto block(std::size_t k) const { return chi_.segment(offset(k), static_cast<Eigen::Index>(dim_)); }
    auto block(std::size_t k) { return chi_.segment(offset(k), static_cast<Eigen::Index>(dim_)); }

private:
    Eigen::Index offset(std::size_t k) const { return static_cast<Eigen::Index>(k * dim_); }

    std::size_t agents_;
    std::size_t dim_;
    Vector chi_;
};

/// Norm beyond which a run is declared diverged and stopped.
inline constexpr double kDivergenceNorm = 1e9;

struct Trajectory {
    std::vector<GlobalState> states;  // states[0] is the zero initialization
    std::optional<std::size_t> diverged_at;

    bool diverged() const noexcept { return diverged_at.has_value(); }
    const GlobalState& final_state() const { return states.back(); }
};

/// One synchronous round: u_k = x_k + mu H_k^T (y_k - H_k x_k) for every k,
/// then x_k' = u_k + eta * sum_{j in N(k)} (u_j - u_k).
GlobalState coop_lms_step(const Scenario& s, const GlobalState& x);

/// (1 - omega) x + omega * coop_lms_step(x).
GlobalState cheb_lms_step(const Scenario& s, const GlobalState& x, double omega);

Trajectory run_cooperative_lms(const Scenario& s, std::size_t iterations);
Trajectory run_chebyshev_lms(const Scenario& s, std::size_t iterations,
                             const chebyshev::ChebyshevSchedule& sched);

/// I - eta (L kron I_N).
Matrix consensus_factor(const Scenario& s);
/// blockdiag(A_1, ..., A_K), A_k = I - mu H_k^T H_k.
Matrix gradient_factor(const Scenario& s);
/// Stacked b_k = mu H_k^T y_k.
Vector offset_vector(const Scenario& s);

struct QMatrix {
    Matrix q;          // consensus * gradient
    Matrix consensus;  // symmetric, PD under the eta condition
    Matrix gradient;   // symmetric, PD under the mu condition
};

/// Q = (I - eta L kron I_N) D, returned with both symmetric factors.
QMatrix build_q(const Scenario& s);

/// Affine form: chi <- Q chi + (I - eta L kron I_N) offset, from zero.
Trajectory run_global_form(const Scenario& s, std::size_t iterations);

/// Solves (I - Q) chi* = (I - eta L kron I_N) offset. NumericError if singular.
GlobalState fixed_point(const Scenario& s);

/// Real eigenvalues of Q, ascending, via the symmetric-product route.
/// NumericError when the step-size conditions fail (a factor is not PD).
std::vector<double> q_eigvals(const Scenario& s);

/// lambda_max(D) = max_k (1 - mu lambda_min(H_k^T H_k)).
double gradient_factor_lambda_max(const Scenario& s);

/// (1/K) sum_k ||reference - x_k||^2. UsageError on length mismatch.
double ase(std::span<const Vector> estimates, const Vector& reference);
double ase(const GlobalState& state, const Vector& reference);

/// Centralized least-squares solution: (sum H_k^T H_k) x = sum H_k^T y_k.
Vector lms_solution(const Scenario& s);

/// Per-agent minimum-norm least-squares estimates.
std::vector<Vector> noncooperative_solutions(const Scenario& s);

/// ASE of the per-agent local estimates against the centralized solution.
/// Iteration independent.
double noncooperative_ase(const Scenario& s);

}  // namespace coop_lms::lms
