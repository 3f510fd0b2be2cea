#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coop_lms/errors.hpp"
#include "coop_lms/lms.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace coop_lms;
using namespace coop_lms::lms;

namespace {

double max_abs(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

Scenario karate_scenario(std::uint64_t trial) {
    Rng rng = make_stream(2021, trial, streams::scenario);
    return sample_scenario(graph::named_graph("karate"), 3, 2, 0.1, 0.05, rng);
}

Scenario single_agent(const Matrix& h, const Vector& y, double mu) {
    return Scenario(graph::Graph(1, {}), {h}, {y}, {0.5, mu});
}

}  // namespace

TEST_CASE("step_sizes examples") {
    const std::vector<double> unit{1.0};
    CHECK(step_sizes(3.0, unit, 0.05).eta == doctest::Approx(0.95 / 3.0).epsilon(1e-15));
    CHECK(step_sizes(3.0, unit, 0.05).eta == doctest::Approx(0.316667).epsilon(1e-6));
    const std::vector<double> grams{4.0, 2.0};
    CHECK(step_sizes(3.0, grams, 0.05).mu == doctest::Approx(0.2375).epsilon(1e-15));

    CHECK_THROWS_AS(step_sizes(3.0, grams, 0.0), ConfigError);
    CHECK_THROWS_AS(step_sizes(3.0, grams, 1.0), ConfigError);
    CHECK_THROWS_AS(step_sizes(0.0, grams, 0.5), ConfigError);
    CHECK_THROWS_AS(step_sizes(3.0, {}, 0.5), ConfigError);
}

TEST_CASE("sample_scenario without noise gives exact observations") {
    Rng rng(1);
    const auto s = sample_scenario(graph::named_graph("krackhardt_kite"), 4, 2, 0.0, 0.05, rng);
    for (std::size_t k = 0; k < s.agents(); ++k) CHECK(s.y(k) == s.h(k) * s.x0());
    CHECK(s.valid_for_convergence());
}

TEST_CASE("sample_scenario rejects bad inputs") {
    Rng rng(2);
    const graph::Graph split(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(sample_scenario(split, 3, 2, 0.1, 0.05, rng), ConfigError);
    const auto kite = graph::named_graph("krackhardt_kite");
    CHECK_THROWS_AS(sample_scenario(kite, 0, 2, 0.1, 0.05, rng), ConfigError);
    CHECK_THROWS_AS(sample_scenario(kite, 3, 2, -1.0, 0.05, rng), ConfigError);
    CHECK_THROWS_AS(sample_scenario(kite, 3, 2, 0.1, 1.5, rng), ConfigError);
}

TEST_CASE("karate step sizes reproduce the reported values") {
    const Scenario s = karate_scenario(0);
    // eta depends on the graph only: 0.95 / lambda_max(L_karate).
    CHECK(std::abs(s.eta() - 0.0523) <= 1e-4);
    CHECK(std::abs(s.eta() - 0.05238) <= 1e-5);

    double mu_sum = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t) mu_sum += karate_scenario(t).mu();
    CHECK(std::abs(mu_sum / 100.0 - 0.0741) <= 0.01);
}

TEST_CASE("Scenario validates shapes") {
    const graph::Graph g(2, {{0, 1}});
    const Matrix h = Matrix::Identity(2, 3);
    const Vector y = Vector::Zero(2);
    CHECK_NOTHROW(Scenario(g, {h, h}, {y, y}, {0.1, 0.1}));
    CHECK_THROWS_AS(Scenario(g, {h}, {y, y}, {0.1, 0.1}), ConfigError);
    CHECK_THROWS_AS(Scenario(g, {h, Matrix::Identity(3, 3)}, {y, y}, {0.1, 0.1}), ConfigError);
    CHECK_THROWS_AS(Scenario(g, {h, h}, {y, Vector::Zero(3)}, {0.1, 0.1}), ConfigError);
    CHECK_THROWS_AS(Scenario(g, {h, h}, {y, y}, {0.0, 0.1}), ConfigError);
    CHECK_THROWS_AS(Scenario(graph::Graph(2, {}), {h, h}, {y, y}, {0.1, 0.1}), ConfigError);
}

TEST_CASE("coop_lms_step fixes the fixed point and matches the affine form") {
    const Scenario s = karate_scenario(3);
    const GlobalState star = fixed_point(s);
    CHECK(max_abs(coop_lms_step(s, star).chi(), star.chi()) <= 1e-10);

    const QMatrix q = build_q(s);
    const Vector drive = q.consensus * offset_vector(s);
    Rng rng(4);
    std::normal_distribution<double> normal;
    Vector chi(static_cast<Eigen::Index>(s.agents() * s.dim()));
    for (auto& v : chi) v = normal(rng);
    const GlobalState x(s.agents(), s.dim(), chi);
    CHECK(max_abs(coop_lms_step(s, x).chi(), q.q * chi + drive) <= 1e-12);
}

TEST_CASE("single agent reduces to a gradient step") {
    Rng rng(5);
    std::normal_distribution<double> normal;
    Matrix h(3, 2);
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) h(i, j) = normal(rng);
    }
    Vector x0(2);
    x0 << 0.7, -1.3;
    const Scenario s = single_agent(h, h * x0, 0.1);
    const GlobalState at_truth(1, 2, x0);
    CHECK(max_abs(coop_lms_step(s, at_truth).chi(), x0) <= 1e-14);

    const GlobalState zero(1, 2);
    CHECK(max_abs(coop_lms_step(s, zero).chi(), 0.1 * h.transpose() * (h * x0)) <= 1e-14);
}

TEST_CASE("cheb_lms_step degenerate factors") {
    const Scenario s = karate_scenario(6);
    const Trajectory tr = run_cooperative_lms(s, 3);
    const GlobalState& x = tr.final_state();
    CHECK(cheb_lms_step(s, x, 1.0).chi() == coop_lms_step(s, x).chi());
    CHECK(cheb_lms_step(s, x, 0.0).chi() == x.chi());

    const GlobalState star = fixed_point(s);
    for (double w : {0.3, 1.0, 2.7, 6.0}) CHECK(max_abs(cheb_lms_step(s, star, w).chi(), star.chi()) <= 1e-10);
}

TEST_CASE("run_cooperative_lms starts at zero and converges to the fixed point") {
    const Scenario s = karate_scenario(7);
    const Trajectory zero = run_cooperative_lms(s, 0);
    REQUIRE(zero.states.size() == 1);
    CHECK(zero.states[0].chi().isZero(0.0));

    const GlobalState star = fixed_point(s);
    const Trajectory tr = run_cooperative_lms(s, 400);
    REQUIRE(tr.states.size() == 401);
    double prev = (tr.states[0].chi() - star.chi()).norm();
    for (std::size_t t = 1; t < tr.states.size(); ++t) {
        const double err = (tr.states[t].chi() - star.chi()).norm();
        CHECK(err <= prev + 1e-12);
        prev = err;
    }
    CHECK(prev < 1e-3 * (star.chi()).norm());
}

TEST_CASE("unit relaxation schedule reproduces plain cooperative LMS") {
    const Scenario s = karate_scenario(8);
    const auto unit = chebyshev::chebyshev_factors(0.5, 1.5, 1);
    REQUIRE(unit.factors()[0] == 1.0);
    const Trajectory a = run_cooperative_lms(s, 40);
    const Trajectory b = run_chebyshev_lms(s, 40, unit);
    for (std::size_t t = 0; t <= 40; ++t) CHECK(a.states[t].chi() == b.states[t].chi());
}

TEST_CASE("Chebyshev error after whole periods equals the period operator power") {
    Rng rng(9);
    for (int rep = 0; rep < 5; ++rep) {
        const Scenario s = oracle::random_scenario(rng, 20, 5);
        const QMatrix q = build_q(s);
        const Eigen::Index kn = q.q.rows();
        const Matrix b = Matrix::Identity(kn, kn) - q.q;
        const GlobalState star = fixed_point(s);
        for (std::size_t t : {1u, 2u, 6u}) {
            const auto sched = chebyshev::chebyshev_factors(0.15, 1.0, t);
            Matrix u = Matrix::Identity(kn, kn);
            for (double w : sched.factors()) u = (Matrix::Identity(kn, kn) - w * b) * u;
            const std::size_t periods = 4;
            const Trajectory tr = run_chebyshev_lms(s, periods * t, sched);
            Vector e = -star.chi();
            for (std::size_t l = 1; l <= periods; ++l) {
                e = u * e;
                CHECK(max_abs(tr.states[l * t].chi() - star.chi(), e) <= 1e-8);
            }
        }
    }
}

TEST_CASE("build_q special cases") {
    Rng rng(10);
    std::normal_distribution<double> normal;
    Matrix h(2, 2);
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) h(i, j) = normal(rng);
    }
    const Scenario one = single_agent(h, Vector::Ones(2), 0.05);
    CHECK(max_abs(build_q(one).q.reshaped(), (Matrix::Identity(2, 2) - 0.05 * h.transpose() * h).reshaped()) <= 1e-15);

    const auto kite = graph::named_graph("krackhardt_kite");
    const std::size_t n = 2;
    std::vector<Matrix> zeros(kite.node_count(), Matrix::Zero(1, n));
    std::vector<Vector> ys(kite.node_count(), Vector::Zero(1));
    const Scenario flat(kite, zeros, ys, {0.1, 0.2});
    const QMatrix q = build_q(flat);
    CHECK(q.gradient.isIdentity(0.0));
    CHECK(max_abs(q.q.reshaped(), q.consensus.reshaped()) == 0.0);
    const Matrix expected = Matrix::Identity(20, 20) - 0.1 * oracle::kron(graph::laplacian(kite), Matrix::Identity(2, 2));
    CHECK(max_abs(q.consensus.reshaped(), expected.reshaped()) <= 1e-15);
}

TEST_CASE("build_q agrees with the explicit Kronecker assembly") {
    Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        const Scenario s = oracle::random_scenario(rng, 25, 6);
        const Matrix ref = oracle::q_explicit(s);
        CHECK(max_abs(build_q(s).q.reshaped(), ref.reshaped()) <= 1e-13);
    }
}

TEST_CASE("fixed_point satisfies its defining equation") {
    Rng rng(12);
    for (int rep = 0; rep < 10; ++rep) {
        const Scenario s = oracle::random_scenario(rng, 30, 6);
        const QMatrix q = build_q(s);
        const Vector drive = q.consensus * offset_vector(s);
        const GlobalState star = fixed_point(s);
        const Vector residual = star.chi() - q.q * star.chi() - drive;
        CHECK(residual.norm() <= 1e-10 * std::max(1.0, drive.norm()));
    }
}

TEST_CASE("fixed_point of a single agent solves its normal equations") {
    Rng rng(13);
    std::normal_distribution<double> normal;
    Matrix h(5, 3);
    Vector y(5);
    for (Eigen::Index i = 0; i < 5; ++i) {
        y(i) = normal(rng);
        for (Eigen::Index j = 0; j < 3; ++j) h(i, j) = normal(rng);
    }
    const double mu = 0.9 / linalg::gram_lambda_max(h);
    const GlobalState star = fixed_point(single_agent(h, y, mu));
    CHECK((h.transpose() * h * star.chi() - h.transpose() * y).norm() <= 1e-9);
    CHECK(max_abs(star.chi(), linalg::min_norm_lstsq(h, y)) <= 1e-9);
}

TEST_CASE("fixed_point flags a singular system") {
    // H = [1 0] leaves the second coordinate untouched, so Q has an eigenvalue 1.
    Matrix h = Matrix::Zero(1, 2);
    h(0, 0) = 1.0;
    CHECK_THROWS_AS(fixed_point(single_agent(h, Vector::Ones(1), 0.5)), NumericError);
}

TEST_CASE("error decays geometrically at rate lambda_max(D)") {
    Rng rng(14);
    for (int rep = 0; rep < 5; ++rep) {
        const Scenario s = oracle::random_scenario(rng, 20, 4);
        const GlobalState star = fixed_point(s);
        const double rate = gradient_factor_lambda_max(s);
        const Trajectory tr = run_cooperative_lms(s, 200);
        const double e0 = star.chi().norm();
        const double e200 = (tr.final_state().chi() - star.chi()).norm();
        CHECK(e200 <= std::pow(rate, 200) * e0 + 1e-12);
    }
}

TEST_CASE("run_global_form") {
    const Scenario s = karate_scenario(15);
    const Trajectory a = run_cooperative_lms(s, 25);
    const Trajectory b = run_global_form(s, 25);
    for (std::size_t t = 0; t <= 25; ++t) CHECK(max_abs(a.states[t].chi(), b.states[t].chi()) <= 1e-11);

    const Trajectory one = run_global_form(s, 1);
    CHECK(max_abs(one.final_state().chi(), consensus_factor(s) * offset_vector(s)) <= 1e-15);

    std::vector<Matrix> hs;
    std::vector<Vector> ys;
    for (std::size_t k = 0; k < s.agents(); ++k) {
        hs.push_back(s.h(k));
        ys.push_back(Vector::Zero(static_cast<Eigen::Index>(s.obs_per_agent())));
    }
    const Scenario silent(s.graph(), hs, ys, s.steps());
    for (const auto& st : run_global_form(silent, 10).states) CHECK(st.chi().isZero(0.0));
}

TEST_CASE("q_eigvals examples") {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = std::sqrt(2.0);
    const auto ev = q_eigvals(single_agent(h, Vector::Ones(2), 0.25));
    CHECK(ev[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(0.75).epsilon(1e-12));

    const Scenario s = karate_scenario(16);
    const auto q = q_eigvals(s);
    CHECK(q.size() == 102);
    for (double v : q) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    double min_gram_min = 1e300;
    for (std::size_t k = 0; k < s.agents(); ++k) {
        min_gram_min = std::min(min_gram_min, linalg::sym_eigvals(s.h(k).transpose() * s.h(k)).front());
    }
    CHECK(q.back() <= 1.0 - s.mu() * min_gram_min + 1e-12);
}

TEST_CASE("q_eigvals refuses step sizes outside the convergence conditions") {
    const Scenario s = karate_scenario(17);
    const Scenario too_fast = s.with_steps({1.5 / s.lambda_max_laplacian(), s.mu()});
    CHECK_FALSE(too_fast.valid_for_convergence());
    CHECK_THROWS_AS(q_eigvals(too_fast), NumericError);
}

TEST_CASE("q_eigvals agree with a general eigensolver on Q") {
    Rng rng(18);
    for (int rep = 0; rep < 5; ++rep) {
        const Scenario s = oracle::random_scenario(rng, 15, 4);
        const auto ev = q_eigvals(s);
        Eigen::EigenSolver<Matrix> es(oracle::q_explicit(s), false);
        std::vector<double> ref;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ref.push_back(es.eigenvalues()(i).real());
        std::sort(ref.begin(), ref.end());
        for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - ref[i]) <= 1e-8);
    }
}

TEST_CASE("consensus and gradient factors have the stated minimum eigenvalues") {
    Rng rng(19);
    for (int rep = 0; rep < 10; ++rep) {
        const Scenario s = oracle::random_scenario(rng, 30, 5);
        const double c_min = linalg::sym_eigvals(consensus_factor(s)).front();
        CHECK(std::abs(c_min - (1.0 - s.eta() * s.lambda_max_laplacian())) <= 1e-9);
        CHECK(c_min > 0.0);
        for (std::size_t k = 0; k < s.agents(); ++k) {
            const Matrix a = Matrix::Identity(static_cast<Eigen::Index>(s.dim()), static_cast<Eigen::Index>(s.dim())) -
                             s.mu() * s.h(k).transpose() * s.h(k);
            const double a_min = linalg::sym_eigvals(a).front();
            CHECK(std::abs(a_min - (1.0 - s.mu() * s.gram_maxes()[k])) <= 1e-9);
            CHECK(a_min > 0.0);
        }
    }
}

TEST_CASE("Laplacian quadratic form equals the sum of squared edge differences") {
    Rng rng(20);
    std::normal_distribution<double> normal;
    for (int rep = 0; rep < 10; ++rep) {
        const Scenario s = oracle::random_scenario(rng, 30, 5);
        const auto n = static_cast<Eigen::Index>(s.dim());
        Vector chi(static_cast<Eigen::Index>(s.agents()) * n);
        for (auto& v : chi) v = normal(rng);
        const Matrix lk = oracle::kron(graph::laplacian(s.graph()), Matrix::Identity(n, n));
        double edge_sum = 0.0;
        for (const auto& [i, j] : s.graph().edges()) {
            edge_sum += (chi.segment(static_cast<Eigen::Index>(i) * n, n) - chi.segment(static_cast<Eigen::Index>(j) * n, n))
                            .squaredNorm();
        }
        CHECK(std::abs(chi.dot(lk * chi) - edge_sum) <= 1e-9 * std::max(1.0, edge_sum));
    }
}

TEST_CASE("ase") {
    Vector ref(2);
    ref << 1.0, -1.0;
    const std::vector<Vector> same{ref, ref, ref};
    CHECK(ase(same, ref) == 0.0);

    Vector e1 = ref;
    e1(0) += 1.0;
    Vector e3 = ref;
    e3(1) -= 3.0;
    CHECK(ase(std::vector<Vector>{e1, e3}, ref) == doctest::Approx(5.0));

    const GlobalState st(2, 2, (Vector(4) << e1, e3).finished());
    CHECK(ase(st, ref) == doctest::Approx(5.0));

    CHECK_THROWS_AS(ase(std::vector<Vector>{Vector::Zero(3)}, ref), UsageError);
    CHECK_THROWS_AS(ase(std::vector<Vector>{}, ref), UsageError);
}

TEST_CASE("lms_solution") {
    Rng rng(21);
    const auto noiseless = sample_scenario(graph::named_graph("karate"), 3, 2, 0.0, 0.05, rng);
    CHECK(max_abs(lms_solution(noiseless), noiseless.x0()) <= 1e-9);

    std::normal_distribution<double> normal;
    Matrix h(6, 3);
    Vector y(6);
    for (Eigen::Index i = 0; i < 6; ++i) {
        y(i) = normal(rng);
        for (Eigen::Index j = 0; j < 3; ++j) h(i, j) = normal(rng);
    }
    CHECK(max_abs(lms_solution(single_agent(h, y, 0.01)), linalg::min_norm_lstsq(h, y)) <= 1e-10);

    const Scenario s = karate_scenario(22);
    const Vector x = lms_solution(s);
    Vector residual = Vector::Zero(3);
    for (std::size_t k = 0; k < s.agents(); ++k) residual += s.h(k).transpose() * (s.h(k) * x - s.y(k));
    CHECK(residual.norm() <= 1e-9);
}

TEST_CASE("noncooperative baseline uses per-agent minimum-norm estimates") {
    const Scenario s = karate_scenario(23);
    const auto local = noncooperative_solutions(s);
    REQUIRE(local.size() == s.agents());
    for (std::size_t k = 0; k < s.agents(); ++k) {
        CHECK(max_abs(local[k], linalg::min_norm_lstsq(s.h(k), s.y(k))) == 0.0);
        // m < N: local estimate lies in the row space of H_k.
        CHECK((s.h(k) * local[k] - s.y(k)).norm() <= 1e-10);
    }
    CHECK(noncooperative_ase(s) == doctest::Approx(ase(local, lms_solution(s))));
}

TEST_CASE("divergence guard stops runaway runs") {
    const Scenario s = karate_scenario(24);
    const Scenario wild = s.with_steps({s.eta(), 40.0 * s.mu()});
    const Trajectory tr = run_cooperative_lms(wild, 500);
    CHECK(tr.diverged());
    CHECK(tr.states.size() == *tr.diverged_at);
    for (const auto& st : tr.states) CHECK(st.chi().norm() <= kDivergenceNorm);
}

TEST_CASE("algorithm forms agree on random scenarios") {
    Rng rng(25);
    for (int rep = 0; rep < 50; ++rep) {
        const Scenario s = oracle::random_scenario(rng);
        const Trajectory a = run_cooperative_lms(s, 100);
        const Trajectory b = run_global_form(s, 100);
        double worst = 0.0;
        for (std::size_t t = 0; t <= 100; ++t) worst = std::max(worst, max_abs(a.states[t].chi(), b.states[t].chi()));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("per-iteration error ratio never exceeds lambda_max(D)") {
    Rng rng(26);
    for (int rep = 0; rep < 20; ++rep) {
        const Scenario s = oracle::random_scenario(rng, 30, 6);
        const GlobalState star = fixed_point(s);
        const double bound = gradient_factor_lambda_max(s) + 1e-9;
        const Trajectory tr = run_cooperative_lms(s, 150);
        for (std::size_t t = 0; t + 1 < tr.states.size(); ++t) {
            const double e0 = (tr.states[t].chi() - star.chi()).norm();
            if (e0 <= 1e-12) break;
            const double e1 = (tr.states[t + 1].chi() - star.chi()).norm();
            CHECK(e1 / e0 <= bound);
        }
    }
}

TEST_CASE("Q spectrum lies strictly inside (0, 1) for rule-based step sizes") {
    Rng rng(27);
    for (int rep = 0; rep < 30; ++rep) {
        const Scenario s = oracle::random_scenario(rng, 30, 6);
        REQUIRE(s.valid_for_convergence());
        for (double v : q_eigvals(s)) {
            CHECK(v > 1e-10);
            CHECK(v < 1.0 - 1e-10);
        }
    }
}
