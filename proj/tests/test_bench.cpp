#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>

#include "polysub/bench.hpp"
#include "polysub/linalg.hpp"
#include "polysub/rng.hpp"
#include "polysub/synth.hpp"

using namespace polysub;

namespace {

Eigen::MatrixXd col(std::initializer_list<double> xs) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), 1);
    Eigen::Index k = 0;
    for (double x : xs) m(k++, 0) = x;
    return m;
}

}  // namespace

TEST_CASE("principal angle basics") {
    const Eigen::MatrixXd e1 = col({1, 0});
    const Eigen::MatrixXd e2 = col({0, 1});
    const Eigen::MatrixXd diag = col({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});

    CHECK(principal_angle(e1, e1) == doctest::Approx(0.0));
    CHECK(principal_angle(e1, e2) == doctest::Approx(std::acos(0.0)));  // pi/2
    CHECK(principal_angle(e1, diag) ==
          doctest::Approx(std::atan(1.0)).epsilon(1e-12));  // pi/4

    Eigen::MatrixXd skew = col({1, 1});
    CHECK_THROWS_AS(principal_angle(e1, skew), std::invalid_argument);
}

TEST_CASE("principal angle resolves tiny angles") {
    // Perturb a subspace by a known tiny rotation; the cosine route alone
    // cannot see below ~1e-8.
    const double eps = 1e-10;
    Eigen::MatrixXd a(3, 1), b(3, 1);
    a << 1, 0, 0;
    b << std::cos(eps), std::sin(eps), 0;
    CHECK(principal_angle(a, b) == doctest::Approx(eps).epsilon(1e-6));
}

TEST_CASE("principal angle symmetry and orthogonal invariance") {
    Rng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const int dim = 4 + static_cast<int>(rng.next_u64() % 4);
        const int p = 1 + static_cast<int>(rng.next_u64() % 3);
        Eigen::MatrixXd raw_a(dim, p), raw_b(dim, p);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < p; ++j) {
                raw_a(i, j) = rng.uniform(-1.0, 1.0);
                raw_b(i, j) = rng.uniform(-1.0, 1.0);
            }
        const Eigen::MatrixXd a = orthonormalize_columns(raw_a);
        const Eigen::MatrixXd b = orthonormalize_columns(raw_b);
        CHECK(std::abs(principal_angle(a, b) - principal_angle(b, a)) < 1e-12);

        const Eigen::MatrixXd rot = random_orthogonal(dim, rng);
        CHECK(std::abs(principal_angle(rot * a, rot * b) - principal_angle(a, b)) < 1e-10);
    }
}

TEST_CASE("principal angle with unequal dimensions") {
    // One-dimensional line inside a plane it belongs to: angle zero.
    const Eigen::MatrixXd line = col({1, 0, 0});
    Eigen::MatrixXd plane(3, 2);
    plane << 1, 0, 0, 1, 0, 0;
    CHECK(principal_angle(line, plane) == doctest::Approx(0.0));
    CHECK(principal_angle(plane, line) == doctest::Approx(0.0));

    const Eigen::MatrixXd off = col({0, 0, 1});
    CHECK(principal_angle(off, plane) == doctest::Approx(std::acos(0.0)));
}

TEST_CASE("identifiability bounds") {
    const auto rep = identifiability(10, 5, 110);
    CHECK(rep.min_m_identifiable == 4);
    CHECK(rep.min_quadrics_exact_alg == 40);
    CHECK(rep.identifiable);
    CHECK(rep.exact_alg_regime);

    const auto border = identifiability(2, 1, 2);
    CHECK(border.min_m_identifiable == 2);
    CHECK(border.identifiable);

    for (int D = 2; D <= 12; ++D) {
        const auto top = identifiability(D, D - 1, 7);
        CHECK(top.min_m_identifiable == 2);
    }
}

TEST_CASE("identifiability table against a direct search") {
    // Independent oracle: the smallest m with 2(m-1) >= D-d+1, found by
    // scanning m upward.
    for (int D = 2; D <= 12; ++D) {
        for (int d = 1; d < D; ++d) {
            int m_min = 1;
            while (2 * (m_min - 1) < D - d + 1) ++m_min;
            const auto rep = identifiability(D, d, m_min);
            CHECK(rep.min_m_identifiable == m_min);
            CHECK(rep.identifiable);
            CHECK_FALSE(identifiability(D, d, m_min - 1).identifiable);
        }
    }
}

TEST_CASE("quantiles") {
    CHECK(quantile({1, 2, 3, 4, 5}, 0.5) == 3.0);
    CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
    CHECK(quantile({7}, 0.25) == 7.0);
    CHECK(quantile({1, 2, 3, 4, 5}, 0.25) == 2.0);
}

TEST_CASE("single-trial grid is deterministic") {
    GridConfig config;
    config.D = 5;
    config.m = 20;
    config.d_values = {2};
    config.sigmas = {-6.0};
    config.trials = 1;
    config.seed = 99;
    config.methods = {Method::Approx, Method::Ssa};
    config.ssa.restarts = 2;
    config.ssa.max_iters = 60;

    const auto a = run_grid(config);
    const auto b = run_grid(config);
    REQUIRE(a.results.size() == 2);
    REQUIRE(b.results.size() == 2);
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].angle_rad == b.results[i].angle_rad);
        CHECK(a.results[i].seed == b.results[i].seed);
        CHECK(a.results[i].method == b.results[i].method);
    }
    CHECK(a.results[0].converged);
}

TEST_CASE("noise-free cells are solved to numerical exactness") {
    GridConfig config;
    config.D = 6;
    config.m = 25;
    config.d_values = {3};
    config.sigmas = {0.0};
    config.trials = 8;
    config.seed = 7;
    config.disturb = false;
    config.methods = {Method::Approx};

    const auto out = run_grid(config);
    REQUIRE(out.cells.size() == 1);
    const auto& stats = out.cells[0].methods.at("algebraic");
    CHECK(stats.converged == 8);
    CHECK(stats.angle.q50 < 1e-8);
}

TEST_CASE("non-identifiable cells are skipped with a warning") {
    GridConfig config;
    config.D = 10;
    config.m = 3;  // below the bound for small d
    config.d_values = {1, 9};
    config.sigmas = {-4.0};
    config.trials = 1;
    config.seed = 1;
    config.methods = {Method::Approx};

    const auto out = run_grid(config);
    // d=1 needs m >= 6; d=9 needs m >= 2. Only the d=9 cell runs.
    CHECK(out.warnings.size() == 1);
    CHECK(out.cells.size() == 1);
    CHECK(out.cells[0].d == 9);
    // m-1=2 quadrics < Delta(10)-Delta(9)=10: the estimator cannot run, so
    // the trial is recorded as non-converged rather than crashing the grid.
    CHECK(out.cells[0].methods.at("algebraic").converged == 0);
    CHECK(out.results.size() == 1);
    CHECK_FALSE(out.results[0].converged);
}

TEST_CASE("csv layout") {
    TrialResult tr;
    tr.method = "algebraic";
    tr.D = 10;
    tr.d = 5;
    tr.m = 110;
    tr.sigma = -8.0;
    tr.seed = 12345;
    tr.angle_rad = 0.25;
    tr.runtime_s = 0.125;
    tr.converged = true;
    const std::string csv = results_csv(std::vector<TrialResult>{tr});
    CHECK(csv == "method,D,d,m,sigma,seed,angle_rad,runtime_s,converged\n"
                 "algebraic,10,5,110,-8,12345,0.25,0.125,1\n");
}

TEST_CASE("parallel execution yields the identical result set") {
    GridConfig config;
    config.D = 5;
    config.m = 18;
    config.d_values = {1, 2};
    config.sigmas = {-5.0};
    config.trials = 3;
    config.seed = 31;
    config.methods = {Method::Approx};

    auto serial = config;
    serial.jobs = 1;
    auto parallel = config;
    parallel.jobs = 4;

    const auto a = run_grid(serial);
    const auto b = run_grid(parallel);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].seed == b.results[i].seed);
        CHECK(a.results[i].angle_rad == b.results[i].angle_rad);
    }
    // Angle quantiles are bit-identical; runtimes are wall-clock and not
    // part of the determinism contract.
    for (std::size_t c = 0; c < a.cells.size(); ++c) {
        const auto& sa = a.cells[c].methods.at("algebraic");
        const auto& sb = b.cells[c].methods.at("algebraic");
        CHECK(sa.angle.q25 == sb.angle.q25);
        CHECK(sa.angle.q50 == sb.angle.q50);
        CHECK(sa.angle.q75 == sb.angle.q75);
    }
}

TEST_CASE("summary json carries the pipeline metadata") {
    GridConfig config;
    config.D = 4;
    config.m = 12;
    config.d_values = {2};
    config.sigmas = {-3.0};
    config.trials = 2;
    config.seed = 5;
    config.methods = {Method::Approx};

    const auto out = run_grid(config);
    const auto doc = summary_json(out, config);
    CHECK(doc.at("version") == 1);
    CHECK(doc.at("pipeline").at("whiten_reference") == "last");
    CHECK(doc.at("pipeline").at("system_mode") == "reference");
    CHECK(doc.at("pipeline").at("ssa").contains("restarts"));
    CHECK(doc.at("cells").size() == 1);
    CHECK(doc.at("cells")[0].at("methods").contains("algebraic"));
}
