#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cvn/lp.hpp"
#include "testutil.hpp"

using namespace cvn;
using cvn::test::make_domain;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

}  // namespace

TEST_CASE("maximizing a singleton over coherent intervals attains the upper bound") {
    Domain d = make_domain({{"X", 3}});
    IntervalValuation k(d, vec({0.1, 0.2, 0.3}), vec({0.5, 0.4, 0.6}));
    // maximize p(x1) == minimize -p(x1)
    LpSolution s = solve_lp(interval_membership_lp(k, vec({-1.0, 0.0, 0.0})));
    CHECK(-s.value == doctest::Approx(k.upper()[0]).epsilon(1e-9));
}

TEST_CASE("minimizing over the vacuous binary set reaches zero") {
    Domain d = make_domain({{"X", 2}});
    LpSolution s = solve_lp(interval_membership_lp(IntervalValuation::vacuous(d), vec({1.0, 0.0})));
    CHECK(s.value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("minimum of p(x3) over the three-state example set sits at a vertex") {
    Domain d = make_domain({{"X", 3}});
    IntervalValuation k(d, vec({0.0, 0.0, 0.5}), vec({0.5, 0.5, 1.0}));
    LpSolution s = solve_lp(interval_membership_lp(k, vec({0.0, 0.0, 1.0})));
    CHECK(s.value == doctest::Approx(0.5).epsilon(1e-9));
    bool at_listed_vertex = s.x.isApprox(vec({0.0, 0.5, 0.5}), 1e-8) ||
                            s.x.isApprox(vec({0.5, 0.0, 0.5}), 1e-8);
    CHECK(at_listed_vertex);
}

TEST_CASE("infeasible boxes are reported") {
    LpProblem p;
    p.constraint_matrix = Eigen::MatrixXd(4, 2);
    p.constraint_matrix << -1, 0, 0, -1, 1, 1, -1, -1;
    p.constraint_rhs = vec({-0.8, -0.8, 1.0, -1.0});  // p >= 0.8 each, sum = 1
    p.objective = vec({1.0, 1.0});
    CHECK_THROWS_AS(solve_lp(p), InfeasibleError);
}

TEST_CASE("unbounded problems are internal errors") {
    LpProblem p;
    p.constraint_matrix = Eigen::MatrixXd(1, 2);
    p.constraint_matrix << 1, 0;
    p.constraint_rhs = vec({1.0});
    p.objective = vec({0.0, -1.0});
    CHECK_THROWS_AS(solve_lp(p), SolverError);
}

TEST_CASE("simplex agrees with the knapsack oracle on random box-simplex programs") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> weight(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Index n = 2 + static_cast<Index>(rng() % 5);  // frames <= 6
        Domain d = make_domain({{"X", n}});
        IntervalValuation k = cvn::test::random_interval(rng, d, 0.5);
        Eigen::VectorXd w(n);
        for (Index i = 0; i < n; ++i) w[i] = weight(rng);

        const Eigen::VectorXd oracle = cvn::test::knapsack_argmin(w, k.lower(), k.upper());
        LpSolution full = solve_lp(interval_membership_lp(k, w));
        LpSolution shifted = solve_lp(shifted_membership_lp(k, w));
        const double shifted_value = w.dot(k.lower() + shifted.x);

        CHECK(full.value == doctest::Approx(w.dot(oracle)).epsilon(1e-9));
        CHECK(shifted_value == doctest::Approx(w.dot(oracle)).epsilon(1e-9));
    }
}

TEST_CASE("lp optimum over the interval polytope is attained at an enumerated vertex") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> weight(-1.0, 1.0);
    int checked = 0;
    while (checked < 100) {
        const Index n = 2 + static_cast<Index>(rng() % 5);  // frames <= 6
        Domain d = make_domain({{"X", n}});
        IntervalValuation k = cvn::test::random_interval(rng, d, 0.4);
        const auto verts = enumerate_vertices(k);
        Eigen::VectorXd w(n);
        for (Index i = 0; i < n; ++i) w[i] = weight(rng);
        LpSolution s = solve_lp(interval_membership_lp(k, w));
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : verts) best = std::min(best, w.dot(v));
        CHECK(s.value == doctest::Approx(best).epsilon(1e-9));
        ++checked;
    }
}
