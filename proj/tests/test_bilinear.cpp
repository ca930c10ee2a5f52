#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cvn/algebra.hpp"
#include "cvn/bilinear.hpp"
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

SolverConfig default_cfg() { return SolverConfig{}; }

}  // namespace

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.bisection_tol = 0.5;
    CHECK_THROWS_AS(cfg.validate(), InvalidStateError);
    cfg = SolverConfig{};
    cfg.multistart_count = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidStateError);
}

TEST_CASE("symmetric binary example: bounds match the hand-computed ratio") {
    Domain d = make_domain({{"X", 2}});
    IntervalValuation k(d, vec({0.4, 0.4}), vec({0.6, 0.6}));
    SolverConfig cfg = default_cfg();
    // min/max of a*b / (a*b + (1-a)(1-b)) over [0.4,0.6]^2
    const double lo = 0.16 / 0.52;
    const double hi = 0.36 / 0.52;
    CHECK(std::abs(lower_combined(k, k, 0, cfg) - lo) < 1e-5);
    CHECK(std::abs(upper_combined(k, k, 0, cfg) - hi) < 1e-5);

    SolverConfig lp_only = cfg;
    lp_only.mode = SolverMode::LpOnly;
    CHECK(std::abs(lower_combined(k, k, 0, lp_only) - lo) < 1e-5);
    CHECK(std::abs(upper_combined(k, k, 0, lp_only) - hi) < 1e-5);
}

TEST_CASE("precise inputs reproduce the multiplicative combination within tolerance") {
    Domain d = make_domain({{"X", 2}});
    Eigen::VectorXd p1 = vec({0.6, 0.4});
    Eigen::VectorXd p2 = vec({0.3, 0.7});
    IntervalValuation k1(d, p1, p1), k2(d, p2, p2);
    SolverConfig cfg = default_cfg();
    const double expected = 0.18 / 0.46;
    CHECK(std::abs(lower_combined(k1, k2, 0, cfg) - expected) < cfg.bisection_tol);
    CHECK(std::abs(upper_combined(k1, k2, 0, cfg) - expected) < cfg.bisection_tol);
}

TEST_CASE("vacuous operand pulls the lower bound to zero and the upper to one") {
    Domain d = make_domain({{"X", 3}});
    IntervalValuation k(d, vec({0.2, 0.3, 0.2}), vec({0.4, 0.5, 0.4}));
    IntervalValuation vac = IntervalValuation::vacuous(d);
    SolverConfig cfg = default_cfg();
    CHECK(lower_combined(k, vac, 0, cfg) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(upper_combined(vac, k, 0, cfg) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("alternating descent keeps an optimal start") {
    Domain d = make_domain({{"X", 2}});
    IntervalValuation k(d, vec({0.4, 0.4}), vec({0.6, 0.6}));
    BilinearProblem problem(k, k, vec({1.0, 0.0}));
    BilinearPoint best = vertex_pair_oracle(problem);
    BilinearPoint out = alternating_lp(problem, best.p1, best.p2);
    CHECK(out.value == doctest::Approx(best.value).epsilon(1e-10));
}

TEST_CASE("alternating descent on singleton sets solves exactly in one round") {
    Domain d = make_domain({{"X", 3}});
    Eigen::VectorXd p1 = vec({0.5, 0.3, 0.2});
    Eigen::VectorXd p2 = vec({0.1, 0.6, 0.3});
    BilinearProblem problem(IntervalValuation(d, p1, p1), IntervalValuation(d, p2, p2),
                            vec({1.0, -2.0, 0.5}));
    BilinearPoint out = alternating_lp(problem, p1, p2);
    CHECK(out.value ==
          doctest::Approx((problem.objective.array() * p1.array() * p2.array()).sum()).epsilon(1e-12));
}

TEST_CASE("multistart alternating matches the exact oracle on random problems") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> weight(-1.0, 1.0);
    int worse = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Index n = 2 + static_cast<Index>(rng() % 7);  // frames <= 8
        Domain d = make_domain({{"X", n}});
        IntervalValuation ka = cvn::test::random_interval(rng, d, 0.35);
        IntervalValuation kb = cvn::test::random_interval(rng, d, 0.35);
        Eigen::VectorXd c(n);
        for (Index i = 0; i < n; ++i) c[i] = weight(rng);
        BilinearProblem problem(ka, kb, c);

        // unfiltered exact reference: the bilinear minimum over the product
        // polytope sits at a vertex pair
        double exact = std::numeric_limits<double>::infinity();
        for (const auto& a : enumerate_vertices(ka)) {
            for (const auto& b : enumerate_vertices(kb)) {
                exact = std::min(exact, (c.array() * a.array() * b.array()).sum());
            }
        }
        double best = std::numeric_limits<double>::infinity();
        std::mt19937_64 start_rng(0);
        std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> starts;
        starts.emplace_back(lower_greedy_vertex(ka), lower_greedy_vertex(kb));
        starts.emplace_back(upper_greedy_vertex(ka), upper_greedy_vertex(kb));
        while (starts.size() < 16) {
            starts.emplace_back(cvn::test::random_member(start_rng, ka),
                                cvn::test::random_member(start_rng, kb));
        }
        for (const auto& [s1, s2] : starts) {
            best = std::min(best, alternating_lp(problem, s1, s2).value);
        }
        // descent values are achievable, so they can never undercut the optimum
        CHECK(best >= exact - 1e-9);
        if (best > exact + 1e-8) ++worse;
    }
    // the descent may miss the global minimum on rare instances; the bound
    // machinery papers over nothing, so track how often it happens
    CHECK(worse <= 10);
}

TEST_CASE("vertex-pair oracle: precise times precise is the single pair") {
    Domain d = make_domain({{"X", 2}});
    Eigen::VectorXd p1 = vec({0.7, 0.3}), p2 = vec({0.2, 0.8});
    BilinearProblem problem(IntervalValuation(d, p1, p1), IntervalValuation(d, p2, p2),
                            vec({1.0, -1.0}));
    BilinearPoint out = vertex_pair_oracle(problem);
    CHECK(out.value == doctest::Approx(0.7 * 0.2 - 0.3 * 0.8).epsilon(1e-12));
}

TEST_CASE("vertex-pair oracle scans all nine pairs of the example set") {
    Domain d = make_domain({{"X", 3}});
    IntervalValuation k(d, vec({0.0, 0.0, 0.5}), vec({0.5, 0.5, 1.0}));
    BilinearProblem problem(k, k, vec({0.0, 0.0, 1.0}));  // nu = 0, third configuration
    const auto verts = enumerate_vertices(k);
    REQUIRE(verts.size() == 3);
    double expected = std::numeric_limits<double>::infinity();
    for (const auto& a : verts) {
        for (const auto& b : verts) {
            if (a.dot(b) < 1e-9) continue;
            expected = std::min(expected, a[2] * b[2]);
        }
    }
    CHECK(vertex_pair_oracle(problem).value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("total conflict is detected") {
    Domain d = make_domain({{"X", 2}});
    Eigen::VectorXd p1 = vec({1.0, 0.0}), p2 = vec({0.0, 1.0});
    IntervalValuation k1(d, p1, p1), k2(d, p2, p2);
    SolverConfig cfg = default_cfg();
    CHECK_THROWS_AS(lower_combined(k1, k2, 0, cfg), TotalConflictError);
    CHECK_THROWS_AS(combine_credal_bounds(k1, k2, cfg), TotalConflictError);
}

TEST_CASE("lp route and oracle route agree on random coherent pairs") {
    std::mt19937_64 rng(4242);
    SolverConfig lp_cfg;
    lp_cfg.mode = SolverMode::LpOnly;
    SolverConfig oracle_cfg;
    oracle_cfg.mode = SolverMode::OracleOnly;
    for (int trial = 0; trial < 40; ++trial) {
        const Index n = 2 + static_cast<Index>(rng() % 7);  // frames <= 8
        Domain d = make_domain({{"X", n}});
        IntervalValuation k1 = cvn::test::random_interval(rng, d, 0.3);
        IntervalValuation k2 = cvn::test::random_interval(rng, d, 0.3);
        IntervalValuation via_lp = combine_credal_bounds(k1, k2, lp_cfg);
        IntervalValuation via_oracle = combine_credal_bounds(k1, k2, oracle_cfg);
        CHECK((via_lp.lower() - via_oracle.lower()).cwiseAbs().maxCoeff() <= 1e-5);
        CHECK((via_lp.upper() - via_oracle.upper()).cwiseAbs().maxCoeff() <= 1e-5);
        CHECK(check_coherence(via_lp).ok());
        CHECK(check_coherence(via_oracle).ok());
    }
}

TEST_CASE("identical config yields bit-identical bounds") {
    std::mt19937_64 rng(11);
    Domain d = make_domain({{"X", 4}});
    IntervalValuation k1 = cvn::test::random_interval(rng, d, 0.3);
    IntervalValuation k2 = cvn::test::random_interval(rng, d, 0.3);
    SolverConfig cfg = default_cfg();
    IntervalValuation a = combine_credal_bounds(k1, k2, cfg);
    IntervalValuation b = combine_credal_bounds(k1, k2, cfg);
    CHECK(a.lower() == b.lower());
    CHECK(a.upper() == b.upper());
}

TEST_CASE("assembled bounds are ordered and coherent") {
    std::mt19937_64 rng(900);
    SolverConfig cfg = default_cfg();
    for (int trial = 0; trial < 25; ++trial) {
        Domain d = make_domain({{"X", 2 + static_cast<Index>(rng() % 3)}});
        IntervalValuation k1 = cvn::test::random_interval(rng, d, 0.25);
        IntervalValuation k2 = cvn::test::random_interval(rng, d, 0.25);
        IntervalValuation out = combine_credal_bounds(k1, k2, cfg);
        for (Index i = 0; i < d.cardinality(); ++i) {
            CHECK(out.lower()[i] >= 0.0);
            CHECK(out.lower()[i] <= out.upper()[i] + 1e-12);
            CHECK(out.upper()[i] <= 1.0);
        }
        CHECK(check_coherence(out).ok());
    }
}
