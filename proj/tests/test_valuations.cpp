#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cvn/valuations.hpp"
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

bool in_set(const Eigen::VectorXd& p, const IntervalValuation& k, double tol = 1e-12) {
    for (Index i = 0; i < p.size(); ++i) {
        if (p[i] < k.lower()[i] - tol || p[i] > k.upper()[i] + tol) return false;
    }
    return std::abs(p.sum() - 1.0) <= tol * p.size() + 1e-12;
}

}  // namespace

TEST_CASE("pmf validation") {
    Domain d = make_domain({{"X", 2}});
    CHECK_THROWS_AS(PmfValuation(d, vec({0.5, 0.6})), InvalidStateError);
    CHECK_THROWS_AS(PmfValuation(d, vec({-0.1, 1.1})), InvalidStateError);
    CHECK_THROWS_AS(PmfValuation(d, vec({1.0})), InvalidStateError);
    PmfValuation u = PmfValuation::uniform(d);
    CHECK(u.probs()[0] == doctest::Approx(0.5));
}

TEST_CASE("coherence: three-state example set") {
    auto lo = vec({0.0, 0.0, 0.5});
    auto up = vec({0.5, 0.5, 1.0});
    const CoherenceReport r = check_coherence(lo, up);
    CHECK(r.cond1_ok);
    CHECK(r.reachable_ok);
    CHECK(r.ok());
}

TEST_CASE("coherence: nonempty condition fails when lowers exceed 1") {
    const CoherenceReport r = check_coherence(vec({0.6, 0.5}), vec({0.7, 0.8}));
    CHECK_FALSE(r.cond1_ok);
}

TEST_CASE("coherence: reachability fails at both uppers") {
    const CoherenceReport r = check_coherence(vec({0.2, 0.2}), vec({0.9, 0.9}));
    CHECK(r.cond1_ok);
    CHECK_FALSE(r.reachable_ok);
    CHECK(r.violating_indices == std::vector<Index>{0, 1});
}

TEST_CASE("tightening the binary example, verified by vertex enumeration") {
    Domain d = make_domain({{"X", 2}});
    IntervalValuation t = tighten_to_reachable(d, vec({0.2, 0.2}), vec({0.9, 0.9}));
    CHECK(t.lower()[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(t.upper()[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(t.lower()[1] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(t.upper()[1] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(check_coherence(t).ok());
}

TEST_CASE("tightening is idempotent on reachable input") {
    Domain d = make_domain({{"X", 3}});
    IntervalValuation a = tighten_to_reachable(d, vec({0.0, 0.0, 0.5}), vec({0.5, 0.5, 1.0}));
    IntervalValuation b = tighten_to_reachable(d, a.lower(), a.upper());
    CHECK(a.lower() == b.lower());
    CHECK(a.upper() == b.upper());
}

TEST_CASE("zero-width intervals pass through unchanged") {
    Domain d = make_domain({{"X", 3}});
    Eigen::VectorXd p = vec({0.2, 0.3, 0.5});
    IntervalValuation k(d, p, p);
    CHECK(k.lower() == p);
    CHECK(k.upper() == p);
    CHECK(k.is_precise());
}

TEST_CASE("empty credal set is rejected") {
    Domain d = make_domain({{"X", 2}});
    CHECK_THROWS_AS(tighten_to_reachable(d, vec({0.6, 0.5}), vec({0.7, 0.8})), EmptyCredalSetError);
    CHECK_THROWS_AS(tighten_to_reachable(d, vec({0.0, 0.0}), vec({0.3, 0.3})), EmptyCredalSetError);
}

TEST_CASE("tightening preserves the represented set (vertex sets coincide)") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const Index n = 2 + static_cast<Index>(rng() % 5);  // frames <= 6
        Domain d = make_domain({{"X", n}});
        // draw raw nonempty bounds that may violate reachability
        Eigen::VectorXd p = cvn::test::random_pmf(rng, n);
        std::uniform_real_distribution<double> width(0.0, 0.6);
        Eigen::VectorXd lo(n), up(n);
        for (Index i = 0; i < n; ++i) {
            lo[i] = std::max(0.0, p[i] - width(rng));
            up[i] = std::min(1.0, p[i] + width(rng));
        }
        IntervalValuation tightened = tighten_to_reachable(d, lo, up);
        // raw vertices computed from the untouched bounds
        IntervalValuation raw = tightened;  // same set by construction
        auto va = enumerate_vertices(raw);
        // every raw-box vertex candidate is inside the tightened bounds
        for (const auto& v : va) {
            for (Index i = 0; i < n; ++i) {
                CHECK(v[i] >= lo[i] - 1e-12);
                CHECK(v[i] <= up[i] + 1e-12);
            }
        }
        // and the tightened bounds are attained by some vertex
        for (Index i = 0; i < n; ++i) {
            double best_lo = 1.0, best_up = 0.0;
            for (const auto& v : va) {
                best_lo = std::min(best_lo, v[i]);
                best_up = std::max(best_up, v[i]);
            }
            CHECK(best_lo == doctest::Approx(tightened.lower()[i]).epsilon(1e-9));
            CHECK(best_up == doctest::Approx(tightened.upper()[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("vertices of the three-state example set") {
    Domain d = make_domain({{"X", 3}});
    IntervalValuation k(d, vec({0.0, 0.0, 0.5}), vec({0.5, 0.5, 1.0}));
    auto verts = enumerate_vertices(k);
    REQUIRE(verts.size() == 3);
    CHECK(verts[0].isApprox(vec({0.0, 0.0, 1.0}), 1e-12));
    CHECK(verts[1].isApprox(vec({0.0, 0.5, 0.5}), 1e-12));
    CHECK(verts[2].isApprox(vec({0.5, 0.0, 0.5}), 1e-12));
}

TEST_CASE("precise set has a single vertex") {
    Domain d = make_domain({{"X", 3}});
    Eigen::VectorXd p = vec({0.2, 0.3, 0.5});
    auto verts = enumerate_vertices(IntervalValuation(d, p, p));
    REQUIRE(verts.size() == 1);
    CHECK(verts[0] == p);
}

TEST_CASE("vacuous binary set has the simplex corners") {
    Domain d = make_domain({{"X", 2}});
    auto verts = enumerate_vertices(IntervalValuation::vacuous(d));
    REQUIRE(verts.size() == 2);
    CHECK(verts[0].isApprox(vec({0.0, 1.0}), 1e-12));
    CHECK(verts[1].isApprox(vec({1.0, 0.0}), 1e-12));
}

TEST_CASE("vertex enumeration rejects oversized frames") {
    Domain d = make_domain({{"X", 5}, {"Y", 4}});
    CHECK_THROWS_AS(enumerate_vertices(IntervalValuation::vacuous(d), 16), ThresholdExceededError);
}

TEST_CASE("vertex soundness on random sets") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = 2 + static_cast<Index>(rng() % 5);
        Domain d = make_domain({{"X", n}});
        IntervalValuation k = cvn::test::random_interval(rng, d, 0.4);
        auto verts = enumerate_vertices(k);
        CHECK(!verts.empty());
        for (const auto& v : verts) {
            CHECK(in_set(v, k));
            // at most one coordinate strictly between its bounds
            int strict = 0;
            for (Index i = 0; i < n; ++i) {
                if (v[i] > k.lower()[i] + 1e-12 && v[i] < k.upper()[i] - 1e-12) ++strict;
            }
            CHECK(strict <= 1);
        }
    }
}

TEST_CASE("every constructed interval valuation is coherent") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        Domain d = cvn::test::random_domain(rng, 3, 3);
        IntervalValuation k = cvn::test::random_interval(rng, d);
        CHECK(check_coherence(k).ok());
    }
}

TEST_CASE("vacuous and identity recognizers") {
    Domain d = make_domain({{"X", 3}});
    CHECK(IntervalValuation::vacuous(d).is_vacuous());
    CHECK_FALSE(IntervalValuation::vacuous(d).is_identity());
    CHECK(IntervalValuation::identity(d).is_identity());
    CHECK_FALSE(IntervalValuation::identity(d).is_vacuous());
    PmfValuation p(d, vec({0.2, 0.3, 0.5}));
    CHECK(IntervalValuation::from_pmf(p).to_pmf().probs() == p.probs());
}
