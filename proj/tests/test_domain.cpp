#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cvn/domain.hpp"
#include "testutil.hpp"

using namespace cvn;
using cvn::test::make_domain;
using cvn::test::make_var;

TEST_CASE("variable validation") {
    CHECK_THROWS_AS(Variable("X", {}), InvalidStateError);
    CHECK_THROWS_AS(Variable("X", {"a", "a"}), InvalidStateError);
    CHECK_THROWS_AS(Variable("", {"a"}), InvalidStateError);
    Variable v("X", {"0", "1", "2"});
    CHECK(v.size() == 3);
    CHECK(v.state_index("2") == 2);
    CHECK_THROWS_AS(v.state_index("3"), InvalidStateError);
}

TEST_CASE("domain canonical order and cardinality") {
    Domain d = make_domain({{"T", 3}, {"D", 3}});
    CHECK(d.variables()[0].name() == "D");
    CHECK(d.variables()[1].name() == "T");
    CHECK(d.cardinality() == 9);

    Domain empty;
    CHECK(empty.cardinality() == 1);
    CHECK(empty.decode(0).empty());

    CHECK_THROWS_AS(Domain({make_var("X", 2), make_var("X", 2)}), DomainError);
}

TEST_CASE("encode: two three-state variables") {
    // (D=1, T=2) in {D,T} with the last variable fastest
    Domain d = make_domain({{"D", 3}, {"T", 3}});
    std::vector<Index> states{1, 2};
    CHECK(d.encode(states) == 5);
}

TEST_CASE("encode: single variable") {
    Domain d = make_domain({{"A", 5}});
    std::vector<Index> states{0};
    CHECK(d.encode(states) == 0);
}

TEST_CASE("encode matches exhaustive decode oracle on {L,S,D}") {
    Domain d = make_domain({{"L", 2}, {"S", 2}, {"D", 3}});
    // canonical order D,L,S; round-trip over all 12 configurations
    REQUIRE(d.cardinality() == 12);
    for (Index c = 0; c < 12; ++c) {
        const std::vector<Index> states = d.decode(c);
        CHECK(d.encode(states) == c);
    }
    // the derived example: states (D=2, L=1, S=0)
    std::vector<Index> states{2, 1, 0};
    Index found = -1;
    for (Index c = 0; c < 12; ++c) {
        if (d.decode(c) == states) found = c;
    }
    CHECK(d.encode(states) == found);
    CHECK(found == 10);  // 2*4 + 1*2 + 0
}

TEST_CASE("encode rejects out-of-range states") {
    Domain d = make_domain({{"D", 3}, {"T", 3}});
    std::vector<Index> bad{1, 3};
    CHECK_THROWS_AS(d.encode(bad), InvalidStateError);
}

TEST_CASE("mixed-radix round-trip on random domains") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        Domain d = cvn::test::random_domain(rng);
        for (Index c = 0; c < d.cardinality(); ++c) {
            CHECK(d.encode(d.decode(c)) == c);
        }
    }
}

TEST_CASE("last variable varies fastest") {
    Domain d = make_domain({{"A", 2}, {"B", 3}});
    CHECK(d.decode(0) == std::vector<Index>{0, 0});
    CHECK(d.decode(1) == std::vector<Index>{0, 1});
    CHECK(d.decode(2) == std::vector<Index>{0, 2});
    CHECK(d.decode(3) == std::vector<Index>{1, 0});
}

TEST_CASE("set operations") {
    Domain a = make_domain({{"X", 2}, {"Y", 3}});
    Domain b = make_domain({{"Y", 3}, {"Z", 2}});
    Domain u = a.unite(b);
    CHECK(u.cardinality() == 12);
    CHECK(u.contains(a));
    CHECK(u.contains(b));
    CHECK(a.intersect(b) == make_domain({{"Y", 3}}));
    CHECK(u.erase("Y") == make_domain({{"X", 2}, {"Z", 2}}));

    Domain conflicting({make_var("Y", 4)});
    CHECK_THROWS_AS(a.unite(conflicting), DomainError);
}

TEST_CASE("projection map sums out the right variables") {
    Domain d = make_domain({{"X", 2}, {"Y", 2}});
    Domain x = make_domain({{"X", 2}});
    const std::vector<Index> map = d.projection_map(x);
    CHECK(map == std::vector<Index>{0, 0, 1, 1});
    CHECK_THROWS_AS(x.projection_map(d), DomainError);
}
