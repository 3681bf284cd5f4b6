#include "doctest.h"

#include <set>

#include "ivstab/errors.hpp"
#include "ivstab/kharitonov.hpp"

using namespace ivstab;

namespace {
const IntervalPolynomial kBox{{1, 2}, {3, 4}, {5, 6}};
}

TEST_CASE("vertices of a quadratic box") {
    const auto v = kharitonov_vertices(kBox);
    CHECK(v[0] == Polynomial{1, 3, 6});
    CHECK(v[1] == Polynomial{1, 4, 6});
    CHECK(v[2] == Polynomial{2, 3, 5});
    CHECK(v[3] == Polynomial{2, 4, 5});
}

TEST_CASE("degenerate boxes") {
    for (const auto& v : kharitonov_vertices(IntervalPolynomial{{1, 1}, {1, 1}})) CHECK(v == Polynomial{1, 1});
    const auto c = kharitonov_vertices(IntervalPolynomial{{0, 1}});
    CHECK(c[0].is_zero());
    CHECK(c[1].is_zero());
    CHECK(c[2] == Polynomial{1.0});
    CHECK(c[3] == Polynomial{1.0});
}

TEST_CASE("vertex pattern table") {
    const char* patterns[4] = {"LLUU", "LUUL", "ULLU", "UULL"};
    std::vector<Interval> b;
    for (int k = 0; k < 9; ++k) b.push_back({10.0 * k, 10.0 * k + 1});
    const IntervalPolynomial ip(b);
    const auto v = kharitonov_vertices(ip);
    for (int i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 9; ++k) {
            const bool upper = patterns[i][k % 4] == 'U';
            CHECK(kharitonov_takes_upper(i + 1, k) == upper);
            CHECK(v[i][k] == (upper ? b[k].hi : b[k].lo));
        }
    for (std::size_t k = 0; k < 9; ++k) {
        if (k % 4 == 0 || k % 4 == 2) CHECK(v[0][k] == v[1][k]);
        if (k % 4 == 1 || k % 4 == 3) CHECK(v[0][k] == v[2][k]);
    }
}

TEST_CASE("edges") {
    const auto e = kharitonov_edges(kBox);
    CHECK(e[0].from == Polynomial{1, 3, 6});
    CHECK(e[0].to == Polynomial{1, 4, 6});
    const int pairs[4][2] = {{1, 2}, {2, 4}, {4, 3}, {3, 1}};
    for (int k = 0; k < 4; ++k) {
        CHECK(e[k].from_index == pairs[k][0]);
        CHECK(e[k].to_index == pairs[k][1]);
    }
    CHECK(e[0].at(0.5) == Polynomial{1, 3.5, 6});
    for (const auto& s : kharitonov_edges(IntervalPolynomial{{2, 2}, {3, 3}})) CHECK(s.degenerate());

    // Every vertex lies on exactly two edges.
    for (int v = 1; v <= 4; ++v) {
        int hits = 0;
        for (const auto& s : e) hits += (s.from_index == v) + (s.to_index == v);
        CHECK(hits == 2);
    }
}

TEST_CASE("edge points stay in the box") {
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
        std::vector<Interval> b;
        const std::size_t deg = rng.below(6);
        for (std::size_t k = 0; k <= deg; ++k) {
            const double lo = rng.uniform(-3, 3);
            b.push_back({lo, lo + rng.uniform(0, 2)});
        }
        const IntervalPolynomial ip(b);
        for (const auto& s : kharitonov_edges(ip))
            for (int k = 0; k <= 10; ++k) CHECK(ip.contains(s.at(k / 10.0), 1e-12));
    }
}

TEST_CASE("degeneracy flags") {
    CHECK(is_degenerate(IntervalPolynomial{{1, 1}, {2, 2}}).full_point);
    const auto d = is_degenerate(IntervalPolynomial{{1, 2}, {2, 2}});
    CHECK_FALSE(d.full_point);
    CHECK(d.point_flags == std::vector<bool>{false, true});
    CHECK_FALSE(is_degenerate(IntervalPolynomial{{0, 0}, {0, 0}, {0, 0}, {1, 2}}).full_point);

    const IntervalPolynomial point{{1, 1}, {4, 4}, {2, 2}};
    std::set<std::vector<double>> distinct;
    for (const auto& v : kharitonov_vertices(point)) distinct.insert(v.vec());
    CHECK(distinct.size() == 1);
}

TEST_CASE("construction validation") {
    CHECK_THROWS_AS(IntervalPolynomial({{2, 1}}), MalformedInput);
    CHECK_THROWS_AS(IntervalPolynomial({{0, std::numeric_limits<double>::infinity()}}), MalformedInput);
    CHECK(IntervalPolynomial{{1, 2}, {0, 0}}.degree() == 0);
    CHECK(IntervalPolynomial{{1, 2}, {1, 2}}.has_invariant_degree());
    CHECK_FALSE(IntervalPolynomial{{1, 2}, {-1, 2}}.has_invariant_degree());
    CHECK(IntervalPolynomial{{1, 2}, {3, 3}}.has_invariant_degree());
}

TEST_CASE("sampling") {
    Rng a(42), b(42);
    const IntervalPolynomial point{{1, 1}, {2, 2}};
    CHECK(sample(point, a) == Polynomial{1, 2});
    const IntervalPolynomial box{{1, 2}, {3, 4}};
    for (int t = 0; t < 1000; ++t) {
        const Polynomial p = sample(box, a);
        CHECK(box.contains(p));
        CHECK(p == sample(box, b));
    }
}
