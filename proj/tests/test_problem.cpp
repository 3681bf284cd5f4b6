#include "doctest.h"

#include <string>

#include "ivstab/freqdom.hpp"
#include "ivstab/problem.hpp"

using namespace ivstab;

namespace {

std::string message_of(const std::string& text) {
    try {
        (void)parse_problem(text);
    } catch (const MalformedInput& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("bundled manipulator fixture") {
    const ProblemSpec spec = load_problem("@manipulator");
    CHECK(spec.n == 2);
    CHECK(spec.eps == 0.01);
    CHECK(spec.has_template());
    int templated = 0;
    for (const auto& e : spec.D.entries())
        for (const auto& c : e) templated += c.templated ? 1 : 0;
    CHECK(templated == 12);

    const Problem p = spec.instantiate(0.5);
    int uncertain_b = 0;
    for (const auto& e : p.B.entries()) uncertain_b += is_degenerate(e).full_point ? 0 : 1;
    CHECK(uncertain_b == 2);
    CHECK(p.C == identity_polynomial_matrix(2));
    CHECK(p.A(1, 0) == Polynomial{2.0});

    // D(1,1) = [5.11, 6.12, 6.07]·(1 ± 0.5).
    const auto v = kharitonov_vertices(p.D(0, 0));
    const Polynomial expect[4] = {Polynomial{2.555, 3.06, 9.105}, Polynomial{2.555, 9.18, 9.105},
                                  Polynomial{7.665, 3.06, 3.035}, Polynomial{7.665, 9.18, 3.035}};
    for (int k = 0; k < 4; ++k)
        for (std::size_t c = 0; c < 3; ++c) CHECK(v[k][c] == doctest::Approx(expect[k][c]).epsilon(1e-12));

    const Problem nominal = spec.instantiate(0.0);
    for (const auto& e : nominal.D.entries()) CHECK(is_degenerate(e).full_point);
    CHECK_THROWS_AS((void)spec.instantiate(-0.1), DomainError);
}

TEST_CASE("theta fixture has point couplings") {
    const Problem p = load_problem("@manipulator-theta").instantiate(0.01);
    CHECK(is_degenerate(p.B(0, 1)).full_point);
    CHECK(p.B(0, 1).center() == Polynomial{0, 0, 0, 1.5});
    CHECK(p.B(1, 0).center() == Polynomial{0, 0, 0, -0.5});
    CHECK_THROWS_AS((void)load_problem("@nope"), MalformedInput);
    CHECK(bundled_fixtures().size() == 2);
}

TEST_CASE("round trip is idempotent") {
    for (const auto& name : bundled_fixtures()) {
        const ProblemSpec a = load_problem(name);
        const std::string once = serialize(a);
        const ProblemSpec b = parse_problem(once);
        CHECK(serialize(b) == once);
        CHECK(b.B == a.B);
        CHECK(b.D == a.D);
        CHECK(b.A == a.A);
        CHECK(b.C == a.C);
    }
}

TEST_CASE("defaults and coefficient forms") {
    const ProblemSpec s = parse_problem(R"({"B": [[[1, [2, 3], {"center": 4, "scale": 2}]]], "D": [[[1]]]})");
    CHECK(s.n == 1);
    CHECK(s.A == identity_polynomial_matrix(1));
    CHECK(s.C == identity_polynomial_matrix(1));
    const Problem p = s.instantiate(0.25);
    CHECK(p.B(0, 0)[0] == Interval{1, 1});
    CHECK(p.B(0, 0)[1] == Interval{2, 3});
    CHECK(p.B(0, 0)[2] == Interval{3.5, 4.5});

    const ProblemSpec checks = parse_problem(
        R"({"B": [[[1]]], "D": [[[1, 1]]], "checks": {"hinf": {}, "sector": {"K": [[2]], "eta": 0.1}}})");
    CHECK(checks.hinf);
    CHECK_FALSE(checks.spr);
    REQUIRE(checks.sector);
    CHECK(checks.sector->K(0, 0) == 2.0);
    CHECK(checks.sector->eta == 0.1);
}

TEST_CASE("malformed input names the field") {
    const std::string inverted = message_of(R"({"B": [[[0, [3, 1]]]], "D": [[[1]]]})");
    CHECK(inverted.find("B[0][0][1]") != std::string::npos);
    CHECK(inverted.find("lo > hi") != std::string::npos);

    CHECK(message_of(R"({"B": [[[1]]]})").find("D") != std::string::npos);
    CHECK(message_of(R"({"B": [[[1]]], "D": [[[1]]], "extra": 1})").find("extra") != std::string::npos);
    CHECK(message_of(R"({"B": [[[1]]], "D": [[[1]], [[2]]]})").find("D") != std::string::npos);
    CHECK(message_of(R"({"B": [[["x"]]], "D": [[[1]]]})").find("B[0][0][0]") != std::string::npos);
    CHECK(message_of(R"({"B": [[[{"center": 1}]]], "D": [[[1]]]})").find("scale") != std::string::npos);
    CHECK(message_of(R"({"B": [[[1]]], "D": [[[1]]], "A": "zero"})").find("A") != std::string::npos);

    const std::string syntax = message_of("{\n  \"B\": [[[1]]],\n  \"D\": [[[1]] \n}");
    INFO(syntax);
    CHECK(syntax.find("<input>:4:") != std::string::npos);
    CHECK_THROWS_AS((void)load_problem("/nonexistent/problem.json"), MalformedInput);
}

TEST_CASE("negative templates keep ordered bounds") {
    const ProblemSpec s = parse_problem(R"({"B": [[[{"center": -2, "scale": -2}]]], "D": [[[1]]]})");
    const Problem p = s.instantiate(0.5);
    CHECK(p.B(0, 0)[0] == Interval{-3, -1});
}

TEST_CASE("closed loop on the fixture matches analyze") {
    const Problem p = load_problem("@manipulator").instantiate(0.01);
    CHECK(closed_loop_stable(p, Method::thm1_column).verdict == analyze(p, Method::thm1_column).verdict);
}
