#include "doctest.h"

#include "ivstab/engine.hpp"
#include "ivstab/hull.hpp"
#include "ivstab/problem.hpp"
#include "ivstab/report.hpp"
#include "support.hpp"
#include "sweep.hpp"
#include "vertex_table.hpp"

using namespace ivstab;
using ivstab::test::close_rel;

namespace {

/// Scalar family p(λ) = λ·from + (1−λ)·to, realized as n=1 with B an edge, A = C = [1], D = [0].
ParamFamily scalar_family(const Polynomial& from, const Polynomial& to) {
    ParamFamily f;
    f.config.n = 1;
    f.config.selections = {{SelectionKind::edge, 1}, {SelectionKind::vertex, 1}};
    f.config.edge_positions = {Position{Side::B, 0, 0}};
    f.A = PolynomialMatrix{{Polynomial{1.0}}};
    f.C = PolynomialMatrix{{Polynomial{1.0}}};
    f.B = PolynomialMatrix{{to}};
    f.D = PolynomialMatrix{{Polynomial{}}};
    f.edges.push_back(EdgeSlot{Position{Side::B, 0, 0}, from, to});
    return f;
}

ParamFamily constant_family(const Polynomial& p) {
    ParamFamily f = scalar_family(p, p);
    f.edges.clear();
    f.B(0, 0) = p;
    f.config.selections[0] = {SelectionKind::vertex, 1};
    f.config.edge_positions.clear();
    return f;
}

bool replay_fails(const ParamFamily& f, const Witness& w) {
    const Polynomial d = member_determinant(f, w.lambda);
    return d.is_zero() || !is_hurwitz(d).stable;
}

Problem manipulator(double eps) { return load_problem("@manipulator").instantiate(eps); }

// p(s, λ) = s³ + (1+10t)s² + (1+10t)s + (1.01+20t), t = λ − 0.05: unstable only for λ in (0.04, 0.06).
ParamFamily grid_miss_family() {
    return scalar_family(Polynomial{20.01, 10.5, 10.5, 1.0}, Polynomial{0.01, 0.5, 0.5, 1.0});
}

}  // namespace

TEST_CASE("instantiate") {
    const ParamFamily f = scalar_family(Polynomial{1, 3, 6}, Polynomial{1, 4, 6});
    const std::vector<double> zero{0.0}, one{1.0}, half{0.5};
    CHECK(instantiate(f, zero).B(0, 0) == Polynomial{1, 4, 6});
    CHECK(instantiate(f, one).B(0, 0) == Polynomial{1, 3, 6});
    CHECK(instantiate(f, half).B(0, 0) == Polynomial{1, 3.5, 6});
    const std::vector<double> bad{1.5}, two{0.1, 0.2};
    CHECK_THROWS_AS((void)instantiate(f, bad), DomainError);
    CHECK_THROWS_AS((void)instantiate(f, two), DomainError);
}

TEST_CASE("make_family agrees with canonical families") {
    const Problem p = manipulator(0.2);
    for_each_family(p, method_patterns(Method::thm1_row, 2), [&](const ParamFamily& f, std::uint64_t k) {
        const ParamFamily g = make_family(p, f.config);
        REQUIRE(g.arity() == f.arity());
        const std::vector<double> l(f.arity(), 0.3);
        CHECK(member_determinant(f, l) == member_determinant(g, l));
        return k < 200;
    });
    CHECK_THROWS_AS((void)make_family(p, method_patterns(Method::thm1_row, 2)[0]), DomainError);
}

TEST_CASE("value set hull basics") {
    const ParamFamily c = constant_family(Polynomial{2, 1});
    const ValueSetHull h0 = value_set_hull(c, 1.0);
    CHECK(h0.corner_values.size() == 1);
    CHECK(h0.hull.size() == 1);
    CHECK(h0.distance == doctest::Approx(std::sqrt(5.0)));

    const ParamFamily seg = scalar_family(Polynomial{1, 3, 6}, Polynomial{2, 4, 5});
    const ValueSetHull h = value_set_hull(seg, 0.0);
    REQUIRE(h.hull.size() == 2);
    CHECK(std::min(h.hull[0].real(), h.hull[1].real()) == 1.0);
    CHECK(std::max(h.hull[0].real(), h.hull[1].real()) == 2.0);
    CHECK(h.distance == doctest::Approx(1.0));
}

TEST_CASE("mapping containment on random families") {
    Rng rng(77);
    int trials = 0;
    while (trials < 300) {
        const Problem p = test::random_problem(rng, 0.4, 2);
        const Method m = static_cast<Method>(rng.below(3));
        for_each_family(p, method_patterns(m, 2), [&](const ParamFamily& f, std::uint64_t) {
            const double w = rng.uniform(0.0, 5.0);
            const ValueSetHull h = value_set_hull(f, w);
            std::vector<double> l(f.arity());
            for (auto& x : l) x = rng.uniform();
            const MemberPair mp = instantiate(f, l);
            ComplexMatrix M = eval_matrix(compose_family_member(mp.B, f.A, mp.D, f.C), Complex(0, w));
            const Complex v = complex_det(M);
            double scale = 0.0;
            for (auto z : h.corner_values) scale = std::max(scale, std::abs(z));
            CHECK(signed_distance(h.hull, v) <= 1e-9 * std::max(scale, 1.0));
            return ++trials % 10 != 0;
        });
    }
}

TEST_CASE("corner sets agree with the numeric value set") {
    const Problem p = manipulator(0.3);
    for_each_family(p, method_patterns(Method::prop1, 2), [&](const ParamFamily& f, std::uint64_t k) {
        const detail::CornerSet cs = detail::corner_set(f);
        for (double w : {0.0, 0.7, 3.1}) {
            const ValueSetHull h = value_set_hull(f, w);
            for (std::size_t c = 0; c < h.corner_values.size(); ++c)
                CHECK(close_rel(eval_complex(Polynomial(std::vector<double>(cs.corner(c).begin(), cs.corner(c).end())),
                                             Complex(0, w)),
                                h.corner_values[c], 1e-9));
        }
        return k < 20;
    });
}

TEST_CASE("vertex table matches symbolic determinants") {
    Rng rng(5);
    for (int t = 0; t < 5; ++t) {
        const Problem p = test::random_problem(rng, 0.3, 0);
        std::vector<EntryChoices> ch;
        for (const auto& e : p.B.entries()) ch.push_back(entry_choices(e));
        for (const auto& e : p.D.entries()) ch.push_back(entry_choices(e));
        const detail::VertexTable table(p, ch, kDefaultRouthTol, 1u << 20);
        REQUIRE(table.materialized());
        for (int s = 0; s < 50; ++s) {
            const std::uint64_t combo = rng.below(table.size());
            const auto ids = table.ids(combo);
            CHECK(table.index(ids) == combo);
            PolynomialMatrix B(2), D(2);
            for (std::size_t k = 0; k < 4; ++k) {
                B.entries()[k] = ch[k].vertices[ids[k]];
                D.entries()[k] = ch[k + 4].vertices[ids[k + 4]];
            }
            const Polynomial d = determinant(compose_family_member(B, p.A, D, p.C));
            const auto row = table.det(combo);
            for (std::size_t k = 0; k < row.size(); ++k) CHECK(row[k] == doctest::Approx(d[k]).epsilon(1e-12));
            const auto fresh = table.compute(ids);
            for (std::size_t k = 0; k < row.size(); ++k) CHECK(fresh[k] == doctest::Approx(row[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero exclusion matches a dense grid on scalar edges") {
    const auto verts = kharitonov_vertices(IntervalPolynomial{{1, 2}, {3, 4}, {5, 6}});
    const auto edges = kharitonov_edges(IntervalPolynomial{{1, 2}, {3, 4}, {5, 6}});
    for (const auto& e : edges) {
        const ParamFamily f = scalar_family(e.from, e.to);
        const Certificate c = zero_exclusion_sweep(f);
        bool grid_stable = true;
        for (int k = 0; k < 1000; ++k) {
            const std::vector<double> l{k / 999.0};
            grid_stable = grid_stable && is_hurwitz(member_determinant(f, l)).stable;
        }
        CHECK(c.verdict == (grid_stable ? Verdict::stable : Verdict::unstable));
    }
    (void)verts;

    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        const Polynomial center = test::stable_product(rng, static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(2)), 0.05, 2.0);
        const IntervalPolynomial box = test::box_around(center, rng.uniform(0.0, 0.6));
        for (const auto& e : kharitonov_edges(box)) {
            const ParamFamily f = scalar_family(e.from, e.to);
            const Certificate c = zero_exclusion_sweep(f);
            bool grid_stable = true;
            for (int k = 0; k < 1000 && grid_stable; ++k) {
                const std::vector<double> l{k / 999.0};
                grid_stable = is_hurwitz(member_determinant(f, l)).stable;
            }
            if (c.verdict == Verdict::unstable) {
                REQUIRE(c.witness);
                CHECK(replay_fails(f, *c.witness));
            } else if (c.verdict == Verdict::stable) {
                CHECK(grid_stable);
            }
        }
    }
}

TEST_CASE("zero exclusion on fixed members") {
    const ParamFamily bad = constant_family(Polynomial{-6, 1, 4, 1});
    const Certificate c = zero_exclusion_sweep(bad);
    CHECK(c.verdict == Verdict::unstable);
    REQUIRE(c.witness);
    CHECK(c.witness->determinant == Polynomial{-6, 1, 4, 1});
    CHECK(zero_exclusion_sweep(constant_family(Polynomial{6, 11, 8, 4, 1})).verdict == Verdict::stable);
}

TEST_CASE("grid misses a narrow instability that the sweep catches") {
    const ParamFamily f = grid_miss_family();
    for (int k = 0; k <= 10; ++k) CHECK(is_hurwitz(member_determinant(f, std::vector<double>{k / 10.0})).stable);
    CHECK_FALSE(is_hurwitz(member_determinant(f, std::vector<double>{0.05})).stable);

    const Certificate g = grid_check(f, 10);
    CHECK(g.verdict == Verdict::inconclusive);
    CHECK(g.grid_only);

    const Certificate z = zero_exclusion_sweep(f);
    CHECK(z.verdict == Verdict::unstable);
    REQUIRE(z.witness);
    CHECK(replay_fails(f, *z.witness));
    CHECK(z.witness->lambda[0] > 0.04);
    CHECK(z.witness->lambda[0] < 0.06);
}

TEST_CASE("grid check") {
    CHECK(grid_check(constant_family(Polynomial{1, 1}), 5).verdict == Verdict::inconclusive);
    CHECK(grid_check(constant_family(Polynomial{-1, 1}), 5).verdict == Verdict::unstable);
    const Certificate c = grid_check(scalar_family(Polynomial{1, 1}, Polynomial{-1, 1}), 4);
    CHECK(c.verdict == Verdict::unstable);
    REQUIRE(c.witness);
    CHECK(c.witness->lambda[0] == 0.0);
    CHECK_THROWS_AS((void)grid_check(grid_miss_family(), 2'000'000), CapExceeded);
}

TEST_CASE("degree invariance") {
    const DegreeCheck ok = degree_invariance_check(manipulator(0.5));
    CHECK(ok.ok);
    CHECK(ok.degree == 6);

    Problem drop = test::scalar_problem(IntervalPolynomial{{1, 1}, {-1, 1}});
    const DegreeCheck d = degree_invariance_check(drop);
    CHECK_FALSE(d.ok);
    CHECK_FALSE(d.evidence.empty());

    const DegreeCheck one = degree_invariance_check(test::scalar_problem(IntervalPolynomial{{0, 0}, {1, 2}}));
    CHECK(one.ok);
    CHECK(one.degree == 1);
}

TEST_CASE("analysis of the manipulator") {
    const AnalysisReport small = analyze(manipulator(0.01), Method::thm1_row);
    CHECK(small.verdict == Verdict::stable);
    CHECK(small.stable == small.checked);
    CHECK(ConfigCount(small.checked) == small.families_total);

    const AnalysisReport big = analyze(manipulator(0.99), Method::thm1_row);
    CHECK(big.verdict == Verdict::unstable);
    REQUIRE(big.first_witness);
    const ParamFamily f = make_family(manipulator(0.99), big.first_witness->config);
    CHECK(replay_fails(f, big.first_witness->witness));
}

TEST_CASE("degree drop aborts the analysis") {
    const AnalysisReport r = analyze(test::scalar_problem(IntervalPolynomial{{1, 1}, {-1, 1}}), Method::thm1_row);
    CHECK(r.aborted);
    CHECK(r.verdict == Verdict::inconclusive);
}

TEST_CASE("scalar interval polynomials reduce to the four vertices") {
    Rng rng(123);
    for (int t = 0; t < 30; ++t) {
        const Polynomial center = test::stable_product(rng, static_cast<int>(rng.below(3)), static_cast<int>(1 + rng.below(2)), 0.05, 2.0);
        const IntervalPolynomial box = test::box_around(center, rng.uniform(0.0, 0.3));
        bool vertices_stable = true;
        for (const auto& v : kharitonov_vertices(box)) vertices_stable = vertices_stable && is_hurwitz(v).stable;
        const AnalysisReport r = analyze(test::scalar_problem(box), Method::thm1_row);
        if (r.verdict != Verdict::inconclusive) CHECK((r.verdict == Verdict::stable) == vertices_stable);
    }
}

TEST_CASE("witness soundness on random problems") {
    Rng rng(2);
    int unstable = 0;
    for (int t = 0; t < 12; ++t) {
        const Problem p = test::random_problem(rng, 0.9, 3);
        for (Method m : {Method::prop1, Method::thm1_row}) {
            const AnalysisReport r = analyze(p, m);
            if (r.verdict != Verdict::unstable) continue;
            ++unstable;
            REQUIRE(r.first_witness);
            CHECK(replay_fails(make_family(p, r.first_witness->config), r.first_witness->witness));
        }
    }
    CHECK(unstable > 0);
}

TEST_CASE("reports do not depend on the worker count") {
    Rng rng(4);
    for (int t = 0; t < 4; ++t) {
        const Problem p = t == 0 ? manipulator(0.05) : test::random_problem(rng, 0.5, 2);
        AnalysisOptions one, many;
        many.jobs = 4;
        const auto a = strip_runtime(analysis_json(analyze(p, Method::thm1_row, one)));
        const auto b = strip_runtime(analysis_json(analyze(p, Method::thm1_row, many)));
        CHECK(a.dump() == b.dump());
    }
}

TEST_CASE("subsampling is deterministic and never claims stability") {
    AnalysisOptions o;
    o.max_configs = 100;
    o.seed = 9;
    const AnalysisReport a = analyze(manipulator(0.01), Method::thm1_row, o);
    const AnalysisReport b = analyze(manipulator(0.01), Method::thm1_row, o);
    CHECK(a.subsampled);
    CHECK(a.checked == 100);
    CHECK(a.verdict == Verdict::inconclusive);
    CHECK(strip_runtime(analysis_json(a)).dump() == strip_runtime(analysis_json(b)).dump());
}

TEST_CASE("robust margin on an analytic crossing") {
    // s² + s + c0 with c0 in [1 − 2ε, 1 + 2ε]: stable iff ε < 0.5.
    auto factory = [](double eps) {
        return test::scalar_problem(IntervalPolynomial{{1 - 2 * eps, 1 + 2 * eps}, {1, 1}, {1, 1}});
    };
    const MarginResult r = robust_margin(factory, 0.0, 1.0, Method::thm1_row, 1e-4);
    CHECK(r.eps_stable <= 0.5);
    CHECK(r.eps_unstable >= 0.5);
    CHECK(r.eps_unstable - r.eps_stable <= 1e-4);
    CHECK_THROWS_AS((void)robust_margin(factory, 0.6, 1.0, Method::thm1_row, 1e-3), DomainError);
    CHECK_THROWS_AS((void)robust_margin(factory, 0.0, 0.4, Method::thm1_row, 1e-3), DomainError);
}

TEST_CASE("margin monotonicity for the manipulator") {
    bool seen_unstable = false;
    for (int k = 0; k < 20; ++k) {
        const double eps = 0.01 + 0.3 * k / 19.0;
        const Verdict v = analyze(manipulator(eps), Method::thm1_row).verdict;
        if (seen_unstable) CHECK(v != Verdict::stable);
        if (v != Verdict::stable) seen_unstable = true;
    }
    CHECK(seen_unstable);
}

TEST_CASE("oracle") {
    Problem point = test::scalar_problem(IntervalPolynomial{{2, 2}, {3, 3}, {1, 1}});
    const OracleResult none = oracle_falsify(point, {});
    CHECK_FALSE(none.found);
    CHECK(none.vertices_exhausted);
    CHECK(none.vertices_tested == 1);

    OracleOptions o;
    o.samples = 10'000;
    o.seed = 1;
    CHECK_FALSE(oracle_falsify(manipulator(0.01), o).found);
    const OracleResult hit = oracle_falsify(manipulator(0.99), o);
    CHECK(hit.found);
    CHECK_FALSE(is_hurwitz(hit.determinant).stable);
    CHECK(determinant(compose_family_member(hit.B, manipulator(0.99).A, hit.D, manipulator(0.99).C)) == hit.determinant);
}

TEST_CASE("method names") {
    CHECK(parse_method("prop1") == Method::prop1);
    CHECK(parse_method("thm1_column") == Method::thm1_column);
    CHECK_THROWS_AS((void)parse_method("nope"), DomainError);
    CHECK(worst(Verdict::stable, Verdict::inconclusive) == Verdict::inconclusive);
    CHECK(worst(Verdict::unstable, Verdict::inconclusive) == Verdict::unstable);
}
