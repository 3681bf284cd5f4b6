#include "doctest.h"

#include <set>

#include "ivstab/engine.hpp"
#include "ivstab/problem.hpp"
#include "support.hpp"

using namespace ivstab;

namespace {

std::set<std::string> edge_sets(const CollapseResult& c) {
    std::set<std::string> out;
    for (const auto& p : c.patterns) {
        std::string s;
        for (const auto& e : p.edge_positions) s += to_string(e);
        out.insert(s);
    }
    return out;
}

IntervalPolynomialMatrix wide_matrix(std::size_t n) {
    IntervalPolynomialMatrix m(n);
    for (auto& e : m.entries()) e = IntervalPolynomial{{1, 2}, {3, 4}, {5, 6}};
    return m;
}

// Completes a partial injection row -> column to a permutation.
bool extends_to_permutation(const std::vector<std::pair<int, int>>& pairs, std::size_t n) {
    std::set<int> rows, cols;
    for (auto [r, c] : pairs) {
        if (!rows.insert(r).second || !cols.insert(c).second) return false;
    }
    std::vector<int> free_cols;
    for (int c = 0; c < static_cast<int>(n); ++c)
        if (!cols.count(c)) free_cols.push_back(c);
    std::size_t next = 0;
    for (int r = 0; r < static_cast<int>(n); ++r)
        if (!rows.count(r)) cols.insert(free_cols[next++]);
    return cols.size() == n;
}

}  // namespace

TEST_CASE("count formulas") {
    const auto c1 = count_formulas(1);
    CHECK(c1.prop1 == 16);
    CHECK(c1.thm1 == 32);
    CHECK(c1.prop1_patterns == 1);
    CHECK(c1.thm1_patterns == 2);
    const auto c2 = count_formulas(2);
    CHECK(c2.prop1_patterns == 4);
    CHECK(c2.thm1_patterns == 12);
    CHECK(c2.prop1 == 262144);
    CHECK(c2.thm1 == 786432);
    CHECK(count_formulas(3).thm1_patterns == 120);
    CHECK(count_formulas(4).thm1_patterns == 1680);
    CHECK(count_formulas(6).prop1 == (ConfigCount(1) << 144) * 720 * 720);
}

TEST_CASE("enumerated pattern counts match the formulas") {
    for (std::size_t n = 1; n <= 4; ++n) {
        CHECK(ConfigCount(thm1_patterns(n, Thm1Variant::row).size()) == count_formulas(n).thm1_patterns);
        CHECK(ConfigCount(thm1_patterns(n, Thm1Variant::column).size()) == count_formulas(n).thm1_patterns);
    }
    for (std::size_t n = 1; n <= 3; ++n)
        CHECK(ConfigCount(prop1_patterns(n).size()) == count_formulas(n).prop1_patterns);
}

TEST_CASE("prop1 structure") {
    for (std::size_t n = 1; n <= 3; ++n)
        for (const auto& c : prop1_patterns(n)) {
            CHECK(c.arity() == 2 * n);
            CHECK(c.is_skeleton());
            for (Side s : {Side::B, Side::D}) {
                std::vector<std::pair<int, int>> pairs;
                for (const auto& p : c.edge_positions)
                    if (p.side == s) pairs.emplace_back(p.row, p.col);
                CHECK(pairs.size() == n);
                CHECK(extends_to_permutation(pairs, n));
            }
        }
}

TEST_CASE("thm1 structure") {
    for (std::size_t n = 1; n <= 4; ++n)
        for (auto variant : {Thm1Variant::row, Thm1Variant::column}) {
            for (const auto& c : thm1_patterns(n, variant)) {
                CHECK(c.arity() == n);
                std::set<int> slots;
                for (const auto& p : c.edge_positions) slots.insert(variant == Thm1Variant::row ? p.row : p.col);
                CHECK(slots.size() == n);
                for (Side s : {Side::B, Side::D}) {
                    std::vector<std::pair<int, int>> pairs;
                    for (const auto& p : c.edge_positions)
                        if (p.side == s) pairs.emplace_back(p.row, p.col);
                    CHECK(extends_to_permutation(pairs, n));
                }
            }
        }
    const auto n1 = thm1_patterns(1, Thm1Variant::row);
    REQUIRE(n1.size() == 2);
    CHECK(n1[0].edge_positions[0].side != n1[1].edge_positions[0].side);
}

TEST_CASE("lemma2 sets") {
    CHECK(lemma2_patterns(2, 1, Lemma2Set::N).size() == 4);
    CHECK(lemma2_patterns(2, 1, Lemma2Set::N_E).size() == 4);
    const auto n1 = lemma2_patterns(1, 1, Lemma2Set::N);
    REQUIRE(n1.size() == 1);
    CHECK(n1[0].arity() == 2);
    const auto e1 = lemma2_patterns(1, 1, Lemma2Set::N_E);
    REQUIRE(e1.size() == 2);
    CHECK(e1[0].arity() == 1);
    for (const auto& c : lemma2_patterns(3, 2, Lemma2Set::N))
        for (const auto& p : c.edge_positions) CHECK(p.row == 1);
    CHECK_THROWS_AS((void)lemma2_patterns(2, 3, Lemma2Set::N), DomainError);
    CHECK_THROWS_AS((void)lemma2_patterns(2, 0, Lemma2Set::N_E), DomainError);
}

TEST_CASE("full enumeration stream") {
    const auto B = wide_matrix(1), D = wide_matrix(1);
    auto s = prop1_enumerate(B, D, EnumerationMode::full);
    CHECK(s.total() == 16);
    EdgeConfiguration c;
    std::size_t k = 0;
    std::set<std::pair<int, int>> seen;
    while (s.next(c)) {
        CHECK_FALSE(c.is_skeleton());
        seen.insert({c.selections[0].index, c.selections[1].index});
        ++k;
    }
    CHECK(k == 16);
    CHECK(seen.size() == 16);
    CHECK_THROWS_AS((void)prop1_enumerate(wide_matrix(2), wide_matrix(2), EnumerationMode::full, 1000), CapExceeded);
    CHECK_THROWS_AS((void)thm1_enumerate(wide_matrix(2), wide_matrix(3), Thm1Variant::row, EnumerationMode::patterns_only),
                    DimensionMismatch);
}

TEST_CASE("manipulator collapse") {
    const Problem p = load_problem("@manipulator").instantiate(0.1);
    auto prop = prop1_enumerate(p.B, p.D, EnumerationMode::patterns_only);
    const auto cp = collapse_degenerate(prop, p.B, p.D);
    CHECK(cp.raw_patterns == 4);
    CHECK(cp.patterns.size() == 2);
    CHECK(edge_sets(cp) == std::set<std::string>{"B(1,2)B(2,1)D(1,2)D(2,1)", "B(1,2)B(2,1)D(1,1)D(2,2)"});
    CHECK(cp.full_count == ConfigCount(2) << 12);

    auto col = thm1_enumerate(p.B, p.D, Thm1Variant::column, EnumerationMode::patterns_only);
    const auto cc = collapse_degenerate(col, p.B, p.D);
    CHECK(cc.raw_patterns == 12);
    CHECK(cc.patterns.size() == 7);
    CHECK(edge_sets(cc) == std::set<std::string>{"B(1,2)B(2,1)", "B(1,2)D(1,1)", "B(1,2)D(2,1)", "B(2,1)D(1,2)",
                                                  "B(2,1)D(2,2)", "D(1,1)D(2,2)", "D(1,2)D(2,1)"});
    CHECK(cc.full_count == ConfigCount(7) << 12);

    auto row = thm1_enumerate(p.B, p.D, Thm1Variant::row, EnumerationMode::patterns_only);
    const auto cr = collapse_degenerate(row, p.B, p.D);
    CHECK(cr.raw_patterns == 12);
    CHECK(cr.patterns.size() == 7);
    CHECK(edge_sets(cr).count("B(1,2)D(2,2)") == 1);
}

TEST_CASE("collapse of point boxes") {
    IntervalPolynomialMatrix B(2), D(2);
    for (auto& e : B.entries()) e = IntervalPolynomial{{1, 1}, {2, 2}};
    for (auto& e : D.entries()) e = IntervalPolynomial{{3, 3}};
    auto s = thm1_enumerate(B, D, Thm1Variant::row, EnumerationMode::patterns_only);
    const auto c = collapse_degenerate(s, B, D);
    REQUIRE(c.patterns.size() == 1);
    CHECK(c.patterns[0].edge_positions.empty());
    CHECK(c.distinct_families == 1);
    CHECK(c.full_count == 1);
}

TEST_CASE("full-mode dedup of identical families") {
    // n=1 with D a point: the 16 prop1 configurations reduce to the 4 B-edges,
    // of which the degenerate ones coincide with vertices.
    IntervalPolynomialMatrix B(1), D(1);
    B(0, 0) = IntervalPolynomial{{1, 2}, {3, 4}, {5, 6}};
    D(0, 0) = IntervalPolynomial{{1, 1}};
    auto s = prop1_enumerate(B, D, EnumerationMode::full);
    const auto c = collapse_degenerate(s, B, D);
    CHECK(c.input_configurations == 16);
    CHECK(c.distinct_input_families == 4);
    CHECK(c.distinct_families == 4);
}

TEST_CASE("canonical families instantiate inside the boxes") {
    Rng rng(17);
    const Problem p = test::random_problem(rng, 0.3, 2);
    for (Method m : {Method::prop1, Method::thm1_row, Method::thm1_column}) {
        std::uint64_t visited = for_each_family(p, method_patterns(m, 2), [&](const ParamFamily& f, std::uint64_t) {
            const std::size_t a = f.arity();
            std::vector<std::vector<double>> lambdas{std::vector<double>(a, 0.5)};
            for (std::size_t c = 0; c < (std::size_t{1} << a); ++c) {
                std::vector<double> l(a);
                for (std::size_t e = 0; e < a; ++e) l[e] = (c >> e) & 1u;
                lambdas.push_back(l);
            }
            for (const auto& l : lambdas) {
                const MemberPair mp = instantiate(f, l);
                for (std::size_t k = 0; k < 4; ++k) {
                    CHECK(p.B.entries()[k].contains(mp.B.entries()[k], 1e-12));
                    CHECK(p.D.entries()[k].contains(mp.D.entries()[k], 1e-12));
                }
            }
            return true;
        });
        CHECK(visited > 0);
    }
}

TEST_CASE("family enumerator decode is consistent with next") {
    Rng rng(3);
    const Problem p = test::random_problem(rng, 0.2, 3);
    std::vector<EntryChoices> choices;
    for (const auto& e : p.B.entries()) choices.push_back(entry_choices(e));
    for (const auto& e : p.D.entries()) choices.push_back(entry_choices(e));
    ConfigStream s(thm1_patterns(2, Thm1Variant::row), EnumerationMode::patterns_only);
    const auto col = collapse_degenerate(s, p.B, p.D);
    FamilyEnumerator fe(col.patterns, choices, 2);
    CanonicalFamily cf;
    std::size_t p_idx = 0;
    std::uint64_t k = 0, total = 0;
    while (fe.next(cf)) {
        while (k >= fe.count(p_idx)) {
            ++p_idx;
            k = 0;
        }
        const CanonicalFamily d = fe.decode(p_idx, k++);
        CHECK(d.pattern == cf.pattern);
        CHECK(d.edge_ends == cf.edge_ends);
        ++total;
    }
    CHECK(ConfigCount(total) == fe.total());
}
