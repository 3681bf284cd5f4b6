#include "doctest.h"

#include "ivstab/engine.hpp"
#include "ivstab/problem.hpp"
#include "support.hpp"

using namespace ivstab;
using ivstab::test::close_rel;

namespace {

Polynomial random_poly(Rng& rng, std::size_t max_deg, double span = 2.0) {
    std::vector<double> c(1 + rng.below(max_deg + 1));
    for (auto& x : c) x = rng.uniform(-span, span);
    return Polynomial(c);
}

PolynomialMatrix random_matrix(Rng& rng, std::size_t n, std::size_t max_deg) {
    PolynomialMatrix m(n);
    for (auto& e : m.entries()) e = random_poly(rng, max_deg);
    return m;
}

bool coeffs_close(const Polynomial& a, const Polynomial& b, double rel) {
    const double scale = std::max(a.max_abs_coeff(), b.max_abs_coeff());
    for (std::size_t k = 0; k <= std::max(a.degree(), b.degree()); ++k)
        if (std::abs(a[k] - b[k]) > rel * scale) return false;
    return true;
}

}  // namespace

TEST_CASE("composition") {
    PolynomialMatrix B{{Polynomial{2}}}, A{{Polynomial{0, 1}}}, D{{Polynomial{1}}}, C{{Polynomial{3}}};
    CHECK(compose_family_member(B, A, D, C)(0, 0) == Polynomial{3, 2});

    Rng rng(4);
    const PolynomialMatrix A2 = random_matrix(rng, 2, 2), C2 = random_matrix(rng, 2, 2);
    CHECK(compose_family_member(identity_polynomial_matrix(2), A2, PolynomialMatrix(2), C2) == A2);
    CHECK_THROWS_AS((void)compose_family_member(PolynomialMatrix(2), A2, PolynomialMatrix(3), C2), DimensionMismatch);
}

TEST_CASE("manipulator inertia factorization") {
    for (double c : {0.0, 0.3, 1.0}) {
        PolynomialMatrix B{{Polynomial::monomial(3), Polynomial::monomial(3, 1 + c)},
                           {Polynomial::monomial(3, -1 + c), Polynomial::monomial(3)}};
        const PolynomialMatrix A = constant_matrix(RealMatrix{{1, 0}, {2, 1}});
        const PolynomialMatrix BA = B * A;
        CHECK(BA(0, 0) == Polynomial::monomial(3, 3 + 2 * c));
        CHECK(BA(0, 1) == Polynomial::monomial(3, 1 + c));
        CHECK(BA(1, 0) == Polynomial::monomial(3, 1 + c));
        CHECK(BA(1, 1) == Polynomial::monomial(3, 1));
    }
}

TEST_CASE("additivity in D") {
    Rng rng(8);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + rng.below(3);
        const auto B = random_matrix(rng, n, 2), A = random_matrix(rng, n, 2), C = random_matrix(rng, n, 2);
        const auto D1 = random_matrix(rng, n, 2), D2 = random_matrix(rng, n, 2);
        const auto lhs = compose_family_member(B, A, D1 + D2, C);
        const auto rhs = compose_family_member(B, A, D1, C) + compose_family_member(PolynomialMatrix(n), A, D2, C);
        for (std::size_t k = 0; k < n * n; ++k) CHECK(coeffs_close(lhs.entries()[k], rhs.entries()[k], 1e-12));
    }
}

TEST_CASE("determinant basics") {
    const PolynomialMatrix T{{Polynomial{0, 1}, Polynomial{1}}, {Polynomial{}, Polynomial{0, 1}}};
    CHECK(determinant(T) == Polynomial{0, 0, 1});
    CHECK(determinant(identity_polynomial_matrix(5)) == Polynomial{1});
    CHECK_THROWS_AS((void)determinant(identity_polynomial_matrix(9)), CapExceeded);
    CHECK(determinant(identity_polynomial_matrix(9), 9) == Polynomial{1});
}

TEST_CASE("determinant is multiplicative") {
    Rng rng(12);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 2 + rng.below(2);
        const auto P = random_matrix(rng, n, 2), Q = random_matrix(rng, n, 2);
        CHECK(coeffs_close(determinant(P * Q), determinant(P) * determinant(Q), 1e-9));
    }
}

TEST_CASE("determinant is alternating") {
    Rng rng(13);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 2 + rng.below(2);
        PolynomialMatrix M(n);
        for (auto& e : M.entries()) {
            std::vector<double> c(1 + rng.below(3));
            for (auto& x : c) x = static_cast<double>(static_cast<int>(rng.below(11)) - 5);
            e = Polynomial(c);
        }
        PolynomialMatrix S = M;
        for (std::size_t j = 0; j < n; ++j) std::swap(S(0, j), S(1, j));
        CHECK(determinant(S) == -determinant(M));
    }
}

TEST_CASE("symbolic and numeric determinants agree") {
    Rng rng(21);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng.below(3);
        const auto M = random_matrix(rng, n, 3);
        const Complex z(rng.uniform(-2, 2), rng.uniform(-2, 2));
        CHECK(close_rel(complex_det(eval_matrix(M, z)), eval_complex(determinant(M), z), 1e-8));
    }
}

TEST_CASE("nominal manipulator determinant") {
    const Problem p = load_problem("@manipulator").instantiate(0.0);
    PolynomialMatrix B(2), D(2);
    for (std::size_t k = 0; k < 4; ++k) {
        B.entries()[k] = p.B.entries()[k].center();
        D.entries()[k] = p.D.entries()[k].center();
    }
    const PolynomialMatrix M = compose_family_member(B, p.A, D, p.C);
    const Polynomial det = determinant(M);
    CHECK(det.degree() == 6);
    CHECK(close_rel(complex_det(eval_matrix(M, 1.0)), eval_complex(det, 1.0), 1e-12));
    CHECK(is_hurwitz(det).stable);
}

TEST_CASE("complex evaluation helpers") {
    const PolynomialMatrix S{{Polynomial{0, 1}}};
    CHECK(eval_matrix(S, Complex(0, 1))(0, 0) == Complex(0, 1));
    PolynomialMatrix sI(3);
    for (std::size_t i = 0; i < 3; ++i) sI(i, i) = Polynomial{0, 1};
    const Complex z(0.3, -1.2);
    const auto E = eval_matrix(sI, z);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(E(i, j) == (i == j ? z : Complex{}));
    Rng rng(2);
    const auto M = random_matrix(rng, 2, 3);
    const auto E0 = eval_matrix(M, 0.0);
    for (std::size_t k = 0; k < 4; ++k) CHECK(E0.entries()[k] == Complex(M.entries()[k][0], 0));

    CHECK(complex_det(ComplexMatrix{{1, 0}, {0, 1}}) == Complex(1, 0));
    CHECK(complex_det(ComplexMatrix{{Complex(0, 1), 0}, {0, Complex(0, 1)}}) == Complex(-1, 0));
    CHECK(std::abs(complex_det(ComplexMatrix{{1, 2}, {2, 4}})) < 1e-15);
}

TEST_CASE("complex inverse") {
    Rng rng(31);
    for (int t = 0; t < 50; ++t) {
        ComplexMatrix M(3);
        for (auto& z : M.entries()) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const LuResult r = complex_inverse(M);
        REQUIRE_FALSE(r.singular);
        const ComplexMatrix I = M * r.inverse;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(I(i, j) - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
    CHECK(complex_inverse(ComplexMatrix{{1, 2}, {2, 4}}).singular);
}
