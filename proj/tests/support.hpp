#pragma once

#include <cmath>
#include <vector>

#include "ivstab/engine.hpp"
#include "ivstab/random.hpp"

namespace ivstab::test {

/// Π(s+a_i)·Π(s²+b_j s+c_j) with every a, b, c drawn from [lo, hi].
inline Polynomial stable_product(Rng& rng, int linear, int quadratic, double lo = 0.05, double hi = 3.0) {
    Polynomial p{1.0};
    for (int i = 0; i < linear; ++i) p = p * Polynomial{rng.uniform(lo, hi), 1.0};
    for (int j = 0; j < quadratic; ++j) p = p * Polynomial{rng.uniform(lo, hi), rng.uniform(lo, hi), 1.0};
    return p;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-300) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), abs_floor});
}

inline bool close_rel(Complex a, Complex b, double rel) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Box [c − w·|c|, c + w·|c|] around every coefficient (point where c is zero).
inline IntervalPolynomial box_around(const Polynomial& c, double w) {
    std::vector<Interval> b;
    for (double x : c.vec()) b.push_back({x - w * std::abs(x), x + w * std::abs(x)});
    return IntervalPolynomial(std::move(b));
}

inline Problem scalar_problem(IntervalPolynomial b) {
    Problem p{IntervalPolynomialMatrix(1), PolynomialMatrix(1), IntervalPolynomialMatrix(1), PolynomialMatrix(1)};
    p.B(0, 0) = std::move(b);
    p.A(0, 0) = Polynomial{1.0};
    p.D(0, 0) = IntervalPolynomial::point(Polynomial{0.0});
    p.C(0, 0) = Polynomial{0.0};
    return p;
}

/// Random n=2 problem: nominal det(B0 A + D0 C) is a product of stable
/// factors when `coupling` is small; entries of B and D get relative boxes of width `w`.
inline Problem random_problem(Rng& rng, double w, int point_entries = 4, double coupling = 0.3) {
    const std::size_t n = 2;
    Problem p{IntervalPolynomialMatrix(n), identity_polynomial_matrix(n), IntervalPolynomialMatrix(n),
              identity_polynomial_matrix(n)};
    // Diagonal dominant nominal: B0 = diag(stable quadratics), D0 small couplings.
    PolynomialMatrix B0(n), D0(n);
    B0(0, 0) = stable_product(rng, 0, 1, 0.5, 3.0);
    B0(1, 1) = stable_product(rng, 0, 1, 0.5, 3.0);
    B0(0, 1) = Polynomial{rng.uniform(-coupling, coupling), rng.uniform(-coupling, coupling)};
    B0(1, 0) = Polynomial{rng.uniform(-coupling, coupling), rng.uniform(-coupling, coupling)};
    D0(0, 0) = Polynomial{rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)};
    D0(1, 1) = Polynomial{rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)};
    D0(0, 1) = Polynomial{rng.uniform(-coupling, coupling)};
    D0(1, 0) = Polynomial{rng.uniform(-coupling, coupling)};
    // Random subset of entries kept as points to keep enumeration small.
    std::vector<std::size_t> idx{0, 1, 2, 3, 4, 5, 6, 7};
    for (std::size_t k = idx.size(); k > 1; --k) std::swap(idx[k - 1], idx[rng.below(k)]);
    std::vector<bool> point(8, false);
    for (int k = 0; k < point_entries; ++k) point[idx[static_cast<std::size_t>(k)]] = true;
    for (std::size_t k = 0; k < 4; ++k) {
        p.B.entries()[k] = point[k] ? IntervalPolynomial::point(B0.entries()[k]) : box_around(B0.entries()[k], w);
        p.D.entries()[k] = point[k + 4] ? IntervalPolynomial::point(D0.entries()[k]) : box_around(D0.entries()[k], w);
    }
    return p;
}

}  // namespace ivstab::test
