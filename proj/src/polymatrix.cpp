#include "ivstab/polymatrix.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace ivstab {

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                                std::to_string(b));
    }
}

}  // namespace

PolynomialMatrix identity_polynomial_matrix(std::size_t n) {
    PolynomialMatrix I(n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = Polynomial{1.0};
    return I;
}

PolynomialMatrix constant_matrix(const RealMatrix& m) {
    PolynomialMatrix out(m.n());
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j) out(i, j) = Polynomial{m(i, j)};
    return out;
}

PolynomialMatrix operator+(const PolynomialMatrix& a, const PolynomialMatrix& b) {
    require_same(a.n(), b.n(), "matrix sum");
    PolynomialMatrix r(a.n());
    for (std::size_t k = 0; k < a.entries().size(); ++k) r.entries()[k] = a.entries()[k] + b.entries()[k];
    return r;
}

PolynomialMatrix operator*(const PolynomialMatrix& a, const PolynomialMatrix& b) {
    require_same(a.n(), b.n(), "matrix product");
    const std::size_t n = a.n();
    PolynomialMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            Polynomial acc;
            for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * b(j, k);
            r(i, k) = std::move(acc);
        }
    return r;
}

PolynomialMatrix compose_family_member(const PolynomialMatrix& B, const PolynomialMatrix& A,
                                       const PolynomialMatrix& D, const PolynomialMatrix& C) {
    require_same(B.n(), A.n(), "compose B,A");
    require_same(B.n(), D.n(), "compose B,D");
    require_same(B.n(), C.n(), "compose B,C");
    return B * A + D * C;
}

Polynomial determinant(const PolynomialMatrix& M, std::size_t max_order) {
    const std::size_t n = M.n();
    if (n == 0) return Polynomial{1.0};
    if (n > max_order) {
        throw CapExceeded("symbolic determinant limited to order " + std::to_string(max_order) + ", got " +
                          std::to_string(n));
    }
    // minor[S] = det of the last |S| rows restricted to the column set S.
    std::vector<Polynomial> minor(std::size_t{1} << n);
    minor[0] = Polynomial{1.0};
    for (std::uint32_t S = 1; S < (1u << n); ++S) {
        const std::size_t k = static_cast<std::size_t>(std::popcount(S));
        const std::size_t row = n - k;
        Polynomial acc;
        int pos = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(S & (1u << j))) continue;
            const Polynomial& m = minor[S & ~(1u << j)];
            if (!M(row, j).is_zero() && !m.is_zero()) {
                Polynomial term = M(row, j) * m;
                acc = (pos % 2 == 0) ? acc + term : acc - term;
            }
            ++pos;
        }
        minor[S] = std::move(acc);
    }
    return minor[(std::size_t{1} << n) - 1];
}

ComplexMatrix eval_matrix(const PolynomialMatrix& M, Complex z) {
    ComplexMatrix out(M.n());
    for (std::size_t k = 0; k < M.entries().size(); ++k) out.entries()[k] = M.entries()[k].eval(z);
    return out;
}

Complex complex_det(ComplexMatrix M) {
    const std::size_t n = M.n();
    Complex det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(M(r, c)) > std::abs(M(p, c))) p = r;
        if (M(p, c) == Complex{}) return Complex{};
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(M(p, j), M(c, j));
            det = -det;
        }
        det *= M(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            const Complex f = M(r, c) / M(c, c);
            if (f == Complex{}) continue;
            for (std::size_t j = c; j < n; ++j) M(r, j) -= f * M(c, j);
        }
    }
    return det;
}

LuResult complex_inverse(const ComplexMatrix& M, double tol) {
    const std::size_t n = M.n();
    double scale = 0.0;
    for (const auto& z : M.entries()) scale = std::max(scale, std::abs(z));
    LuResult out;
    out.inverse = ComplexMatrix(n);
    ComplexMatrix a = M;
    ComplexMatrix inv(n);
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1.0;
    out.min_pivot_ratio = scale > 0 ? 1.0 / 0.0 : 0.0;
    if (scale == 0.0) {
        out.singular = true;
        return out;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
        const double ratio = std::abs(a(p, c)) / scale;
        out.min_pivot_ratio = std::min(out.min_pivot_ratio, ratio);
        if (ratio <= tol) {
            out.singular = true;
            return out;
        }
        if (p != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(p, j), a(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        const Complex piv = a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const Complex f = a(r, c);
            if (f == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    out.inverse = std::move(inv);
    return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same(a.n(), b.n(), "complex product");
    const std::size_t n = a.n();
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += a(i, k) * b(k, j);
            r(i, j) = acc;
        }
    return r;
}

ComplexMatrix conjugate_transpose(const ComplexMatrix& a) {
    ComplexMatrix r(a.n());
    for (std::size_t i = 0; i < a.n(); ++i)
        for (std::size_t j = 0; j < a.n(); ++j) r(i, j) = std::conj(a(j, i));
    return r;
}

}  // namespace ivstab
