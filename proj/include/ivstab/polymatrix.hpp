#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ivstab/errors.hpp"
#include "ivstab/kharitonov.hpp"
#include "ivstab/poly.hpp"

namespace ivstab {

/// Row-major n×n grid.
template <class T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, const T& fill = T{}) : n_(n), e_(n * n, fill) {}
    SquareMatrix(std::initializer_list<std::initializer_list<T>> rows) : n_(rows.size()) {
        e_.reserve(n_ * n_);
        for (const auto& r : rows) {
            if (r.size() != n_) throw DimensionMismatch("matrix is not square");
            e_.insert(e_.end(), r.begin(), r.end());
        }
    }

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
    [[nodiscard]] const std::vector<T>& entries() const noexcept { return e_; }
    std::vector<T>& entries() noexcept { return e_; }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<T> e_;
};

using PolynomialMatrix = SquareMatrix<Polynomial>;
using IntervalPolynomialMatrix = SquareMatrix<IntervalPolynomial>;
using ComplexMatrix = SquareMatrix<Complex>;
using RealMatrix = SquareMatrix<double>;

[[nodiscard]] PolynomialMatrix identity_polynomial_matrix(std::size_t n);
[[nodiscard]] PolynomialMatrix constant_matrix(const RealMatrix& m);

PolynomialMatrix operator+(const PolynomialMatrix& a, const PolynomialMatrix& b);
PolynomialMatrix operator*(const PolynomialMatrix& a, const PolynomialMatrix& b);

/// B·A + D·C.
[[nodiscard]] PolynomialMatrix compose_family_member(const PolynomialMatrix& B, const PolynomialMatrix& A,
                                                     const PolynomialMatrix& D, const PolynomialMatrix& C);

inline constexpr std::size_t kMaxSymbolicDetOrder = 8;

/// Exact expansion by minors, memoized over column subsets. Throws CapExceeded
/// when n exceeds max_order.
[[nodiscard]] Polynomial determinant(const PolynomialMatrix& M, std::size_t max_order = kMaxSymbolicDetOrder);

[[nodiscard]] ComplexMatrix eval_matrix(const PolynomialMatrix& M, Complex z);

/// Gaussian elimination with partial pivoting. Singular input gives ~0.
[[nodiscard]] Complex complex_det(ComplexMatrix M);

struct LuResult {
    ComplexMatrix inverse;
    bool singular = false;
    double min_pivot_ratio = 0.0;  // smallest |pivot| / max |entry|
};

/// Inverse by partial-pivoting elimination; singular when a pivot falls below
/// tol times the largest entry magnitude.
[[nodiscard]] LuResult complex_inverse(const ComplexMatrix& M, double tol = 1e-12);

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
[[nodiscard]] ComplexMatrix conjugate_transpose(const ComplexMatrix& a);

}  // namespace ivstab
