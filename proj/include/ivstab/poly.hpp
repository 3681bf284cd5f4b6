#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ivstab {

using Complex = std::complex<double>;

/// Dense real polynomial, coefficient k multiplies s^k.
///
/// Exact trailing zeros are trimmed on construction; the zero polynomial is
/// stored as the single coefficient 0.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    Polynomial(std::initializer_list<double> coeffs);
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial constant(double c) { return Polynomial({c}); }
    /// c * s^k
    static Polynomial monomial(std::size_t k, double c = 1.0);

    [[nodiscard]] std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] const std::vector<double>& vec() const noexcept { return coeffs_; }
    [[nodiscard]] double leading() const noexcept { return coeffs_.back(); }
    [[nodiscard]] double max_abs_coeff() const noexcept;

    /// Coefficient of s^k, zero past the degree.
    [[nodiscard]] double operator[](std::size_t k) const noexcept {
        return k < coeffs_.size() ? coeffs_[k] : 0.0;
    }

    /// Horner evaluation.
    [[nodiscard]] Complex eval(Complex z) const noexcept;
    [[nodiscard]] double eval(double x) const noexcept;

    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim();
    std::vector<double> coeffs_;
};

Polynomial operator+(const Polynomial& p, const Polynomial& q);
Polynomial operator-(const Polynomial& p, const Polynomial& q);
Polynomial operator-(const Polynomial& p);
Polynomial operator*(const Polynomial& p, const Polynomial& q);
Polynomial operator*(double c, const Polynomial& p);
inline Polynomial operator*(const Polynomial& p, double c) { return c * p; }
Polynomial& operator+=(Polynomial& p, const Polynomial& q);

inline Polynomial scale(const Polynomial& p, double c) { return c * p; }
inline Complex eval_complex(const Polynomial& p, Complex z) { return p.eval(z); }

/// λ·from + (1−λ)·to
Polynomial lerp(const Polynomial& from, const Polynomial& to, double lambda);

enum class RouthReason { none, negative_pivot, zero_pivot, zero_leading };

[[nodiscard]] const char* to_string(RouthReason r) noexcept;

struct HurwitzResult {
    bool stable = false;
    RouthReason reason = RouthReason::none;
    /// Row of the Routh array whose first entry failed, -1 when stable.
    int failed_row = -1;

    explicit operator bool() const noexcept { return stable; }
};

inline constexpr double kDefaultRouthTol = 1e-9;

/// Strict Hurwitz test by the Routh array. Every first-column entry must exceed
/// tol * max|coeff| after normalizing the leading coefficient to be positive.
/// Zero pivots are reported as not stable (no epsilon substitution).
/// Throws MalformedInput for the zero polynomial.
[[nodiscard]] HurwitzResult is_hurwitz(const Polynomial& p, double tol = kDefaultRouthTol);
[[nodiscard]] HurwitzResult is_hurwitz(std::span<const double> coeffs, double tol = kDefaultRouthTol);

/// 1 + max_{k<deg} |c_k / c_deg|. Throws DomainError for constants.
[[nodiscard]] double cauchy_root_bound(const Polynomial& p);
[[nodiscard]] double cauchy_root_bound(std::span<const double> coeffs);

}  // namespace ivstab
