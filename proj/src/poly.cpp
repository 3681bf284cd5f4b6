#include "ivstab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ivstab/errors.hpp"

namespace ivstab {

namespace {

void require_finite(const std::vector<double>& c) {
    for (double x : c) {
        if (!std::isfinite(x)) {
            throw MalformedInput("polynomial coefficient is not finite");
        }
    }
}

}  // namespace

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    require_finite(coeffs_);
    trim();
}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    require_finite(coeffs_);
    trim();
}

Polynomial Polynomial::monomial(std::size_t k, double c) {
    std::vector<double> v(k + 1, 0.0);
    v[k] = c;
    return Polynomial(std::move(v));
}

void Polynomial::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

Complex Polynomial::eval(Complex z) const noexcept {
    Complex acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double Polynomial::eval(double x) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::string Polynomial::to_string() const {
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        const double c = coeffs_[k];
        if (c == 0.0 && !(k == 0 && first)) continue;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        const double a = std::abs(c);
        if (k == 0 || a != 1.0) os << a;
        if (k >= 1) os << "s";
        if (k >= 2) os << "^" << k;
        first = false;
    }
    return os.str();
}

Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<double> r(std::max(p.vec().size(), q.vec().size()), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = p[k] + q[k];
    return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& p, const Polynomial& q) {
    std::vector<double> r(std::max(p.vec().size(), q.vec().size()), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = p[k] - q[k];
    return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& p) { return -1.0 * p; }

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return Polynomial{};
    const auto& a = p.vec();
    const auto& b = q.vec();
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return Polynomial(std::move(r));
}

Polynomial operator*(double c, const Polynomial& p) {
    std::vector<double> r = p.vec();
    for (double& x : r) x *= c;
    return Polynomial(std::move(r));
}

Polynomial& operator+=(Polynomial& p, const Polynomial& q) {
    p = p + q;
    return p;
}

Polynomial lerp(const Polynomial& from, const Polynomial& to, double lambda) {
    std::vector<double> r(std::max(from.vec().size(), to.vec().size()), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = lambda * from[k] + (1.0 - lambda) * to[k];
    return Polynomial(std::move(r));
}

const char* to_string(RouthReason r) noexcept {
    switch (r) {
        case RouthReason::none: return "none";
        case RouthReason::negative_pivot: return "negative_pivot";
        case RouthReason::zero_pivot: return "zero_pivot";
        case RouthReason::zero_leading: return "zero_leading";
    }
    return "unknown";
}

HurwitzResult is_hurwitz(const Polynomial& p, double tol) { return is_hurwitz(p.coeffs(), tol); }

HurwitzResult is_hurwitz(std::span<const double> coeffs, double tol) {
    std::size_t len = coeffs.size();
    while (len > 0 && coeffs[len - 1] == 0.0) --len;
    if (len == 0) throw MalformedInput("is_hurwitz: zero polynomial");

    double scale = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        if (!std::isfinite(coeffs[k])) throw MalformedInput("is_hurwitz: non-finite coefficient");
        scale = std::max(scale, std::abs(coeffs[k]));
    }
    const double thr = tol * scale;
    const double sign = coeffs[len - 1] > 0 ? 1.0 : -1.0;
    const std::size_t deg = len - 1;

    if (std::abs(coeffs[deg]) <= thr) return {false, RouthReason::zero_leading, 0};
    if (deg == 0) return {true, RouthReason::none, -1};

    // Routh rows, highest power first: prev = [a_n, a_{n-2}, ...], cur = [a_{n-1}, a_{n-3}, ...].
    const std::size_t width = deg / 2 + 1;
    std::vector<double> prev(width, 0.0), cur(width, 0.0), next(width, 0.0);
    for (std::size_t j = 0; j < width; ++j) {
        if (deg >= 2 * j) prev[j] = sign * coeffs[deg - 2 * j];
        if (deg >= 2 * j + 1) cur[j] = sign * coeffs[deg - 2 * j - 1];
    }

    for (std::size_t row = 1; row <= deg; ++row) {
        const double pivot = cur[0];
        if (pivot < -thr) return {false, RouthReason::negative_pivot, static_cast<int>(row)};
        if (pivot <= thr) return {false, RouthReason::zero_pivot, static_cast<int>(row)};
        if (row == deg) break;
        for (std::size_t j = 0; j < width; ++j) {
            const double a = j + 1 < width ? prev[j + 1] : 0.0;
            const double b = j + 1 < width ? cur[j + 1] : 0.0;
            next[j] = (pivot * a - prev[0] * b) / pivot;
        }
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    return {true, RouthReason::none, -1};
}

double cauchy_root_bound(const Polynomial& p) { return cauchy_root_bound(p.coeffs()); }

double cauchy_root_bound(std::span<const double> coeffs) {
    std::size_t len = coeffs.size();
    while (len > 0 && coeffs[len - 1] == 0.0) --len;
    if (len < 2) throw DomainError("cauchy_root_bound: polynomial has no roots to bound");
    const double lead = coeffs[len - 1];
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < len; ++k) m = std::max(m, std::abs(coeffs[k] / lead));
    return 1.0 + m;
}

}  // namespace ivstab
