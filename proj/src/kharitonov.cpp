#include "ivstab/kharitonov.hpp"

#include <cmath>
#include <string>

#include "ivstab/errors.hpp"

namespace ivstab {

namespace {

void validate(std::vector<Interval>& b) {
    if (b.empty()) b.push_back({0.0, 0.0});
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (!std::isfinite(b[k].lo) || !std::isfinite(b[k].hi)) {
            throw MalformedInput("interval coefficient " + std::to_string(k) + " is not finite");
        }
        if (b[k].lo > b[k].hi) {
            throw MalformedInput("interval coefficient " + std::to_string(k) + " has lo > hi");
        }
    }
    while (b.size() > 1 && b.back().lo == 0.0 && b.back().hi == 0.0) b.pop_back();
}

// Bound pattern per vertex over k mod 4; true = upper bound.
constexpr bool kUpper[4][4] = {
    {false, false, true, true},   // K1: L L U U
    {false, true, true, false},   // K2: L U U L
    {true, false, false, true},   // K3: U L L U
    {true, true, false, false},   // K4: U U L L
};

}  // namespace

IntervalPolynomial::IntervalPolynomial(std::initializer_list<Interval> bounds) : bounds_(bounds) {
    validate(bounds_);
}

IntervalPolynomial::IntervalPolynomial(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
    validate(bounds_);
}

IntervalPolynomial IntervalPolynomial::point(const Polynomial& p) {
    std::vector<Interval> b;
    b.reserve(p.vec().size());
    for (double c : p.vec()) b.push_back({c, c});
    return IntervalPolynomial(std::move(b));
}

bool IntervalPolynomial::has_invariant_degree() const noexcept {
    const Interval& top = bounds_.back();
    if (top.is_point()) return true;
    return (top.lo > 0.0 && top.hi > 0.0) || (top.lo < 0.0 && top.hi < 0.0);
}

Polynomial IntervalPolynomial::center() const {
    std::vector<double> c;
    c.reserve(bounds_.size());
    for (const auto& iv : bounds_) c.push_back(iv.mid());
    return Polynomial(std::move(c));
}

bool IntervalPolynomial::contains(const Polynomial& p, double slack) const {
    const std::size_t len = std::max(p.vec().size(), bounds_.size());
    for (std::size_t k = 0; k < len; ++k) {
        const Interval iv = k < bounds_.size() ? bounds_[k] : Interval{0.0, 0.0};
        if (p[k] < iv.lo - slack || p[k] > iv.hi + slack) return false;
    }
    return true;
}

bool kharitonov_takes_upper(int vertex, std::size_t k) { return kUpper[vertex - 1][k % 4]; }

std::array<Polynomial, 4> kharitonov_vertices(const IntervalPolynomial& ip) {
    std::array<Polynomial, 4> out;
    const auto& b = ip.bounds();
    for (int v = 0; v < 4; ++v) {
        std::vector<double> c(b.size());
        for (std::size_t k = 0; k < b.size(); ++k) c[k] = kUpper[v][k % 4] ? b[k].hi : b[k].lo;
        out[v] = Polynomial(std::move(c));
    }
    return out;
}

std::array<EdgeSegment, 4> kharitonov_edges(const IntervalPolynomial& ip) {
    const auto k = kharitonov_vertices(ip);
    std::array<EdgeSegment, 4> out;
    for (std::size_t e = 0; e < 4; ++e) {
        const auto [i, j] = kEdgePairs[e];
        out[e] = EdgeSegment{k[i - 1], k[j - 1], i, j};
    }
    return out;
}

Degeneracy is_degenerate(const IntervalPolynomial& ip) {
    Degeneracy d;
    d.full_point = true;
    for (const auto& iv : ip.bounds()) {
        d.point_flags.push_back(iv.is_point());
        d.full_point = d.full_point && iv.is_point();
    }
    return d;
}

Polynomial sample(const IntervalPolynomial& ip, Rng& rng) {
    std::vector<double> c;
    c.reserve(ip.bounds().size());
    for (const auto& iv : ip.bounds()) c.push_back(iv.is_point() ? iv.lo : rng.uniform(iv.lo, iv.hi));
    return Polynomial(std::move(c));
}

}  // namespace ivstab
