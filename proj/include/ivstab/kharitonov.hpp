#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ivstab/poly.hpp"
#include "ivstab/random.hpp"

namespace ivstab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool is_point() const noexcept { return lo == hi; }
    [[nodiscard]] double mid() const noexcept { return 0.5 * (lo + hi); }
    [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Polynomial with independent closed interval coefficients, ascending degree.
class IntervalPolynomial {
public:
    IntervalPolynomial() : bounds_{{0.0, 0.0}} {}
    IntervalPolynomial(std::initializer_list<Interval> bounds);
    explicit IntervalPolynomial(std::vector<Interval> bounds);
    /// Point interval polynomial whose only member is p.
    static IntervalPolynomial point(const Polynomial& p);

    [[nodiscard]] std::size_t degree() const noexcept { return bounds_.size() - 1; }
    [[nodiscard]] const std::vector<Interval>& bounds() const noexcept { return bounds_; }
    [[nodiscard]] const Interval& operator[](std::size_t k) const { return bounds_.at(k); }

    /// Top interval is a nonzero point or excludes zero: no member loses degree.
    [[nodiscard]] bool has_invariant_degree() const noexcept;
    [[nodiscard]] Polynomial center() const;
    [[nodiscard]] bool contains(const Polynomial& p, double slack = 0.0) const;

    friend bool operator==(const IntervalPolynomial&, const IntervalPolynomial&) = default;

private:
    std::vector<Interval> bounds_;
};

/// One Kharitonov segment λ·from + (1−λ)·to, λ ∈ [0,1].
struct EdgeSegment {
    Polynomial from;
    Polynomial to;
    int from_index = 1;  // Kharitonov vertex number, 1..4
    int to_index = 2;

    [[nodiscard]] Polynomial at(double lambda) const { return lerp(from, to, lambda); }
    [[nodiscard]] bool degenerate() const { return from == to; }
};

/// Vertex pairs of the four Kharitonov segments, in edge-index order 1..4.
inline constexpr std::array<std::array<int, 2>, 4> kEdgePairs{{{1, 2}, {2, 4}, {4, 3}, {3, 1}}};

/// K1..K4. Bound chosen at k mod 4 = 0,1,2,3:
/// K1 (L,L,U,U), K2 (L,U,U,L), K3 (U,L,L,U), K4 (U,U,L,L).
[[nodiscard]] std::array<Polynomial, 4> kharitonov_vertices(const IntervalPolynomial& ip);
[[nodiscard]] std::array<EdgeSegment, 4> kharitonov_edges(const IntervalPolynomial& ip);
/// true when vertex `vertex` (1..4) takes the upper bound at coefficient k.
[[nodiscard]] bool kharitonov_takes_upper(int vertex, std::size_t k);

struct Degeneracy {
    bool full_point = false;
    std::vector<bool> point_flags;
};

[[nodiscard]] Degeneracy is_degenerate(const IntervalPolynomial& ip);

/// Independent uniform draw of every coefficient inside its bounds.
[[nodiscard]] Polynomial sample(const IntervalPolynomial& ip, Rng& rng);

}  // namespace ivstab
