#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ivstab/engine.hpp"

namespace ivstab::detail {

/// Determinant polynomials at the 2^m λ-corners of a multilinear family.
/// Bit e of the corner index set means λ_e = 1 (the edge's `from` end).
struct CornerSet {
    std::size_t m = 0;
    std::size_t stride = 1;
    std::vector<double> coef;           ///< (1 << m) * stride, ascending coefficients
    std::vector<std::int8_t> hurwitz;   ///< optional cached corner verdicts (1 stable, 0 not)

    [[nodiscard]] std::span<const double> corner(std::size_t c) const {
        return {coef.data() + c * stride, stride};
    }
};

/// Replays a candidate λ through the exact member path; returns a witness
/// only when the instantiated determinant fails is_hurwitz.
using ConfirmFn = std::function<std::optional<Witness>(std::span<const double> lambda, std::optional<double> omega)>;

/// Coefficients of the determinant at λ by multilinear interpolation of the corners.
void interpolate_coeffs(const CornerSet& cs, std::span<const double> lambda, std::vector<double>& out);

[[nodiscard]] Certificate sweep(const CornerSet& cs, const SweepOptions& opts, const ConfirmFn& confirm);

/// Corner set built through instantiate + determinant.
[[nodiscard]] CornerSet corner_set(const ParamFamily& f);

}  // namespace ivstab::detail
