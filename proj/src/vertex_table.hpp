#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ivstab/engine.hpp"

namespace ivstab::detail {

/// Determinants of M at every combination of distinct Kharitonov vertices
/// (one per entry of B and D). Every λ-corner of every configuration is such
/// a combination, so families read their corner polynomials from here.
class VertexTable {
public:
    VertexTable(const Problem& problem, const std::vector<EntryChoices>& choices, double routh_tol,
                std::uint64_t cap);

    [[nodiscard]] bool materialized() const noexcept { return materialized_; }
    [[nodiscard]] std::uint64_t size() const noexcept { return size_; }
    [[nodiscard]] std::size_t stride() const noexcept { return stride_; }
    [[nodiscard]] std::uint64_t radix_stride(std::size_t pos) const { return radix_stride_[pos]; }
    [[nodiscard]] std::uint64_t index(std::span<const std::uint8_t> ids) const;
    [[nodiscard]] std::vector<std::uint8_t> ids(std::uint64_t combo) const;

    /// Table lookup when materialized.
    [[nodiscard]] std::span<const double> det(std::uint64_t combo) const {
        return {dets_.data() + combo * stride_, stride_};
    }
    [[nodiscard]] std::int8_t hurwitz(std::uint64_t combo) const { return hurwitz_[combo]; }

    /// Determinant for explicit vertex ids, padded to stride().
    [[nodiscard]] std::vector<double> compute(std::span<const std::uint8_t> ids) const;

private:
    void row_poly(std::size_t row, std::span<const std::uint8_t> ids, std::vector<double>& out) const;
    void det_from_rows(const std::vector<std::vector<double>>& rows, std::span<double> out) const;

    const Problem* problem_;
    const std::vector<EntryChoices>* choices_;
    std::size_t n_;
    std::vector<std::size_t> row_degree_;
    std::size_t stride_ = 1;
    std::uint64_t size_ = 1;
    std::vector<std::uint64_t> radix_;
    std::vector<std::uint64_t> radix_stride_;
    bool materialized_ = false;
    std::vector<double> dets_;
    std::vector<std::int8_t> hurwitz_;
};

}  // namespace ivstab::detail
