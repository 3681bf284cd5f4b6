#include "vertex_table.hpp"

#include <algorithm>

namespace ivstab::detail {

namespace {

void conv_acc(std::span<const double> a, std::span<const double> b, double sign, std::span<double> out) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] += sign * a[i] * b[j];
    }
}

}  // namespace

VertexTable::VertexTable(const Problem& problem, const std::vector<EntryChoices>& choices, double routh_tol,
                         std::uint64_t cap)
    : problem_(&problem), choices_(&choices), n_(problem.n()) {
    const std::size_t n = n_;
    const std::size_t npos = 2 * n * n;
    radix_.resize(npos);
    radix_stride_.resize(npos);
    bool overflow = false;
    for (std::size_t p = npos; p-- > 0;) {
        radix_[p] = choices[p].vertices.size();
        radix_stride_[p] = size_;
        if (size_ > (std::uint64_t{1} << 62) / std::max<std::uint64_t>(radix_[p], 1)) overflow = true;
        else size_ *= radix_[p];
    }

    row_degree_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                row_degree_[i] = std::max(row_degree_[i], problem.B(i, j).degree() + problem.A(j, k).degree());
                row_degree_[i] = std::max(row_degree_[i], problem.D(i, j).degree() + problem.C(j, k).degree());
            }
    stride_ = 1;
    for (auto d : row_degree_) stride_ += d;

    if (overflow || size_ > cap) return;
    materialized_ = true;
    dets_.assign(size_ * stride_, 0.0);
    hurwitz_.assign(size_, 0);

    // Row polynomials depend only on that row's choices; cache them per row.
    std::vector<std::vector<std::vector<double>>> row_cache(n);
    std::vector<std::vector<std::uint64_t>> row_radix(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> pos;
        for (std::size_t j = 0; j < n; ++j) pos.push_back(i * n + j);
        for (std::size_t j = 0; j < n; ++j) pos.push_back(n * n + i * n + j);
        std::uint64_t count = 1;
        for (auto p : pos) count *= radix_[p];
        row_cache[i].resize(count);
        std::vector<std::uint8_t> ids(npos, 0);
        for (std::uint64_t r = 0; r < count; ++r) {
            std::uint64_t rem = r;
            for (std::size_t q = pos.size(); q-- > 0;) {
                ids[pos[q]] = static_cast<std::uint8_t>(rem % radix_[pos[q]]);
                rem /= radix_[pos[q]];
            }
            row_poly(i, ids, row_cache[i][r]);
        }
        row_radix[i].resize(pos.size());
        std::uint64_t s = 1;
        for (std::size_t q = pos.size(); q-- > 0;) {
            row_radix[i][q] = s;
            s *= radix_[pos[q]];
        }
    }

    std::vector<std::vector<double>> rows(n);
    for (std::uint64_t combo = 0; combo < size_; ++combo) {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t r = 0;
            for (std::size_t j = 0; j < n; ++j) {
                r += ((combo / radix_stride_[i * n + j]) % radix_[i * n + j]) * row_radix[i][j];
                const std::size_t pd = n * n + i * n + j;
                r += ((combo / radix_stride_[pd]) % radix_[pd]) * row_radix[i][n + j];
            }
            rows[i] = row_cache[i][r];
        }
        std::span<double> out(dets_.data() + combo * stride_, stride_);
        det_from_rows(rows, out);
        hurwitz_[combo] = static_cast<std::int8_t>(is_hurwitz(std::span<const double>(out), routh_tol).stable);
    }
}

std::uint64_t VertexTable::index(std::span<const std::uint8_t> ids) const {
    std::uint64_t idx = 0;
    for (std::size_t p = 0; p < ids.size(); ++p) idx += ids[p] * radix_stride_[p];
    return idx;
}

std::vector<std::uint8_t> VertexTable::ids(std::uint64_t combo) const {
    std::vector<std::uint8_t> out(radix_.size());
    for (std::size_t p = 0; p < radix_.size(); ++p)
        out[p] = static_cast<std::uint8_t>((combo / radix_stride_[p]) % radix_[p]);
    return out;
}

void VertexTable::row_poly(std::size_t i, std::span<const std::uint8_t> ids, std::vector<double>& out) const {
    const std::size_t n = n_;
    const std::size_t w = row_degree_[i] + 1;
    out.assign(n * w, 0.0);
    const auto& ch = *choices_;
    for (std::size_t k = 0; k < n; ++k) {
        std::span<double> entry(out.data() + k * w, w);
        for (std::size_t j = 0; j < n; ++j) {
            conv_acc(ch[i * n + j].vertices[ids[i * n + j]].coeffs(), problem_->A(j, k).coeffs(), 1.0, entry);
            conv_acc(ch[n * n + i * n + j].vertices[ids[n * n + i * n + j]].coeffs(), problem_->C(j, k).coeffs(),
                     1.0, entry);
        }
    }
}

void VertexTable::det_from_rows(const std::vector<std::vector<double>>& rows, std::span<double> out) const {
    const std::size_t n = n_;
    std::fill(out.begin(), out.end(), 0.0);
    auto entry = [&](std::size_t i, std::size_t k) {
        const std::size_t w = row_degree_[i] + 1;
        return std::span<const double>(rows[i].data() + k * w, w);
    };
    if (n == 1) {
        auto e = entry(0, 0);
        std::copy(e.begin(), e.end(), out.begin());
        return;
    }
    if (n == 2) {
        conv_acc(entry(0, 0), entry(1, 1), 1.0, out);
        conv_acc(entry(0, 1), entry(1, 0), -1.0, out);
        return;
    }
    PolynomialMatrix M(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            auto e = entry(i, k);
            M(i, k) = Polynomial(std::vector<double>(e.begin(), e.end()));
        }
    const Polynomial d = determinant(M);
    std::copy(d.vec().begin(), d.vec().begin() + static_cast<std::ptrdiff_t>(std::min(d.vec().size(), out.size())),
              out.begin());
}

std::vector<double> VertexTable::compute(std::span<const std::uint8_t> ids) const {
    std::vector<std::vector<double>> rows(n_);
    for (std::size_t i = 0; i < n_; ++i) row_poly(i, ids, rows[i]);
    std::vector<double> out(stride_, 0.0);
    det_from_rows(rows, out);
    return out;
}

}  // namespace ivstab::detail
