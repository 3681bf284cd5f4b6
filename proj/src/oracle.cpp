#include <algorithm>

#include "ivstab/engine.hpp"
#include "ivstab/random.hpp"

namespace ivstab {

namespace {

bool fails(const PolynomialMatrix& B, const PolynomialMatrix& D, const Problem& p, double tol, OracleResult& out) {
    Polynomial det = determinant(compose_family_member(B, p.A, D, p.C));
    RouthReason reason = RouthReason::zero_leading;
    if (!det.is_zero()) {
        const HurwitzResult h = is_hurwitz(det, tol);
        if (h.stable) return false;
        reason = h.reason;
    }
    out.found = true;
    out.B = B;
    out.D = D;
    out.determinant = std::move(det);
    out.reason = reason;
    return true;
}

}  // namespace

OracleResult oracle_falsify(const Problem& problem, const OracleOptions& opts) {
    problem.validate();
    const std::size_t n = problem.n();
    const std::size_t nn = n * n;
    OracleResult out;

    // Distinct vertices per entry, B entries then D entries.
    std::vector<std::vector<Polynomial>> verts;
    double combos = 1.0;
    for (const auto* M : {&problem.B, &problem.D}) {
        for (const auto& e : M->entries()) {
            std::vector<Polynomial> vs;
            for (const auto& v : kharitonov_vertices(e))
                if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
            combos *= static_cast<double>(vs.size());
            verts.push_back(std::move(vs));
        }
    }

    PolynomialMatrix B(n), D(n);
    if (combos <= static_cast<double>(opts.vertex_budget)) {
        std::vector<std::size_t> digit(verts.size(), 0);
        const auto total = static_cast<std::uint64_t>(combos);
        for (std::uint64_t c = 0; c < total; ++c) {
            for (std::size_t k = 0; k < verts.size(); ++k)
                (k < nn ? B.entries()[k] : D.entries()[k - nn]) = verts[k][digit[k]];
            ++out.vertices_tested;
            if (fails(B, D, problem, opts.routh_tol, out)) {
                out.source = "vertex";
                out.index = c;
                return out;
            }
            for (std::size_t k = verts.size(); k-- > 0;) {
                if (++digit[k] < verts[k].size()) break;
                digit[k] = 0;
            }
        }
        out.vertices_exhausted = true;
    }

    Rng rng(opts.seed);
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
        for (std::size_t k = 0; k < nn; ++k) {
            B.entries()[k] = sample(problem.B.entries()[k], rng);
            D.entries()[k] = sample(problem.D.entries()[k], rng);
        }
        ++out.samples_tested;
        if (fails(B, D, problem, opts.routh_tol, out)) {
            out.source = "sample";
            out.index = s;
            return out;
        }
    }
    return out;
}

}  // namespace ivstab
