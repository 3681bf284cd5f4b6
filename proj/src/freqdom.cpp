#include "ivstab/freqdom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace ivstab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double coeff(const Polynomial& p, std::size_t k) { return p[k]; }

struct Pivot {
    double value = 0.0;  ///< smallest LDLᴴ pivot of the Hermitian part
    double scale = 0.0;  ///< largest entry magnitude of the Hermitian part
};

Pivot hermitian_pivot(const ComplexMatrix& M) {
    const std::size_t n = M.n();
    ComplexMatrix H(n);
    Pivot out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            H(i, j) = 0.5 * (M(i, j) + std::conj(M(j, i)));
            out.scale = std::max(out.scale, std::abs(H(i, j)));
        }
    out.value = kInf;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = H(k, k).real();
        out.value = std::min(out.value, d);
        if (d <= 0.0) return out;
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = H(i, k) / d;
            for (std::size_t j = k + 1; j < n; ++j) H(i, j) -= f * H(k, j);
        }
    }
    return out;
}

ComplexMatrix sector_matrix(const ComplexMatrix& G, const SectorSpec& sector, Complex mult) {
    const std::size_t n = G.n();
    ComplexMatrix Z(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{};
            for (std::size_t k = 0; k < n; ++k) acc += sector.K()(i, k) * G(k, j);
            Z(i, j) = (i == j ? 1.0 : 0.0) + mult * acc;
        }
    return Z;
}

enum class Kind { hinf, spr, sector };

struct Member {
    const PolynomialMatrix* B;
    const PolynomialMatrix* D;
};

/// Larger `bad` is worse; `scale` sizes the inconclusive band.
struct Badness {
    double bad;
    double scale;
};

struct Evaluator {
    Kind kind;
    const SectorSpec* sector = nullptr;

    Badness operator()(const TransferEval& te) const {
        if (te.singular) return {kInf, 1.0};
        switch (kind) {
            case Kind::hinf: return {sigma_max(te.G), 1.0};
            case Kind::spr: {
                const Pivot p = hermitian_pivot(te.G);
                return {-p.value, p.scale};
            }
            case Kind::sector: {
                const Pivot p = hermitian_pivot(sector_matrix(te.G, *sector, Complex(1.0, te.omega * sector->eta())));
                return {-p.value, p.scale};
            }
        }
        return {kInf, 1.0};
    }
};

struct Limit {
    bool proper = true;
    bool strictly_proper = true;
    std::string evidence;
    ComplexMatrix G_inf;
    /// lim s·G(s) as s → ∞ (strictly proper G only).
    ComplexMatrix sG_inf;
};

Limit limit_at_infinity(const PolynomialMatrix& B, const PolynomialMatrix& D, const ColumnReduced& cr) {
    const std::size_t n = D.n();
    Limit lim;
    ComplexMatrix Bhc(n), Bsub(n), Dhc(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t d = cr.column_degrees[j];
        for (std::size_t i = 0; i < n; ++i) {
            const auto& b = B(i, j);
            if (!b.is_zero() && b.degree() > d) {
                lim.proper = false;
                lim.strictly_proper = false;
                lim.evidence = "column " + std::to_string(j + 1) + ": numerator degree " +
                               std::to_string(b.degree()) + " exceeds D column degree " + std::to_string(d);
                return lim;
            }
            if (!b.is_zero() && b.degree() == d) {
                lim.strictly_proper = false;
                if (lim.evidence.empty())
                    lim.evidence = "column " + std::to_string(j + 1) + ": numerator degree equals D column degree " +
                                   std::to_string(d);
            }
            Bhc(i, j) = coeff(b, d);
            Bsub(i, j) = d > 0 ? coeff(b, d - 1) : 0.0;
            Dhc(i, j) = coeff(D(i, j), d);
        }
    }
    const LuResult inv = complex_inverse(Dhc);
    lim.G_inf = Bhc * inv.inverse;
    if (lim.strictly_proper) lim.sG_inf = Bsub * inv.inverse;
    return lim;
}

FreqReport run_check(const Problem& problem, Method method, const FreqOptions& opts, Kind kind,
                     const SectorSpec* sector) {
    problem.validate();
    FreqReport rep;
    rep.check = kind == Kind::hinf ? "hinf" : kind == Kind::spr ? "spr" : "sector";
    rep.method = to_string(method);
    rep.worst_value = kind == Kind::hinf ? 0.0 : kInf;
    const Evaluator ev{kind, sector};
    double worst_bad = -kInf;
    double worst_scale = 1.0;
    bool stop = false;

    auto record = [&](const ParamFamily& f, const std::vector<double>& lambda, double omega, Badness b,
                      const PolynomialMatrix& B, const PolynomialMatrix& D) {
        if (b.bad > worst_bad) {
            worst_bad = b.bad;
            worst_scale = std::max(1.0, b.scale);
            rep.worst = FreqWitness{f.config, lambda, omega, kind == Kind::hinf ? b.bad : -b.bad, B, D};
        }
    };
    auto fail_pre = [&](const ParamFamily& f, const std::vector<double>& lambda, const PolynomialMatrix& B,
                        const PolynomialMatrix& D, const std::string& why) {
        rep.status = CheckStatus::precondition_failed;
        rep.note = why;
        rep.worst = FreqWitness{f.config, lambda, 0.0, 0.0, B, D};
        stop = true;
    };

    std::vector<double> levels{0.0};
    for (unsigned k = 1; k <= opts.lambda_interior; ++k) levels.push_back(static_cast<double>(k) / (opts.lambda_interior + 1));
    levels.push_back(1.0);

    rep.families = for_each_family(problem, method_patterns(method, problem.n()), [&](const ParamFamily& f, std::uint64_t) {
        const std::size_t m = f.arity();
        const double count = std::pow(static_cast<double>(levels.size()), static_cast<double>(m));
        if (static_cast<double>(rep.members) + count > static_cast<double>(opts.max_members)) {
            throw CapExceeded("frequency check: more than " + std::to_string(opts.max_members) + " members");
        }
        std::vector<std::size_t> idx(m, 0);
        std::vector<double> lambda(m);
        while (!stop) {
            for (std::size_t e = 0; e < m; ++e) lambda[e] = levels[idx[e]];
            const MemberPair mp = instantiate(f, lambda);
            ++rep.members;

            const Polynomial det_d = determinant(mp.D);
            if (det_d.is_zero() || !is_hurwitz(det_d, opts.tol).stable) {
                fail_pre(f, lambda, mp.B, mp.D, "det D is not Hurwitz: " + det_d.to_string());
                break;
            }
            const ColumnReduced cr = column_reduced_check(mp.D, opts.tol);
            if (!cr.yes) {
                fail_pre(f, lambda, mp.B, mp.D, "D is not column reduced: " + cr.evidence);
                break;
            }
            const Limit lim = limit_at_infinity(mp.B, mp.D, cr);
            if (!lim.proper) {
                fail_pre(f, lambda, mp.B, mp.D, "G is not proper: " + lim.evidence);
                break;
            }
            if (kind == Kind::sector && !lim.strictly_proper) {
                throw PreconditionFailed("sector check needs G(inf) = 0; " + lim.evidence);
            }

            const std::vector<double> grid = frequency_grid(det_d, opts);
            auto bad_at = [&](double w) {
                ++rep.evaluations;
                return ev(transfer_eval(mp.B, mp.D, w));
            };
            std::size_t worst_i = 0;
            Badness worst_here{-kInf, 1.0};
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const Badness b = bad_at(grid[i]);
                if (b.bad > worst_here.bad) {
                    worst_here = b;
                    worst_i = i;
                }
            }
            double worst_w = grid[worst_i];
            if (grid.size() > 2) {
                double lo = grid[worst_i == 0 ? 0 : worst_i - 1];
                double hi = grid[std::min(worst_i + 1, grid.size() - 1)];
                const double g = 0.5 * (std::sqrt(5.0) - 1.0);
                double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
                Badness f1 = bad_at(x1), f2 = bad_at(x2);
                for (int it = 0; it < 40; ++it) {
                    if (f1.bad > f2.bad) {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - g * (hi - lo);
                        f1 = bad_at(x1);
                    } else {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + g * (hi - lo);
                        f2 = bad_at(x2);
                    }
                }
                for (const auto& [w, b] : {std::pair{x1, f1}, std::pair{x2, f2}})
                    if (b.bad > worst_here.bad) {
                        worst_here = b;
                        worst_w = w;
                    }
            }
            record(f, lambda, worst_w, worst_here, mp.B, mp.D);

            std::optional<Badness> limit;
            if (kind == Kind::hinf) {
                limit = Badness{sigma_max(lim.G_inf), 1.0};
            } else if (kind == Kind::spr && !lim.strictly_proper) {
                const Pivot p = hermitian_pivot(lim.G_inf);
                limit = Badness{-p.value, p.scale};
            } else if (kind == Kind::sector) {
                // Z(∞) = I + η·K·lim sG(s)
                const Pivot p = hermitian_pivot(sector_matrix(lim.sG_inf, *sector, Complex(sector->eta(), 0.0)));
                limit = Badness{-p.value, p.scale};
            }
            if (limit) {
                ++rep.evaluations;
                record(f, lambda, kInf, *limit, mp.B, mp.D);
            }

            const bool violated = kind == Kind::hinf ? worst_bad >= 1.0 - 1e-12 : worst_bad >= 0.0;
            if (violated) {
                stop = true;
                break;
            }
            std::size_t e = m;
            while (e > 0 && ++idx[e - 1] == levels.size()) idx[--e] = 0;
            if (e == 0) break;
        }
        return !stop;
    });

    if (rep.status == CheckStatus::precondition_failed) return rep;
    if (kind == Kind::hinf) {
        rep.worst_value = std::max(worst_bad, 0.0);
        if (worst_bad >= 1.0 - 1e-12) rep.status = CheckStatus::violated;
        else if (worst_bad < 1.0 - 10.0 * opts.tol) rep.status = CheckStatus::holds;
        else rep.status = CheckStatus::inconclusive;
    } else {
        rep.worst_value = -worst_bad;
        if (worst_bad >= 0.0) rep.status = CheckStatus::violated;
        else if (-worst_bad > 10.0 * opts.tol * worst_scale) rep.status = CheckStatus::holds;
        else rep.status = CheckStatus::inconclusive;
    }
    if (rep.note.empty()) rep.note = "certified on the λ and ω grids";
    return rep;
}

}  // namespace

TransferEval transfer_eval(const PolynomialMatrix& B, const PolynomialMatrix& D, double omega) {
    if (B.n() != D.n()) throw DimensionMismatch("transfer_eval: B and D differ in order");
    const Complex z(0.0, omega);
    const LuResult inv = complex_inverse(eval_matrix(D, z));
    TransferEval te;
    te.omega = omega;
    te.singular = inv.singular;
    te.G = inv.singular ? ComplexMatrix(B.n()) : eval_matrix(B, z) * inv.inverse;
    return te;
}

double sigma_max(const ComplexMatrix& M, double rel_tol, std::size_t max_iter) {
    const std::size_t n = M.n();
    double scale = 0.0;
    for (const auto& z : M.entries()) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw MalformedInput("sigma_max: non-finite entry");
        scale = std::max(scale, std::abs(z));
    }
    if (scale == 0.0) return 0.0;
    ComplexMatrix H = conjugate_transpose(M) * M;
    for (auto& z : H.entries()) z /= scale * scale;

    std::vector<Complex> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Complex(1.0 + 0.37 * static_cast<double>(i), 0.11 * static_cast<double>(i + 1));
    double best = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        double norm = 0.0;
        for (const auto& x : v) norm += std::norm(x);
        norm = std::sqrt(norm);
        for (auto& x : v) x /= norm;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = 0.0;
            for (std::size_t j = 0; j < n; ++j) w[i] += H(i, j) * v[j];
        }
        Complex rq{};
        for (std::size_t i = 0; i < n; ++i) rq += std::conj(v[i]) * w[i];
        const double r = rq.real();
        best = std::max(best, r);
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res += std::norm(w[i] - r * v[i]);
        if (r <= 0.0) return 0.0;
        if (std::sqrt(res) <= rel_tol * r) return scale * std::sqrt(r);
        v.swap(w);
    }
    throw ConvergenceError("sigma_max: power iteration did not converge", scale * std::sqrt(best));
}

const char* to_string(CheckStatus s) noexcept {
    switch (s) {
        case CheckStatus::holds: return "holds";
        case CheckStatus::violated: return "violated";
        case CheckStatus::inconclusive: return "inconclusive";
        case CheckStatus::precondition_failed: return "precondition_failed";
    }
    return "unknown";
}

std::vector<double> frequency_grid(const Polynomial& det_d, const FreqOptions& opts) {
    const double R = det_d.degree() >= 1 ? cauchy_root_bound(det_d) : 1.0;
    const double hi = 100.0 * R;
    const double decades = static_cast<double>(opts.decades);
    const std::size_t count = static_cast<std::size_t>(opts.points_per_decade) * opts.decades + 1;
    std::vector<double> grid{0.0};
    for (std::size_t k = 0; k < count; ++k)
        grid.push_back(hi * std::pow(10.0, -decades + decades * static_cast<double>(k) / (count - 1)));
    return grid;
}

FreqReport hinf_lt_one(const Problem& problem, Method method, const FreqOptions& opts) {
    return run_check(problem, method, opts, Kind::hinf, nullptr);
}

FreqReport spr_check(const Problem& problem, Method method, const FreqOptions& opts) {
    return run_check(problem, method, opts, Kind::spr, nullptr);
}

SectorSpec::SectorSpec(RealMatrix K, double eta) : K_(std::move(K)), eta_(eta) {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw DomainError("sector: eta must be a finite nonnegative number");
    const std::size_t n = K_.n();
    if (n == 0) throw DomainError("sector: K is empty");
    ComplexMatrix Kc(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (K_(i, j) != K_(j, i)) throw DomainError("sector: K is not symmetric");
            Kc(i, j) = K_(i, j);
        }
    if (!(hermitian_pivot(Kc).value > 0.0)) throw DomainError("sector: K is not positive definite");
}

FreqReport sector_positivity(const Problem& problem, const SectorSpec& sector, Method method, const FreqOptions& opts) {
    if (sector.K().n() != problem.n()) throw DimensionMismatch("sector: K order differs from problem order");
    return run_check(problem, method, opts, Kind::sector, &sector);
}

ColumnReduced column_reduced_check(const PolynomialMatrix& D, double tol) {
    const std::size_t n = D.n();
    ColumnReduced out;
    ComplexMatrix L(n);
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        int d = -1;
        for (std::size_t i = 0; i < n; ++i)
            if (!D(i, j).is_zero()) d = std::max(d, static_cast<int>(D(i, j).degree()));
        if (d < 0) {
            out.evidence = "column " + std::to_string(j + 1) + " is zero";
            out.column_degrees.assign(n, 0);
            return out;
        }
        out.column_degrees.push_back(static_cast<std::size_t>(d));
        for (std::size_t i = 0; i < n; ++i) {
            L(i, j) = coeff(D(i, j), static_cast<std::size_t>(d));
            scale = std::max(scale, std::abs(L(i, j)));
        }
    }
    out.leading_det = complex_det(L).real();
    out.yes = std::abs(out.leading_det) > tol * std::pow(scale, static_cast<double>(n));
    if (!out.yes) out.evidence = "leading column coefficient matrix is singular (det " + std::to_string(out.leading_det) + ")";
    return out;
}

AnalysisReport closed_loop_stable(const Problem& problem, Method method, const AnalysisOptions& opts) {
    return analyze(problem, method, opts);
}

}  // namespace ivstab
