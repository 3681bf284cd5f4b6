#include "ivstab/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <mutex>
#include <thread>

#include "ivstab/hull.hpp"
#include "sweep.hpp"
#include "vertex_table.hpp"

namespace ivstab {

namespace {

constexpr std::uint64_t kMaxFamilies = 50'000'000;
constexpr std::size_t kBlock = 512;

std::vector<EntryChoices> all_choices(const Problem& p) {
    std::vector<EntryChoices> out;
    for (const auto& e : p.B.entries()) out.push_back(entry_choices(e));
    for (const auto& e : p.D.entries()) out.push_back(entry_choices(e));
    return out;
}

const IntervalPolynomial& entry_of(const Problem& p, const Position& pos) {
    return pos.side == Side::B ? p.B(pos.row, pos.col) : p.D(pos.row, pos.col);
}

PolynomialMatrix& matrix_of(ParamFamily& f, Side side) { return side == Side::B ? f.B : f.D; }

ParamFamily family_from_canonical(const Problem& problem, const std::vector<EntryChoices>& choices,
                                  const CanonicalFamily& cf, EdgeConfiguration config) {
    const std::size_t n = problem.n();
    ParamFamily f;
    f.config = std::move(config);
    f.A = problem.A;
    f.C = problem.C;
    f.B = PolynomialMatrix(n);
    f.D = PolynomialMatrix(n);
    for (std::size_t k = 0; k < choices.size(); ++k) {
        const Position pos = position_at(k, n);
        matrix_of(f, pos.side)(pos.row, pos.col) = choices[k].vertices[cf.vertex[k]];
    }
    for (std::size_t e = 0; e < cf.edge_positions.size(); ++e) {
        const Position pos = cf.edge_positions[e];
        const auto& ch = choices[position_index(pos, n)];
        EdgeSlot slot{pos, ch.vertices[cf.edge_ends[e][0]], ch.vertices[cf.edge_ends[e][1]]};
        matrix_of(f, pos.side)(pos.row, pos.col) = slot.to;
        f.edges.push_back(std::move(slot));
    }
    return f;
}

std::optional<Witness> confirm_exact(const ParamFamily& f, std::span<const double> lambda,
                                     std::optional<double> omega, double tol) {
    MemberPair mp = instantiate(f, lambda);
    Polynomial det = determinant(compose_family_member(mp.B, f.A, mp.D, f.C));
    if (det.is_zero()) {
        return Witness{{lambda.begin(), lambda.end()}, omega, RouthReason::zero_leading, det, mp.B, mp.D};
    }
    const HurwitzResult h = is_hurwitz(det, tol);
    if (h.stable) return std::nullopt;
    return Witness{{lambda.begin(), lambda.end()}, omega, h.reason, std::move(det), std::move(mp.B), std::move(mp.D)};
}

std::string edge_set_string(const std::vector<Position>& edges) {
    std::ostringstream os;
    os << "{";
    for (std::size_t k = 0; k < edges.size(); ++k) os << (k ? "," : "") << to_string(edges[k]);
    os << "}";
    return os.str();
}

struct DegreeScan {
    bool ok = true;
    std::size_t degree = 0;
    double lead = 0.0;
    bool first = true;
    std::string evidence;

    void add(std::span<const double> c, double tol, const std::string& where) {
        if (!ok) return;
        std::size_t len = c.size();
        while (len > 0 && c[len - 1] == 0.0) --len;
        double mx = 0.0;
        for (std::size_t k = 0; k < len; ++k) mx = std::max(mx, std::abs(c[k]));
        if (len == 0) {
            ok = false;
            evidence = where + ": determinant vanishes identically";
            return;
        }
        const std::size_t d = len - 1;
        const double l = c[d];
        if (first) {
            degree = d;
            lead = l;
            first = false;
        }
        if (d != degree || (l > 0) != (lead > 0) || std::abs(l) <= tol * mx) {
            ok = false;
            std::ostringstream os;
            os << where << ": degree " << d << " leading " << l << " (expected degree " << degree
               << ", leading sign " << (lead > 0 ? "+" : "-") << ")";
            evidence = os.str();
        }
    }
};

std::string combo_string(const std::vector<std::uint8_t>& ids, const std::vector<EntryChoices>& choices,
                         std::size_t n) {
    std::ostringstream os;
    os << "vertex combination [";
    for (std::size_t p = 0; p < ids.size(); ++p) {
        int k = 1;
        for (int v = 0; v < 4; ++v)
            if (choices[p].vertex_id[v] == ids[p]) {
                k = v + 1;
                break;
            }
        os << (p ? " " : "") << to_string(position_at(p, n)) << "=K" << k;
    }
    os << "]";
    return os.str();
}

Polynomial center_determinant(const Problem& p) {
    PolynomialMatrix B(p.n()), D(p.n());
    for (std::size_t k = 0; k < B.entries().size(); ++k) {
        B.entries()[k] = p.B.entries()[k].center();
        D.entries()[k] = p.D.entries()[k].center();
    }
    return determinant(compose_family_member(B, p.A, D, p.C));
}

DegreeCheck degree_from_table(const Problem& problem, const detail::VertexTable& table,
                              const std::vector<EntryChoices>& choices, double tol) {
    DegreeScan scan;
    for (std::uint64_t c = 0; c < table.size() && scan.ok; ++c) {
        scan.add(table.det(c), tol, "");
        if (!scan.ok) scan.evidence = combo_string(table.ids(c), choices, problem.n()) + scan.evidence;
    }
    const Polynomial center = center_determinant(problem);
    scan.add(center.coeffs(), tol, "box center");
    return DegreeCheck{scan.ok, scan.degree, scan.evidence, table.size() + 1, false};
}

}  // namespace

void Problem::validate() const {
    const std::size_t n = B.n();
    if (n == 0) throw DimensionMismatch("problem matrices must be non-empty");
    if (A.n() != n || C.n() != n || D.n() != n) {
        throw DimensionMismatch("B, A, D, C must share one order (B " + std::to_string(n) + ", A " +
                                std::to_string(A.n()) + ", D " + std::to_string(D.n()) + ", C " +
                                std::to_string(C.n()) + ")");
    }
}

const char* to_string(Method m) noexcept {
    switch (m) {
        case Method::prop1: return "prop1";
        case Method::thm1_row: return "thm1_row";
        case Method::thm1_column: return "thm1_column";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "prop1") return Method::prop1;
    if (name == "thm1_row" || name == "thm1") return Method::thm1_row;
    if (name == "thm1_column") return Method::thm1_column;
    throw DomainError("unknown method '" + name + "' (expected prop1, thm1_row or thm1_column)");
}

std::vector<EdgeConfiguration> method_patterns(Method m, std::size_t n) {
    switch (m) {
        case Method::prop1: return prop1_patterns(n);
        case Method::thm1_row: return thm1_patterns(n, Thm1Variant::row);
        case Method::thm1_column: return thm1_patterns(n, Thm1Variant::column);
    }
    return {};
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::stable: return "stable";
        case Verdict::unstable: return "unstable";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

Verdict worst(Verdict a, Verdict b) noexcept {
    if (a == Verdict::unstable || b == Verdict::unstable) return Verdict::unstable;
    if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
    return Verdict::stable;
}

ParamFamily make_family(const Problem& problem, const EdgeConfiguration& config) {
    problem.validate();
    if (config.n != problem.n()) throw DimensionMismatch("configuration order differs from problem order");
    if (config.is_skeleton()) throw DomainError("make_family needs a fully assigned configuration");
    const std::size_t n = problem.n();
    ParamFamily f;
    f.config = config;
    f.A = problem.A;
    f.C = problem.C;
    f.B = PolynomialMatrix(n);
    f.D = PolynomialMatrix(n);
    for (std::size_t k = 0; k < config.selections.size(); ++k) {
        const Position pos = position_at(k, n);
        const auto& sel = config.selections[k];
        const auto verts = kharitonov_vertices(entry_of(problem, pos));
        if (sel.kind == SelectionKind::vertex) {
            matrix_of(f, pos.side)(pos.row, pos.col) = verts[sel.index - 1];
        } else {
            const auto [i, j] = kEdgePairs[sel.index - 1];
            matrix_of(f, pos.side)(pos.row, pos.col) = verts[j - 1];
        }
    }
    for (const auto& pos : config.edge_positions) {
        const auto& sel = config.at(pos);
        if (sel.kind != SelectionKind::edge) throw DomainError("edge position without an edge selection");
        const auto edges = kharitonov_edges(entry_of(problem, pos));
        f.edges.push_back(EdgeSlot{pos, edges[sel.index - 1].from, edges[sel.index - 1].to});
    }
    return f;
}

MemberPair instantiate(const ParamFamily& f, std::span<const double> lambda) {
    if (lambda.size() != f.arity()) {
        throw DomainError("lambda has " + std::to_string(lambda.size()) + " entries, family arity is " +
                          std::to_string(f.arity()));
    }
    MemberPair mp{f.B, f.D};
    for (std::size_t e = 0; e < f.edges.size(); ++e) {
        const double l = lambda[e];
        if (!(l >= 0.0 && l <= 1.0)) throw DomainError("lambda outside [0,1]");
        const auto& slot = f.edges[e];
        (slot.pos.side == Side::B ? mp.B : mp.D)(slot.pos.row, slot.pos.col) = lerp(slot.from, slot.to, l);
    }
    return mp;
}

Polynomial member_determinant(const ParamFamily& f, std::span<const double> lambda) {
    MemberPair mp = instantiate(f, lambda);
    return determinant(compose_family_member(mp.B, f.A, mp.D, f.C));
}

ValueSetHull value_set_hull(const ParamFamily& f, double omega, std::size_t max_arity) {
    const std::size_t m = f.arity();
    if (m > max_arity) {
        throw CapExceeded("value_set_hull: arity " + std::to_string(m) + " exceeds " + std::to_string(max_arity) +
                          "; use grid mode");
    }
    const Complex z(0.0, omega);
    const ComplexMatrix A = eval_matrix(f.A, z);
    const ComplexMatrix C = eval_matrix(f.C, z);
    ValueSetHull out;
    std::vector<double> lambda(m);
    for (std::size_t c = 0; c < (std::size_t{1} << m); ++c) {
        for (std::size_t e = 0; e < m; ++e) lambda[e] = (c >> e) & 1u ? 1.0 : 0.0;
        const MemberPair mp = instantiate(f, lambda);
        ComplexMatrix M = eval_matrix(mp.B, z) * A;
        const ComplexMatrix DC = eval_matrix(mp.D, z) * C;
        for (std::size_t k = 0; k < M.entries().size(); ++k) M.entries()[k] += DC.entries()[k];
        out.corner_values.push_back(complex_det(std::move(M)));
    }
    out.hull = convex_hull(out.corner_values);
    out.distance = signed_distance(out.hull, Complex{});
    return out;
}

Certificate zero_exclusion_sweep(const ParamFamily& f, const SweepOptions& opts) {
    if (f.arity() > opts.max_arity) {
        throw CapExceeded("zero_exclusion_sweep: arity " + std::to_string(f.arity()) + " exceeds " +
                          std::to_string(opts.max_arity) + "; use grid mode");
    }
    const detail::CornerSet cs = detail::corner_set(f);
    return detail::sweep(cs, opts, [&](std::span<const double> l, std::optional<double> w) {
        return confirm_exact(f, l, w, opts.routh_tol);
    });
}

Certificate grid_check(const ParamFamily& f, unsigned steps, double routh_tol, std::uint64_t cap) {
    if (steps == 0) throw DomainError("grid_check: steps must be positive");
    const std::size_t m = f.arity();
    double points = std::pow(static_cast<double>(steps) + 1.0, static_cast<double>(m));
    if (points > static_cast<double>(cap)) {
        throw CapExceeded("grid_check: " + std::to_string(static_cast<std::uint64_t>(points)) +
                          " grid points exceed cap " + std::to_string(cap));
    }
    Certificate cert;
    std::vector<unsigned> idx(m, 0);
    std::vector<double> lambda(m, 0.0);
    while (true) {
        for (std::size_t e = 0; e < m; ++e) lambda[e] = static_cast<double>(idx[e]) / steps;
        if (auto w = confirm_exact(f, lambda, std::nullopt, routh_tol)) {
            cert.verdict = Verdict::unstable;
            cert.witness = std::move(w);
            cert.note = "grid point fails is_hurwitz";
            return cert;
        }
        std::size_t e = m;
        while (e > 0) {
            --e;
            if (++idx[e] <= steps) break;
            idx[e] = 0;
            if (e == 0) e = m + 1;
        }
        if (m == 0 || e == m + 1 || std::all_of(idx.begin(), idx.end(), [](unsigned v) { return v == 0; })) break;
    }
    cert.verdict = Verdict::inconclusive;
    cert.grid_only = true;
    cert.note = "stable on grid";
    return cert;
}

DegreeCheck degree_invariance_check(const Problem& problem, double tol, std::uint64_t budget, std::uint64_t seed) {
    problem.validate();
    const auto choices = all_choices(problem);
    const std::size_t n = problem.n();
    detail::VertexTable table(problem, choices, tol, 0);
    DegreeScan scan;
    DegreeCheck out;
    auto check_combo = [&](std::uint64_t combo) {
        const auto ids = table.ids(combo);
        PolynomialMatrix B(n), D(n);
        for (std::size_t p = 0; p < ids.size(); ++p) {
            const Position pos = position_at(p, n);
            (pos.side == Side::B ? B : D)(pos.row, pos.col) = choices[p].vertices[ids[p]];
        }
        const Polynomial d = determinant(compose_family_member(B, problem.A, D, problem.C));
        scan.add(d.coeffs(), tol, "");
        if (!scan.ok && scan.evidence.rfind("vertex", 0) != 0) scan.evidence = combo_string(ids, choices, n) + scan.evidence;
        ++out.checked;
    };
    if (table.size() <= budget) {
        for (std::uint64_t c = 0; c < table.size() && scan.ok; ++c) check_combo(c);
    } else {
        out.subsampled = true;
        Rng rng(seed);
        for (std::uint64_t k = 0; k < budget && scan.ok; ++k) check_combo(rng.below(table.size()));
    }
    const Polynomial center = center_determinant(problem);
    scan.add(center.coeffs(), tol, "box center");
    ++out.checked;
    out.ok = scan.ok;
    out.degree = scan.degree;
    out.evidence = scan.evidence;
    return out;
}

AnalysisReport analyze(const Problem& problem, Method method, const AnalysisOptions& opts) {
    problem.validate();
    return analyze_patterns(problem, method_patterns(method, problem.n()), to_string(method), opts);
}

AnalysisReport analyze_patterns(const Problem& problem, std::vector<EdgeConfiguration> skeletons,
                                const std::string& tag, const AnalysisOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    problem.validate();
    const std::size_t n = problem.n();
    AnalysisReport rep;
    rep.method = tag;
    rep.settings = opts;

    const auto choices = all_choices(problem);
    ConfigStream stream(std::move(skeletons), EnumerationMode::patterns_only);
    const CollapseResult col = collapse_degenerate(stream, problem.B, problem.D);
    rep.raw_patterns = col.raw_patterns;
    rep.collapsed_patterns = col.patterns.size();
    rep.formula_count = col.full_count;
    for (const auto& p : col.patterns) {
        rep.patterns.push_back(edge_set_string(p.edge_positions));
        rep.max_arity = std::max(rep.max_arity, p.edge_positions.size());
    }

    const detail::VertexTable table(problem, choices, opts.sweep.routh_tol, opts.table_cap);
    rep.degree = table.materialized() ? degree_from_table(problem, table, choices, opts.sweep.routh_tol)
                                      : degree_invariance_check(problem, opts.sweep.routh_tol, 1'000'000, opts.seed);
    auto finish = [&] {
        rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    };
    if (!rep.degree.ok) {
        rep.aborted = true;
        rep.abort_reason = "degree_drop: " + rep.degree.evidence;
        rep.verdict = Verdict::inconclusive;
        return finish();
    }

    const FamilyEnumerator fe(col.patterns, choices, n);
    rep.families_total = fe.total();
    std::vector<std::uint64_t> offsets{0};
    for (std::size_t p = 0; p < col.patterns.size(); ++p) offsets.push_back(offsets.back() + fe.count(p));
    const std::uint64_t total = offsets.back();

    std::vector<std::uint64_t> picks;
    if (opts.max_configs > 0 && total > opts.max_configs) {
        rep.subsampled = true;
        Rng rng(opts.seed);
        std::set<std::uint64_t> chosen;
        for (std::uint64_t j = total - opts.max_configs; j < total; ++j) {  // Floyd's sampling
            const std::uint64_t t = rng.below(j + 1);
            if (!chosen.insert(t).second) chosen.insert(j);
        }
        picks.assign(chosen.begin(), chosen.end());
    } else if (total > kMaxFamilies) {
        throw CapExceeded("testing set has " + std::to_string(total) + " families; set max_configs to subsample");
    }
    const std::uint64_t work = rep.subsampled ? picks.size() : total;
    auto global_index = [&](std::uint64_t w) { return rep.subsampled ? picks[w] : w; };

    rep.min_certified_distance = std::numeric_limits<double>::infinity();

    auto run_one = [&](std::uint64_t g) {
        const std::size_t p = static_cast<std::size_t>(
            std::upper_bound(offsets.begin(), offsets.end(), g) - offsets.begin() - 1);
        const CanonicalFamily cf = fe.decode(p, g - offsets[p]);
        const std::size_t m = cf.edge_positions.size();

        detail::CornerSet cs;
        cs.m = m;
        cs.stride = table.stride();
        const std::size_t K = std::size_t{1} << m;
        cs.coef.resize(K * cs.stride);
        std::vector<std::uint8_t> ids = cf.vertex;
        for (std::size_t c = 0; c < K; ++c) {
            for (std::size_t e = 0; e < m; ++e)
                ids[position_index(cf.edge_positions[e], n)] = cf.edge_ends[e][(c >> e) & 1u ? 0 : 1];
            if (table.materialized()) {
                const std::uint64_t combo = table.index(ids);
                const auto d = table.det(combo);
                std::copy(d.begin(), d.end(), cs.coef.begin() + static_cast<std::ptrdiff_t>(c * cs.stride));
                cs.hurwitz.push_back(table.hurwitz(combo));
            } else {
                const auto d = table.compute(ids);
                std::copy(d.begin(), d.end(), cs.coef.begin() + static_cast<std::ptrdiff_t>(c * cs.stride));
            }
        }
        std::optional<ParamFamily> fam;
        auto family = [&]() -> const ParamFamily& {
            if (!fam) fam = family_from_canonical(problem, choices, cf, to_configuration(cf, choices, col.patterns[p], n));
            return *fam;
        };
        Certificate cert = detail::sweep(cs, opts.sweep, [&](std::span<const double> l, std::optional<double> w) {
            return confirm_exact(family(), l, w, opts.sweep.routh_tol);
        });
        if (cert.verdict == Verdict::inconclusive && opts.grid_steps > 0 && m > 0) {
            Certificate g = grid_check(family(), opts.grid_steps, opts.sweep.routh_tol);
            if (g.verdict == Verdict::unstable) cert = std::move(g);
            else cert.grid_only = true;
        }
        return std::make_pair(std::move(cert), cf);
    };

    std::vector<std::optional<std::pair<Certificate, CanonicalFamily>>> results;
    const unsigned jobs = std::max(1u, opts.jobs);
    for (std::uint64_t start = 0; start < work; start += kBlock) {
        const std::uint64_t len = std::min<std::uint64_t>(kBlock, work - start);
        results.assign(len, std::nullopt);
        if (jobs == 1) {
            for (std::uint64_t i = 0; i < len; ++i) {
                results[i] = run_one(global_index(start + i));
                if (results[i]->first.verdict == Verdict::unstable) break;
            }
        } else {
            std::atomic<std::uint64_t> next{0};
            std::atomic<std::uint64_t> first_unstable{len};
            std::vector<std::thread> pool;
            std::exception_ptr error;
            std::mutex error_mutex;
            for (unsigned t = 0; t < jobs; ++t) {
                pool.emplace_back([&] {
                    for (std::uint64_t i; (i = next.fetch_add(1)) < len;) {
                        if (i > first_unstable.load()) break;
                        try {
                            results[i] = run_one(global_index(start + i));
                        } catch (...) {
                            std::lock_guard lock(error_mutex);
                            if (!error) error = std::current_exception();
                            return;
                        }
                        if (results[i]->first.verdict == Verdict::unstable) {
                            std::uint64_t cur = first_unstable.load();
                            while (i < cur && !first_unstable.compare_exchange_weak(cur, i)) {
                            }
                        }
                    }
                });
            }
            for (auto& th : pool) th.join();
            if (error) std::rethrow_exception(error);
        }
        for (std::uint64_t i = 0; i < len; ++i) {
            if (!results[i]) continue;
            auto& [cert, cf] = *results[i];
            ++rep.checked;
            rep.omega_evaluations += cert.evidence.omega_evaluations;
            if (cert.grid_only) ++rep.grid_only;
            switch (cert.verdict) {
                case Verdict::stable:
                    ++rep.stable;
                    rep.min_certified_distance = std::min(rep.min_certified_distance, cert.evidence.min_certified_distance);
                    break;
                case Verdict::inconclusive: ++rep.inconclusive; break;
                case Verdict::unstable: {
                    ++rep.unstable;
                    FamilyWitness fw;
                    fw.config = to_configuration(cf, choices, col.patterns[cf.pattern], n);
                    fw.pattern = col.patterns[cf.pattern].representative.describe_pattern() + " " +
                                 edge_set_string(cf.edge_positions);
                    fw.family_index = global_index(start + i);
                    fw.witness = std::move(*cert.witness);
                    rep.first_witness = std::move(fw);
                    rep.verdict = Verdict::unstable;
                    return finish();
                }
            }
        }
    }
    rep.verdict = (rep.inconclusive > 0 || rep.subsampled) ? Verdict::inconclusive : Verdict::stable;
    return finish();
}

std::uint64_t for_each_family(const Problem& problem, std::vector<EdgeConfiguration> skeletons,
                              const std::function<bool(const ParamFamily&, std::uint64_t)>& visit) {
    problem.validate();
    const std::size_t n = problem.n();
    const auto choices = all_choices(problem);
    ConfigStream stream(std::move(skeletons), EnumerationMode::patterns_only);
    const CollapseResult col = collapse_degenerate(stream, problem.B, problem.D);
    FamilyEnumerator fe(col.patterns, choices, n);
    CanonicalFamily cf;
    std::uint64_t k = 0;
    while (fe.next(cf)) {
        const ParamFamily f =
            family_from_canonical(problem, choices, cf, to_configuration(cf, choices, col.patterns[cf.pattern], n));
        if (!visit(f, k++)) break;
    }
    return k;
}

MarginResult robust_margin(const ProblemFactory& factory, double lo, double hi, Method method, double tol,
                           const AnalysisOptions& opts) {
    if (!(lo < hi) || !(tol > 0)) throw DomainError("robust_margin: need lo < hi and tol > 0");
    MarginResult res;
    auto verdict_at = [&](double eps) {
        const Verdict v = analyze(factory(eps), method, opts).verdict;
        res.trace.push_back({eps, v});
        return v;
    };
    const Verdict vlo = verdict_at(lo);
    const Verdict vhi = verdict_at(hi);
    if (vlo != Verdict::stable || vhi == Verdict::stable) {
        throw DomainError(std::string("robust_margin: invalid bracket, eps=") + std::to_string(lo) + " is " +
                          to_string(vlo) + ", eps=" + std::to_string(hi) + " is " + to_string(vhi));
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (verdict_at(mid) == Verdict::stable) lo = mid;
        else hi = mid;
    }
    res.eps_stable = lo;
    res.eps_unstable = hi;
    return res;
}

}  // namespace ivstab
