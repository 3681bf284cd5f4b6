#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ivstab/hull.hpp"

namespace ivstab::detail {

namespace {

constexpr std::size_t kInitialPieces = 8;
// Consecutive ω-bisections of an item before its λ-box is split instead.
constexpr unsigned kOmegaDepth = 12;

Complex eval_at_jw(std::span<const double> c, double omega) {
    const Complex z(0.0, omega);
    Complex acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

// Values at the 2^m corners of a sub-box, interpolated from full-box corner values.
void subbox_values(std::span<const Complex> full, std::size_t m, std::span<const double> lo,
                   std::span<const double> hi, std::vector<Complex>& out, std::vector<Complex>& tmp) {
    const std::size_t K = std::size_t{1} << m;
    out.resize(K);
    for (std::size_t q = 0; q < K; ++q) {
        tmp.assign(full.begin(), full.end());
        std::size_t len = K;
        for (std::size_t e = 0; e < m; ++e) {
            const double l = (q >> e) & 1u ? hi[e] : lo[e];
            len /= 2;
            for (std::size_t i = 0; i < len; ++i) tmp[i] = (1.0 - l) * tmp[2 * i] + l * tmp[2 * i + 1];
        }
        out[q] = tmp[0];
    }
}

struct Item {
    double a, b;
    std::size_t va, vb;   // offsets of full corner values at a and b
    std::size_t box;      // offset of lo (m values) followed by hi (m values)
    bool full_box;
    unsigned depth;       // ω-bisections since the last λ split
};

}  // namespace

void interpolate_coeffs(const CornerSet& cs, std::span<const double> lambda, std::vector<double>& out) {
    const std::size_t K = std::size_t{1} << cs.m;
    std::vector<double> work(cs.coef);
    std::size_t len = K;
    for (std::size_t e = 0; e < cs.m; ++e) {
        const double l = lambda[e];
        len /= 2;
        for (std::size_t i = 0; i < len; ++i)
            for (std::size_t k = 0; k < cs.stride; ++k)
                work[i * cs.stride + k] = (1.0 - l) * work[2 * i * cs.stride + k] + l * work[(2 * i + 1) * cs.stride + k];
    }
    out.assign(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(cs.stride));
}

Certificate sweep(const CornerSet& cs, const SweepOptions& opts, const ConfirmFn& confirm) {
    Certificate cert;
    const std::size_t m = cs.m;
    const std::size_t K = std::size_t{1} << m;
    const std::size_t stride = cs.stride;

    // Degree invariance over the corners: same degree, same leading sign.
    std::size_t degree = 0;
    std::vector<std::size_t> deg(K, 0);
    for (std::size_t c = 0; c < K; ++c) {
        auto p = cs.corner(c);
        std::size_t d = stride;
        while (d > 0 && p[d - 1] == 0.0) --d;
        if (d == 0) {
            cert.note = "degree_drop: determinant vanishes identically at a corner";
            return cert;
        }
        deg[c] = d - 1;
        degree = std::max(degree, d - 1);
    }
    double lead_sign = 0.0;
    for (std::size_t c = 0; c < K; ++c) {
        auto p = cs.corner(c);
        double mx = 0.0;
        for (double x : p) mx = std::max(mx, std::abs(x));
        const double lead = p[degree];
        if (deg[c] != degree || std::abs(lead) <= opts.routh_tol * mx ||
            (lead_sign != 0.0 && (lead > 0) != (lead_sign > 0))) {
            cert.note = "degree_drop: corner " + std::to_string(c) + " changes the leading term";
            return cert;
        }
        lead_sign = lead;
    }

    std::vector<double> lambda(m, 0.0);
    auto corner_lambda = [&](std::size_t c) {
        for (std::size_t e = 0; e < m; ++e) lambda[e] = (c >> e) & 1u ? 1.0 : 0.0;
    };

    for (std::size_t c = 0; c < K; ++c) {
        const bool ok = cs.hurwitz.empty() ? is_hurwitz(cs.corner(c), opts.routh_tol).stable : cs.hurwitz[c] != 0;
        if (ok) continue;
        corner_lambda(c);
        if (auto w = confirm(lambda, std::nullopt)) {
            cert.verdict = Verdict::unstable;
            cert.witness = std::move(w);
            cert.note = "unstable corner";
            return cert;
        }
    }

    std::vector<double> poly;
    std::fill(lambda.begin(), lambda.end(), 0.5);
    interpolate_coeffs(cs, lambda, poly);
    if (!is_hurwitz(poly, opts.routh_tol).stable) {
        if (auto w = confirm(lambda, std::nullopt)) {
            cert.verdict = Verdict::unstable;
            cert.witness = std::move(w);
            cert.note = "unstable center";
            return cert;
        }
    }
    if (m == 0 || degree == 0) {
        cert.verdict = Verdict::stable;
        cert.evidence.min_certified_distance = std::numeric_limits<double>::infinity();
        return cert;
    }

    // Cauchy bound valid for every member: coefficients are multilinear in λ,
    // so |c_k(λ)| ≤ E_k and |lead(λ)| ≥ the smallest corner lead.
    std::vector<double> envelope(stride, 0.0);
    double min_lead = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < K; ++c) {
        auto p = cs.corner(c);
        for (std::size_t k = 0; k < stride; ++k) envelope[k] = std::max(envelope[k], std::abs(p[k]));
        min_lead = std::min(min_lead, std::abs(p[degree]));
    }
    double omega_max = 0.0;
    for (std::size_t k = 0; k < degree; ++k) omega_max = std::max(omega_max, envelope[k] / min_lead);
    omega_max += 1.0;
    cert.evidence.omega_max = omega_max;
    // |d/dω det(jω, λ)| ≤ Σ k·E_k·ω^{k−1} for every λ in the box.
    thread_local std::vector<double> envelopes;  // one coefficient envelope per λ-box
    envelopes.assign(envelope.begin(), envelope.end());
    auto lipschitz = [&](const Item& it, double w) {
        const double* env = envelopes.data() + (it.box / (2 * m)) * stride;
        double acc = 0.0;
        for (std::size_t k = stride; k-- > 1;) acc = acc * w + static_cast<double>(k) * env[k];
        return acc;
    };
    // |c_k| is the modulus of a multilinear function, so its maximum over a box sits at a corner.
    std::vector<double> sub_corner(m), sub_poly;
    auto push_envelope = [&](std::span<const double> l, std::span<const double> h, std::size_t parent) {
        const std::size_t off = envelopes.size();
        if (m > 8) {
            envelopes.insert(envelopes.end(), envelopes.begin() + static_cast<std::ptrdiff_t>(parent * stride),
                             envelopes.begin() + static_cast<std::ptrdiff_t>((parent + 1) * stride));
            return;
        }
        envelopes.resize(off + stride, 0.0);
        for (std::size_t q = 0; q < K; ++q) {
            for (std::size_t e = 0; e < m; ++e) sub_corner[e] = (q >> e) & 1u ? h[e] : l[e];
            interpolate_coeffs(cs, sub_corner, sub_poly);
            for (std::size_t k = 0; k < stride; ++k)
                envelopes[off + k] = std::max(envelopes[off + k], std::abs(sub_poly[k]));
        }
    };

    thread_local std::vector<Complex> values;   // full corner values, K per ω
    thread_local std::vector<double> boxes;
    thread_local std::vector<Item> stack;
    thread_local std::vector<Complex> sub, tmp, scratch;
    values.clear();
    boxes.clear();
    stack.clear();

    auto eval_all = [&](double w) {
        const std::size_t off = values.size();
        for (std::size_t c = 0; c < K; ++c) values.push_back(eval_at_jw(cs.corner(c), w));
        ++cert.evidence.omega_evaluations;
        return off;
    };
    auto corner_scale = [&](std::size_t off) {
        double s = 0.0;
        for (std::size_t c = 0; c < K; ++c) s = std::max(s, std::abs(values[off + c]));
        return s;
    };
    auto distance = [&](const Item& it, std::size_t off) {
        std::span<const Complex> full(values.data() + off, K);
        if (it.full_box) return origin_distance(full, scratch);
        subbox_values(full, m, {boxes.data() + it.box, m}, {boxes.data() + it.box + m, m}, sub, tmp);
        return origin_distance(sub, scratch);
    };

    const std::size_t full_box = boxes.size();
    boxes.insert(boxes.end(), m, 0.0);
    boxes.insert(boxes.end(), m, 1.0);

    std::vector<std::size_t> grid_off;
    for (std::size_t i = 0; i <= kInitialPieces; ++i)
        grid_off.push_back(eval_all(omega_max * static_cast<double>(i) / kInitialPieces));
    for (std::size_t i = kInitialPieces; i-- > 0;) {
        stack.push_back(Item{omega_max * static_cast<double>(i) / kInitialPieces,
                             omega_max * static_cast<double>(i + 1) / kInitialPieces, grid_off[i], grid_off[i + 1],
                             full_box, true, 0});
    }

    const double omega_floor = opts.freq_floor * omega_max;
    double min_dist = std::numeric_limits<double>::infinity();
    bool unresolved = false;

    while (!stack.empty()) {
        if (++cert.evidence.items > opts.max_items) {
            unresolved = true;
            cert.note = "work budget exhausted";
            break;
        }
        const Item it = stack.back();
        stack.pop_back();

        const double da = distance(it, it.va);
        const double db = distance(it, it.vb);
        const double sa = corner_scale(it.va);
        const double sb = corner_scale(it.vb);
        const bool ok_a = da > opts.hull_tol * sa;
        const bool ok_b = db > opts.hull_tol * sb;

        const double* lo = boxes.data() + it.box;
        const double* hi = lo + m;
        std::size_t widest = 0;
        for (std::size_t e = 1; e < m; ++e)
            if (hi[e] - lo[e] > hi[widest] - lo[widest]) widest = e;
        const bool can_split = hi[widest] - lo[widest] > opts.lambda_floor;

        if (ok_a && ok_b) {
            if (da + db > lipschitz(it, it.b) * (it.b - it.a)) {
                min_dist = std::min({min_dist, da / sa, db / sb});
                continue;
            }
            const bool can_bisect = it.b - it.a > omega_floor;
            if (can_bisect && (it.depth < kOmegaDepth || !can_split)) {
                const double mid = 0.5 * (it.a + it.b);
                const std::size_t vm = eval_all(mid);
                stack.push_back(Item{mid, it.b, vm, it.vb, it.box, it.full_box, it.depth + 1});
                stack.push_back(Item{it.a, mid, it.va, vm, it.box, it.full_box, it.depth + 1});
                continue;
            }
            if (!can_split) {
                unresolved = true;
                cert.evidence.unresolved_omega = it.a;
                continue;
            }
        } else if (!can_split) {
            // 0 lies in (or on) the hull at an endpoint of a minimal λ-box.
            unresolved = true;
            cert.evidence.unresolved_omega = ok_a ? it.b : it.a;
            continue;
        }

        const double w_bad = !ok_a ? it.a : !ok_b ? it.b : 0.5 * (it.a + it.b);
        ++cert.evidence.lambda_splits;
        const double cut = 0.5 * (lo[widest] + hi[widest]);
        std::vector<double> lo_v(lo, lo + m), hi_v(hi, hi + m);
        for (int half = 0; half < 2; ++half) {
            std::vector<double> l = lo_v, h = hi_v;
            if (half == 0) h[widest] = cut;
            else l[widest] = cut;
            for (std::size_t e = 0; e < m; ++e) lambda[e] = 0.5 * (l[e] + h[e]);
            interpolate_coeffs(cs, lambda, poly);
            if (!is_hurwitz(poly, opts.routh_tol).stable) {
                if (auto w = confirm(lambda, w_bad)) {
                    cert.verdict = Verdict::unstable;
                    cert.witness = std::move(w);
                    cert.note = "crossing located by refinement";
                    return cert;
                }
            }
            const std::size_t off = boxes.size();
            boxes.insert(boxes.end(), l.begin(), l.end());
            boxes.insert(boxes.end(), h.begin(), h.end());
            push_envelope(l, h, it.box / (2 * m));
            stack.push_back(Item{it.a, it.b, it.va, it.vb, off, false, 0});
        }
    }

    cert.evidence.min_certified_distance = min_dist;
    if (unresolved) {
        cert.verdict = Verdict::inconclusive;
        if (cert.note.empty()) cert.note = "resolution floor reached without certified exclusion";
    } else {
        cert.verdict = Verdict::stable;
    }
    return cert;
}

CornerSet corner_set(const ParamFamily& f) {
    CornerSet cs;
    cs.m = f.arity();
    const std::size_t K = std::size_t{1} << cs.m;
    std::vector<Polynomial> dets;
    dets.reserve(K);
    std::vector<double> lambda(cs.m);
    std::size_t stride = 1;
    for (std::size_t c = 0; c < K; ++c) {
        for (std::size_t e = 0; e < cs.m; ++e) lambda[e] = (c >> e) & 1u ? 1.0 : 0.0;
        dets.push_back(member_determinant(f, lambda));
        stride = std::max(stride, dets.back().vec().size());
    }
    cs.stride = stride;
    cs.coef.assign(K * stride, 0.0);
    for (std::size_t c = 0; c < K; ++c)
        std::copy(dets[c].vec().begin(), dets[c].vec().end(), cs.coef.begin() + static_cast<std::ptrdiff_t>(c * stride));
    return cs;
}

}  // namespace ivstab::detail
