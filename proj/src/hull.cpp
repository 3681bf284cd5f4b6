#include "ivstab/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ivstab {

namespace {

double cross(Complex o, Complex a, Complex b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

double segment_distance(Complex a, Complex b, Complex z) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - a);
    double t = ((z - a) * std::conj(d)).real() / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

void build_hull(std::vector<Complex>& pts, std::vector<Complex>& out) {
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    out.clear();
    if (pts.size() <= 1) {
        out = pts;
        return;
    }
    out.resize(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(out[k - 2], out[k - 1], pts[i]) <= 0) --k;
        out[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(out[k - 2], out[k - 1], pts[i]) <= 0) --k;
        out[k++] = pts[i];
    }
    out.resize(k - 1);
}

}  // namespace

std::vector<Complex> convex_hull(std::span<const Complex> pts) {
    std::vector<Complex> work(pts.begin(), pts.end());
    std::vector<Complex> out;
    build_hull(work, out);
    return out;
}

double signed_distance(std::span<const Complex> hull, Complex z) {
    if (hull.empty()) return std::numeric_limits<double>::infinity();
    if (hull.size() == 1) return std::abs(z - hull[0]);
    if (hull.size() == 2) return segment_distance(hull[0], hull[1], z);
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Complex a = hull[i];
        const Complex b = hull[(i + 1) % hull.size()];
        if (cross(a, b, z) < 0) inside = false;
        best = std::min(best, segment_distance(a, b, z));
    }
    return inside ? -best : best;
}

double origin_distance(std::span<const Complex> pts, std::vector<Complex>& scratch) {
    if (pts.size() == 1) return std::abs(pts[0]);
    thread_local std::vector<Complex> hull;
    scratch.assign(pts.begin(), pts.end());
    build_hull(scratch, hull);
    return signed_distance(hull, Complex{});
}

}  // namespace ivstab
