// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's kernels; loops are written out plainly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

/// Column j of a column-major d x p matrix.
inline Vec column(const std::vector<double>& m, std::size_t d, std::size_t j) {
    return Vec(m.begin() + static_cast<std::ptrdiff_t>(j * d), m.begin() + static_cast<std::ptrdiff_t>((j + 1) * d));
}

/// Naive double loop: max_i |a_i^T x|, first index attaining it.
inline std::pair<double, std::size_t> lambda_max(const std::vector<double>& m, std::size_t d, std::size_t p,
                                                 const Vec& x) {
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += m[j * d + i] * x[i];
        if (std::abs(s) > best) {
            best = std::abs(s);
            arg = j;
        }
    }
    return {best, arg};
}

/// Small fast generator for bulk sampling (splitmix64).
struct SplitMix {
    std::uint64_t state;
    explicit SplitMix(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double normal() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double u = 0.0, v = 0.0, s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare = v * f;
        has_spare = true;
        return u * f;
    }
    bool has_spare = false;
    double spare = 0.0;

    /// Ziggurat normal (128 layers, 32-bit draws): much cheaper than normal()
    /// for bulk sampling.
    double fast_normal() {
        const auto& z = Ziggurat::get();
        for (;;) {
            const auto hz = static_cast<std::int32_t>(static_cast<std::uint32_t>(next() >> 32));
            const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
            const double x = hz * z.w[iz];
            if (static_cast<std::uint32_t>(hz < 0 ? -static_cast<std::int64_t>(hz) : hz) < z.k[iz]) return x;
            if (iz == 0) { // tail beyond r
                double tx = 0.0, ty = 0.0;
                do {
                    tx = -std::log(1.0 - uniform()) / Ziggurat::r;
                    ty = -std::log(1.0 - uniform());
                } while (ty + ty < tx * tx);
                return hz > 0 ? Ziggurat::r + tx : -Ziggurat::r - tx;
            }
            if (z.f[iz] + uniform() * (z.f[iz - 1] - z.f[iz]) < std::exp(-0.5 * x * x)) return x;
        }
    }

private:
    struct Ziggurat {
        static constexpr double r = 3.442619855899;
        std::uint32_t k[128];
        double w[128], f[128];
        Ziggurat() {
            const double m1 = 2147483648.0, v = 9.91256303526217e-3;
            double dn = r, tn = r;
            const double q = v / std::exp(-0.5 * dn * dn);
            k[0] = static_cast<std::uint32_t>((dn / q) * m1);
            k[1] = 0;
            w[0] = q / m1;
            w[127] = dn / m1;
            f[0] = 1.0;
            f[127] = std::exp(-0.5 * dn * dn);
            for (int i = 126; i >= 1; --i) {
                dn = std::sqrt(-2.0 * std::log(v / dn + std::exp(-0.5 * dn * dn)));
                k[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
                tn = dn;
                f[i] = std::exp(-0.5 * dn * dn);
                w[i] = dn / m1;
            }
        }
        static const Ziggurat& get() {
            static const Ziggurat z;
            return z;
        }
    };
};

/// Uniform point in the ball B(q, r).
inline void sample_ball(SplitMix& rng, const Vec& q, double r, Vec& out) {
    const std::size_t n = q.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = rng.normal();
        s += out[i] * out[i];
    }
    const double scale = r * std::pow(rng.uniform(), 1.0 / static_cast<double>(n)) / std::sqrt(s);
    for (std::size_t i = 0; i < n; ++i) out[i] = q[i] + scale * out[i];
}

/// Uniform points in {||theta - q|| <= r, n^T (theta - q) <= h} for unit n and
/// -r < h. The height t = n^T (theta - q) has the log-concave density
/// (r^2 - t^2)^((m-1)/2) on [-r, min(h, r)] and is drawn by rejection, under an
/// exponential envelope tangent at the peak when the peak is the cap's top.
/// The slice at t is a uniform (m-1)-ball orthogonal to n.
class DomeSampler {
public:
    DomeSampler(const Vec& q, double r, const Vec& n, double h)
        : q_(q), n_(n), r_(r), top_(std::min(h, r)), len_(top_ + r),
          half_dim_(0.5 * static_cast<double>(q.size() - 1)) {
        const double t_peak = top_ < 0.0 ? top_ : 0.0;
        log_peak_ = std::log(r * r - t_peak * t_peak);
        // Slope of the log density at the top of a cap; the tangent bounds it above.
        slope_ = top_ < 0.0 ? -2.0 * half_dim_ * top_ / (r * r - top_ * top_) : 0.0;
        tangent_ = slope_ * len_ > 1e-6;
        tail_ = tangent_ ? -std::expm1(-slope_ * len_) : 0.0;
        inv_slice_dim_ = q.size() > 1 ? 1.0 / static_cast<double>(q.size() - 1) : 0.0;
    }

    void operator()(SplitMix& rng, Vec& out) const {
        const std::size_t m = q_.size();
        double t = 0.0;
        for (;;) {
            const double u = rng.uniform();
            double envelope = 0.0;
            if (tangent_) {
                t = top_ + std::log1p(-u * tail_) / slope_;
                envelope = slope_ * (t - top_);
            } else {
                t = -r_ + len_ * u;
            }
            const double s = r_ * r_ - t * t;
            const double v = rng.uniform();
            if (s > 0.0 && v > 0.0 && std::log(v) <= half_dim_ * (std::log(s) - log_peak_) - envelope) break;
        }
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            out[i] = rng.fast_normal();
            proj += out[i] * n_[i];
        }
        double s2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            out[i] -= proj * n_[i];
            s2 += out[i] * out[i];
        }
        const double slice = std::sqrt(std::max(r_ * r_ - t * t, 0.0));
        const double scale = m > 1 && s2 > 0.0 ? slice * std::pow(rng.uniform(), inv_slice_dim_) / std::sqrt(s2) : 0.0;
        for (std::size_t i = 0; i < m; ++i) out[i] = q_[i] + t * n_[i] + scale * out[i];
    }

private:
    Vec q_, n_;
    double r_, top_, len_, half_dim_;
    double log_peak_ = 0.0, slope_ = 0.0, tail_ = 0.0, inv_slice_dim_ = 0.0;
    bool tangent_ = false;
};

/// Dome {theta : ||theta - q|| <= r, n^T theta <= c} (no half-space when n is empty).
struct Dome {
    Vec q;
    double r = 0.0;
    Vec n;
    double c = 0.0;

    bool contains(const Vec& t, double slack = 0.0) const {
        double d2 = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) d2 += (t[i] - q[i]) * (t[i] - q[i]);
        if (d2 > (r + slack) * (r + slack)) return false;
        return n.empty() || dot(n, t) <= c + slack;
    }
};

/// Euclidean projection onto the dome by Dykstra's alternating projections.
inline Vec project(const Dome& dome, const Vec& y, int max_iters = 20000) {
    const std::size_t m = y.size();
    auto proj_ball = [&](Vec v) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) d2 += (v[i] - dome.q[i]) * (v[i] - dome.q[i]);
        const double d = std::sqrt(d2);
        if (d > dome.r) {
            for (std::size_t i = 0; i < m; ++i) v[i] = dome.q[i] + (v[i] - dome.q[i]) * (dome.r / d);
        }
        return v;
    };
    if (dome.n.empty()) return proj_ball(y);
    auto proj_half = [&](Vec v) {
        const double excess = dot(dome.n, v) - dome.c;
        if (excess > 0.0) {
            for (std::size_t i = 0; i < m; ++i) v[i] -= excess * dome.n[i];
        }
        return v;
    };
    Vec x = y, p(m, 0.0), qq(m, 0.0);
    for (int it = 0; it < max_iters; ++it) {
        Vec u(m);
        for (std::size_t i = 0; i < m; ++i) u[i] = x[i] + p[i];
        const Vec yb = proj_ball(u);
        for (std::size_t i = 0; i < m; ++i) p[i] = u[i] - yb[i];
        Vec v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = yb[i] + qq[i];
        const Vec xn = proj_half(v);
        for (std::size_t i = 0; i < m; ++i) qq[i] = v[i] - xn[i];
        double change = 0.0;
        for (std::size_t i = 0; i < m; ++i) change = std::max(change, std::abs(xn[i] - x[i]));
        x = xn;
        if (change < 1e-16) break;
    }
    return x;
}

/// max a^T theta over the dome by projected-gradient ascent. Step size is the
/// region's radius over ||a||, so a fixed point satisfies the optimality condition.
inline double projected_gradient_max(const Dome& dome, const Vec& a, int iters = 400) {
    const double step = dome.r / norm(a);
    Vec theta = project(dome, dome.q);
    for (int it = 0; it < iters; ++it) {
        Vec y = theta;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += step * a[i];
        Vec next = project(dome, y);
        double change = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) change = std::max(change, std::abs(next[i] - theta[i]));
        theta = std::move(next);
        if (change < 1e-15) break;
    }
    return dot(a, theta);
}

/// Diameter of a planar point set: convex hull (monotone chain) then all hull pairs.
inline double planar_diameter(std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2) return 0.0;
    auto cross = [](const auto& o, const auto& a, const auto& b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<double, double>> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& pt : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pt) <= 0) --k;
        hull[k++] = pt;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        for (std::size_t j = i + 1; j < hull.size(); ++j) {
            const double dx = hull[i].first - hull[j].first, dy = hull[i].second - hull[j].second;
            best = std::max(best, dx * dx + dy * dy);
        }
    }
    return std::sqrt(best);
}

} // namespace oracle
