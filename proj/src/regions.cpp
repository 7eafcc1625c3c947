// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "seqscreen/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seqscreen/error.hpp"
#include "seqscreen/kernels.hpp"
#include "seqscreen/lasso.hpp"
#include "seqscreen/parallel.hpp"

namespace seqscreen {

namespace {

// A cap offset below -1 by more than this is an empty region; within it the
// dome has collapsed onto the single point q - r n.
constexpr double kCapSlack = 1e-9;

double cap_offset(const Region& region) {
    const auto& h = *region.halfspace;
    return (h.offset - kernels::dot(h.normal, region.center)) / region.radius;
}

void check_lambda_pair(double lambda_k, double lambda_prev) {
    if (!(lambda_k > 0.0) || !(lambda_k < lambda_prev) || !std::isfinite(lambda_prev)) {
        throw InvalidArgument("need 0 < lambda_k < lambda_prev (got lambda_k = " + std::to_string(lambda_k) +
                              ", lambda_prev = " + std::to_string(lambda_prev) + ")");
    }
}

} // namespace

void Region::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("region radius must be positive");
    if (center.empty()) throw InvalidArgument("region center is empty");
    if (!halfspace) return;
    if (halfspace->normal.size() != center.size()) throw InvalidArgument("half-space normal has wrong dimension");
    if (std::abs(kernels::norm(halfspace->normal) - 1.0) > 1e-9) {
        throw InvalidArgument("half-space normal is not unit length");
    }
    if (cap_offset(*this) < -1.0 - kCapSlack) throw NumericalError("region has an empty interior");
}

KeepMask KeepMask::all(std::size_t p, bool value) {
    return from_flags(std::vector<std::uint8_t>(p, value ? 1 : 0));
}

KeepMask KeepMask::from_flags(std::vector<std::uint8_t> flags) {
    KeepMask m;
    m.kept_count = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
    m.keep = std::move(flags);
    return m;
}

std::vector<std::size_t> KeepMask::kept_indices() const {
    std::vector<std::size_t> idx;
    idx.reserve(kept_count);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i]) idx.push_back(i);
    }
    return idx;
}

Region build_initial_region(std::span<const double> x, double lambda_1, const LambdaMaxResult& lmr,
                            std::span<const double> a_star) {
    if (!(lambda_1 > 0.0) || !(lambda_1 < lmr.lambda_max)) {
        throw InvalidArgument("need 0 < lambda_1 < lambda_max");
    }
    if (a_star.size() != x.size()) throw InvalidArgument("a_star has wrong dimension");
    Region region;
    region.center.resize(x.size());
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        region.center[i] = x[i] / lambda_1;
        const double t = region.center[i] - x[i] / lmr.lambda_max;
        sq += t * t;
    }
    region.radius = std::sqrt(sq);
    if (region.radius < kRegionTolerance) {
        throw InvalidArgument("lambda_1 is too close to lambda_max: initial sphere radius vanishes");
    }
    const double a_norm = kernels::norm(a_star);
    if (!(a_norm > 0.0)) throw InvalidArgument("a_star is zero");
    Halfspace h;
    h.normal.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) h.normal[i] = lmr.sign * a_star[i] / a_norm;
    h.offset = 1.0 / a_norm;
    region.halfspace = std::move(h);
    return region;
}

Region build_step_region(std::span<const double> x, double lambda_k, double lambda_prev,
                         std::span<const double> theta_prev) {
    check_lambda_pair(lambda_k, lambda_prev);
    if (theta_prev.size() != x.size()) throw InvalidArgument("theta_prev has wrong dimension");
    const std::size_t d = x.size();

    Region region;
    region.center.resize(d);
    for (std::size_t i = 0; i < d; ++i) region.center[i] = x[i] / lambda_k;
    region.radius = std::sqrt(kernels::squared_distance(region.center, theta_prev));

    std::vector<double> normal(d);
    for (std::size_t i = 0; i < d; ++i) normal[i] = x[i] / lambda_prev - theta_prev[i];
    const double gap = kernels::norm(normal);
    if (gap <= kRegionTolerance) {
        region.degenerate = true;
        if (region.radius < kRegionTolerance) throw NumericalError("step region radius vanishes");
        return region;
    }
    for (auto& v : normal) v /= gap;
    const double offset = kernels::dot(normal, theta_prev);
    if (!(kernels::dot(normal, region.center) > offset)) {
        throw NumericalError("step region center lies inside its half-space; theta_prev is not a projection of "
                             "x/lambda_prev onto the dual feasible set");
    }
    region.halfspace = Halfspace{std::move(normal), offset};
    return region;
}

Region widen_region(const Region& region, double radius_slack, double offset_slack) {
    if (!(radius_slack >= 0.0) || !(offset_slack >= 0.0)) throw InvalidArgument("region slack must be >= 0");
    Region out = region;
    out.radius += radius_slack;
    if (out.halfspace) out.halfspace->offset += offset_slack;
    return out;
}

double step_offset_slack(double dual_error, double normal_length, double radius) {
    if (dual_error == 0.0) return 0.0;
    if (!(normal_length > 0.0)) return std::numeric_limits<double>::infinity();
    // For theta in F and in the widened sphere:
    // (u - theta_hat)^T (theta - theta_hat) <= e (g + ||theta - theta_hat|| + 3e), ||theta - theta_hat|| <= 2r + e.
    const double e = dual_error;
    return e * (normal_length + 2.0 * radius + 4.0 * e) / normal_length;
}

Region widen_for_dual_error(const Region& nominal, std::span<const double> x, double lambda_k, double lambda_prev,
                            std::span<const double> theta_prev, double dual_error) {
    check_lambda_pair(lambda_k, lambda_prev);
    if (theta_prev.size() != x.size()) throw InvalidArgument("theta_prev has wrong dimension");
    if (!(dual_error >= 0.0)) throw InvalidArgument("dual_error must be >= 0");
    const double rounding = kRoundingSlack * kernels::norm(x) / lambda_k;
    double offset_slack = 0.0;
    if (nominal.halfspace && dual_error > 0.0) {
        double g2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double t = x[i] / lambda_prev - theta_prev[i];
            g2 += t * t;
        }
        offset_slack = step_offset_slack(dual_error, std::sqrt(g2), nominal.radius);
    }
    return widen_region(nominal, dual_error + rounding, offset_slack + rounding);
}

double region_diameter(const Region& region) {
    region.validate();
    if (!region.halfspace) return 2.0 * region.radius;
    const double n_dot_q = kernels::dot(region.halfspace->normal, region.center);
    const double excess = n_dot_q - region.halfspace->offset; // > 0 iff q outside
    if (excess <= 0.0) return 2.0 * region.radius;
    const double h = std::min(excess, region.radius);
    return 2.0 * std::sqrt((region.radius - h) * (region.radius + h));
}

double step_diameter_from_normal(std::span<const double> x, std::span<const double> n_prev, double lambda_k,
                      double lambda_prev) {
    const double xn = kernels::dot(x, n_prev);
    const double quad = std::max(0.0, kernels::squared_norm(x) - xn * xn);
    return 2.0 * (1.0 / lambda_k - 1.0 / lambda_prev) * std::sqrt(quad);
}

RegionEvaluator::RegionEvaluator(const Region& region) : region_(&region) {
    region.validate();
    if (region.halfspace) {
        const double cap = cap_offset(region);
        if (cap < 1.0) {
            has_halfspace_ = true;
            cap_ = std::max(cap, -1.0);
            cap_sine_ = std::sqrt(std::max(0.0, 1.0 - cap_ * cap_));
        }
    }
}

double RegionEvaluator::max(double a_dot_q, double n_dot_a, double a_norm) const {
    const double r = region_->radius;
    if (!has_halfspace_ || n_dot_a <= cap_ * a_norm) return a_dot_q + r * a_norm;
    const double perp = std::sqrt(std::max(0.0, (a_norm - n_dot_a) * (a_norm + n_dot_a)));
    return a_dot_q + r * (cap_ * n_dot_a + cap_sine_ * perp);
}

bool RegionEvaluator::keeps(double a_dot_q, double n_dot_a, double a_norm) const {
    return max(a_dot_q, n_dot_a, a_norm) >= 1.0 || max(-a_dot_q, -n_dot_a, a_norm) >= 1.0;
}

double RegionEvaluator::max(std::span<const double> a) const {
    if (a.size() != region_->center.size()) throw InvalidArgument("feature has wrong dimension");
    const double n_dot_a = has_halfspace_ ? kernels::dot(region_->halfspace->normal, a) : 0.0;
    return max(kernels::dot(a, region_->center), n_dot_a, kernels::norm(a));
}

double region_max(const Region& region, std::span<const double> a) { return RegionEvaluator(region).max(a); }

KeepMask screen(const Dictionary& dict, const Region& region, const ScreenOptions& options) {
    if (region.center.size() != dict.rows()) throw InvalidArgument("region dimension does not match dictionary");
    const RegionEvaluator eval(region);
    const std::vector<double>* norms = dict.column_norms();
    std::vector<std::uint8_t> keep(dict.cols(), 0);

    auto screen_block = [&](const ColumnBlock& block) {
        for (std::size_t j = 0; j < block.width; ++j) {
            const auto col = block.column(j);
            const std::size_t i = block.start + j;
            const double a_norm = norms ? (*norms)[i] : kernels::norm(col);
            const double n_dot_a = eval.has_halfspace() ? kernels::dot(region.halfspace->normal, col) : 0.0;
            keep[i] = eval.keeps(kernels::dot(col, region.center), n_dot_a, a_norm) ? 1 : 0;
        }
    };

    if (dict.file_backed()) {
        auto stream = dict.chunks(options.chunk_size);
        ColumnBlock block;
        std::size_t chunks = 0;
        while (stream.next(block)) {
            screen_block(block);
            ++chunks;
        }
        if (options.stats) {
            options.stats->peak_buffer_bytes = stream.buffer_bytes();
            options.stats->chunks = chunks;
        }
    } else {
        const auto parts = chunk_partition(dict.cols(), options.chunk_size);
        const auto data = dict.data();
        parallel_for(parts.size(), [&](std::size_t t) {
            const auto [start, width] = parts[t];
            ColumnBlock block{start, width, dict.rows(), data.subspan(start * dict.rows(), width * dict.rows())};
            screen_block(block);
        });
        if (options.stats) {
            options.stats->peak_buffer_bytes = 0;
            options.stats->chunks = parts.size();
        }
    }
    return KeepMask::from_flags(std::move(keep));
}

Region dpp_region(std::span<const double> theta_prev, double lambda_k, double lambda_prev, double x_norm) {
    check_lambda_pair(lambda_k, lambda_prev);
    Region region;
    region.center.assign(theta_prev.begin(), theta_prev.end());
    region.radius = x_norm * (1.0 / lambda_k - 1.0 / lambda_prev);
    if (!(region.radius > kRegionTolerance)) throw InvalidArgument("DPP sphere radius vanishes");
    return region;
}

KeepMask strong_rule_screen_residual(const Dictionary& dict, std::span<const double> residual, double lambda_k,
                                     double lambda_prev, std::size_t chunk_size) {
    check_lambda_pair(lambda_k, lambda_prev);
    if (residual.size() != dict.rows()) throw InvalidArgument("residual has wrong dimension");
    const double threshold = 2.0 * lambda_k - lambda_prev;
    if (threshold <= 0.0) return KeepMask::all(dict.cols(), true);
    const auto corr = correlations(dict, residual, chunk_size);
    std::vector<std::uint8_t> keep(dict.cols());
    for (std::size_t i = 0; i < corr.size(); ++i) keep[i] = std::abs(corr[i]) < threshold ? 0 : 1;
    return KeepMask::from_flags(std::move(keep));
}

KeepMask strong_rule_screen(const Dictionary& dict, std::span<const double> x, double lambda_k, double lambda_prev,
                            std::span<const double> w_prev, std::size_t chunk_size) {
    if (x.size() != dict.rows() || w_prev.size() != dict.cols()) {
        throw InvalidArgument("strong_rule_screen: dimension mismatch");
    }
    const auto rho = residual(dict, x, w_prev);
    return strong_rule_screen_residual(dict, rho, lambda_k, lambda_prev, chunk_size);
}

} // namespace seqscreen
