// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

// Dual bounding regions for safe screening. A region is a sphere S(q, r),
// optionally intersected with one half-space {theta : n^T theta <= c}. A
// feature a is rejected when max over the region of a^T theta and of
// -a^T theta are both strictly below 1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seqscreen/dictionary.hpp"

namespace seqscreen {

struct Halfspace {
    std::vector<double> normal; // unit norm
    double offset = 0.0;
};

struct Region {
    std::vector<double> center;
    double radius = 0.0;
    std::optional<Halfspace> halfspace;
    bool degenerate = false; // half-space dropped because its normal was undefined

    /// Throws InvalidArgument / NumericalError when the invariants fail.
    void validate() const;
};

struct KeepMask {
    std::vector<std::uint8_t> keep;
    std::size_t kept_count = 0;

    static KeepMask all(std::size_t p, bool value);
    static KeepMask from_flags(std::vector<std::uint8_t> flags);
    std::vector<std::size_t> kept_indices() const;
    bool operator==(const KeepMask&) const = default;
};

/// Radius and degeneracy threshold.
inline constexpr double kRegionTolerance = 1e-12;

/// Region for the first step: sphere centered at x/lambda_1 through
/// x/lambda_max, cut by sign * a_*^T theta <= 1.
Region build_initial_region(std::span<const double> x, double lambda_1, const LambdaMaxResult& lmr,
                            std::span<const double> a_star);

/// Dome for step k from the previous dual point: center x/lambda_k, radius
/// ||x/lambda_k - theta_prev||, half-space through theta_prev with normal along
/// x/lambda_prev - theta_prev. Throws NumericalError if the center lands inside
/// the half-space; falls back to the sphere alone (degenerate = true) when the
/// normal is undefined.
Region build_step_region(std::span<const double> x, double lambda_k, double lambda_prev,
                         std::span<const double> theta_prev);

/// Diameter of a sphere or sphere/half-space intersection. Throws
/// NumericalError for an empty-interior region.
double region_diameter(const Region& region);

/// Closed-form dome diameter 2 (1/lambda_k - 1/lambda_prev) sqrt(x^T (I - n n^T) x).
double step_diameter_from_normal(std::span<const double> x, std::span<const double> n_prev, double lambda_k,
                      double lambda_prev);

/// Region enlarged by `radius_slack` and with the half-space offset moved out
/// by `offset_slack`; used when the region was built from an inexact dual point.
Region widen_region(const Region& region, double radius_slack, double offset_slack);

/// Offset slack that keeps a step dome safe when its dual point theta_hat is
/// within `dual_error` of the exact one. `normal_length` is
/// ||x/lambda_prev - theta_hat|| (before normalization).
double step_offset_slack(double dual_error, double normal_length, double radius);

/// Relative rounding allowance used by widen_for_dual_error.
inline constexpr double kRoundingSlack = 1e-12;

/// The region actually used for screening. `nominal` was built at lambda_k
/// from `theta_prev` (build_step_region, dpp_region, or build_initial_region
/// with theta_prev = x/lambda_max and dual_error = 0). The result also
/// contains every point the same construction could reach from any dual point
/// within `dual_error` of theta_prev, plus kRoundingSlack * ||x|| / lambda_k.
Region widen_for_dual_error(const Region& nominal, std::span<const double> x, double lambda_k, double lambda_prev,
                            std::span<const double> theta_prev, double dual_error);

/// max of a^T theta over the region.
double region_max(const Region& region, std::span<const double> a);

/// Region with the per-region scalars precomputed. mu(a) needs a only
/// through a^T q, n^T a and ||a||.
class RegionEvaluator {
  public:
    explicit RegionEvaluator(const Region& region);

    double max(std::span<const double> a) const;
    double max(double a_dot_q, double n_dot_a, double a_norm) const;
    /// keep = mu(a) >= 1 or mu(-a) >= 1
    bool keeps(double a_dot_q, double n_dot_a, double a_norm) const;

    const Region& region() const { return *region_; }
    bool has_halfspace() const { return has_halfspace_; }

  private:
    const Region* region_;
    bool has_halfspace_ = false;
    double cap_ = 1.0;      // (c - n^T q) / r, clamped to >= -1
    double cap_sine_ = 0.0; // sqrt(1 - cap^2)
};

struct ScreenStats {
    std::size_t peak_buffer_bytes = 0;
    std::size_t chunks = 0;
};

struct ScreenOptions {
    std::size_t chunk_size = 256;
    ScreenStats* stats = nullptr;
};

/// keep[i] = mu(a_i) >= 1 or mu(-a_i) >= 1, one column block at a time.
KeepMask screen(const Dictionary& dict, const Region& region, const ScreenOptions& options = {});

/// Sphere around theta_prev with radius x_norm * (1/lambda_k - 1/lambda_prev).
Region dpp_region(std::span<const double> theta_prev, double lambda_k, double lambda_prev, double x_norm = 1.0);

/// Sequential Strong rule: discard i iff |a_i^T (x - D w_prev)| < 2 lambda_k - lambda_prev.
/// Not safe.
KeepMask strong_rule_screen(const Dictionary& dict, std::span<const double> x, double lambda_k,
                            double lambda_prev, std::span<const double> w_prev, std::size_t chunk_size = 256);

/// Strong rule from a precomputed residual x - D w_prev.
KeepMask strong_rule_screen_residual(const Dictionary& dict, std::span<const double> residual, double lambda_k,
                                     double lambda_prev, std::size_t chunk_size = 256);

} // namespace seqscreen
