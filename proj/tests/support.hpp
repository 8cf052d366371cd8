#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here is deliberately written against first principles (direct formulas,
// brute force, dynamic programming) and must stay independent of the library
// code paths it checks.

#include <algorithm>
#include <cmath>
#include <vector>

#include "mizo/histogram.hpp"
#include "mizo/info.hpp"
#include "mizo/mizo.hpp"
#include "mizo/rng.hpp"

namespace testsup {

// Planted mixture task: only the middle source of three predicts the label,
// through its concentration (and therefore its entropy); the outer sources are
// per-sample noise. Used by the optimizer invariants and feedback studies.
inline std::pair<std::vector<mizo::ViewSources>, std::vector<std::uint8_t>> planted_task(
    std::uint64_t seed, std::size_t view_count, double concentrated = 0.88,
    double label_noise = 0.1) {
    mizo::CounterRng rng(seed, 42);
    std::vector<mizo::ViewSources> views;
    std::vector<std::uint8_t> labels;
    for (std::size_t k = 0; k < view_count; ++k) {
        const bool y = rng.next_double() < 0.5;
        bool effective = y;
        if (rng.next_double() < label_noise) effective = !effective;
        const double p = effective ? 0.5 + 0.03 * rng.next_double()
                                   : concentrated + 0.05 * rng.next_double();
        mizo::ViewSources v;
        v.lambda = 1.0;
        const double a1 = 0.47 * rng.next_double();
        const double a3 = 0.47 * rng.next_double();
        v.components.push_back(
            mizo::Histogram::from_counts(std::vector<double>{0.5 + a1, 0.5 - a1}));
        v.components.push_back(mizo::Histogram::from_counts(std::vector<double>{p, 1.0 - p}));
        v.components.push_back(
            mizo::Histogram::from_counts(std::vector<double>{0.5 + a3, 0.5 - a3}));
        views.push_back(std::move(v));
        labels.push_back(y ? 1 : 0);
    }
    return {views, labels};
}

// Direct inclusion-exclusion evaluation of the multi-information of a dense
// (x_1..x_n, y) table from raw subset entropies, written without the library's
// marginalization machinery.
inline double multi_information_oracle(const std::vector<std::size_t>& dims,
                                       const std::vector<double>& mass) {
    const std::size_t n_axes = dims.size();
    const std::size_t n_inputs = n_axes - 1;
    auto subset_entropy = [&](std::size_t axis_mask) {
        // accumulate cell mass into buckets keyed by the selected axes
        std::vector<std::size_t> stride(n_axes, 1);
        for (std::size_t a = n_axes; a-- > 1;) stride[a - 1] = stride[a] * dims[a];
        std::size_t buckets = 1;
        for (std::size_t a = 0; a < n_axes; ++a)
            if (axis_mask & (1u << a)) buckets *= dims[a];
        std::vector<double> acc(buckets, 0.0);
        for (std::size_t cell = 0; cell < mass.size(); ++cell) {
            std::size_t key = 0;
            for (std::size_t a = 0; a < n_axes; ++a) {
                if (!(axis_mask & (1u << a))) continue;
                key = key * dims[a] + (cell / stride[a]) % dims[a];
            }
            acc[key] += mass[cell];
        }
        double h = 0.0;
        for (double p : acc)
            if (p > 0.0) h -= p * std::log2(p);
        return h;
    };
    const double hy = subset_entropy(1u << n_inputs);
    double total = 0.0;
    for (std::size_t subset = 1; subset < (1u << n_inputs); ++subset) {
        int k = 0;
        for (std::size_t a = 0; a < n_inputs; ++a)
            if (subset & (1u << a)) ++k;
        const double hx = subset_entropy(subset);
        const double hxy = subset_entropy(subset | (1u << n_inputs));
        total += (k % 2 == 1 ? 1.0 : -1.0) * (hx + hy - hxy);
    }
    return total;
}

// Exact optimum of the entropy partition problem: best achievable plug-in
// entropy over any placement of bin_count-1 cuts, by dynamic programming over
// the sorted samples.
inline double best_partition_entropy(std::vector<double> samples, std::size_t bins) {
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    const double total = static_cast<double>(n);
    std::vector<std::vector<double>> dp(bins + 1, std::vector<double>(n + 1, -1e18));
    dp[0][0] = 0.0;
    for (std::size_t b = 1; b <= bins; ++b) {
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = b - 1; j < i; ++j) {
                if (dp[b - 1][j] < -1e17) continue;
                if (j > 0 && samples[j] == samples[j - 1]) continue;  // cut needs distinct values
                const double p = static_cast<double>(i - j) / total;
                const double h = dp[b - 1][j] - p * std::log2(p);
                if (h > dp[b][i]) dp[b][i] = h;
            }
        }
    }
    return dp[bins][n];
}

// Strong-product adjacency by the textbook condition, one pair at a time.
inline bool strong_product_adjacent(std::size_t n_xy, std::size_t xy1, std::size_t z1,
                                    std::size_t xy2, std::size_t z2) {
    if (xy1 == xy2 && z1 == z2) return false;
    const std::size_t d = xy1 > xy2 ? xy1 - xy2 : xy2 - xy1;
    const bool xy_adj = d == 1 || d == n_xy - 1;
    const bool xy_same = xy1 == xy2;
    const bool z_same = z1 == z2;
    return (xy_same && !z_same) || (xy_adj && z_same) || (xy_adj && !z_same);
}

// O(n^2) pairwise AUC with half weight for ties.
inline double pairwise_auc(const std::vector<std::pair<double, bool>>& scores) {
    double wins = 0.0, pairs = 0.0;
    for (const auto& [sp, cp] : scores) {
        if (!cp) continue;
        for (const auto& [sn, cn] : scores) {
            if (cn) continue;
            pairs += 1.0;
            if (sp > sn) wins += 1.0;
            else if (sp == sn) wins += 0.5;
        }
    }
    return wins / pairs;
}

// Reference sRGB -> CIELAB conversion, written independently of the library
// (same published constants, different code path).
inline std::array<double, 3> lab_reference(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    auto lin = [](double c) { return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4); };
    const double r = lin(r8 / 255.0), g = lin(g8 / 255.0), b = lin(b8 / 255.0);
    const double xyz[3] = {(0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047,
                           0.2126729 * r + 0.7151522 * g + 0.0721750 * b,
                           (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883};
    double f[3];
    for (int i = 0; i < 3; ++i) {
        f[i] = xyz[i] > 216.0 / 24389.0 ? std::cbrt(xyz[i])
                                        : (24389.0 / 27.0 * xyz[i] + 16.0) / 116.0;
    }
    return {116.0 * f[1] - 16.0, 500.0 * (f[0] - f[1]), 200.0 * (f[1] - f[2])};
}

}  // namespace testsup
