#include "mizo/info.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mizo {

double entropy_of(const std::vector<double>& mass) {
    double h = 0.0;
    for (double p : mass) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

double entropy(const Histogram& h) {
    h.validate();
    return entropy_of(h.bins);
}

double entropy(const JointTable& j) { return entropy_of(j.mass); }

double mutual_information(const JointTable& j) {
    if (j.dims.size() != 2) throw std::invalid_argument("mutual information needs a 2-D joint");
    const double hx = entropy(j.marginal({0}));
    const double hy = entropy(j.marginal({1}));
    const double hxy = entropy_of(j.mass);
    return hx + hy - hxy;
}

double multi_information(const JointTable& j) {
    if (j.dims.size() < 3) throw std::invalid_argument("multi-information needs n >= 2 inputs");
    const std::size_t n = j.dims.size() - 1;
    const std::size_t y_axis = n;
    const double hy = entropy(j.marginal({y_axis}));

    double total = 0.0;
    for (std::size_t subset = 1; subset < (1u << n); ++subset) {
        std::vector<std::size_t> keep;
        for (std::size_t a = 0; a < n; ++a) {
            if (subset & (1u << a)) keep.push_back(a);
        }
        const int k = static_cast<int>(keep.size());
        const double h_x = entropy(j.marginal(keep));
        keep.push_back(y_axis);
        const double h_xy = entropy(j.marginal(keep));
        const double mi_subset = h_x + hy - h_xy;
        total += (k % 2 == 1 ? 1.0 : -1.0) * mi_subset;
    }
    return total;
}

double halton(std::uint64_t index, std::uint64_t base) {
    if (index < 1) throw std::invalid_argument("halton index must be positive");
    if (base < 2) throw std::invalid_argument("halton base must be >= 2");
    double value = 0.0;
    double f = 1.0 / static_cast<double>(base);
    while (index > 0) {
        value += f * static_cast<double>(index % base);
        index /= base;
        f /= static_cast<double>(base);
    }
    return value;
}

void CutPoints::validate() const {
    if (target_bin_count < 2) throw std::invalid_argument("degenerate binning");
    if (points.size() != target_bin_count - 1)
        throw std::invalid_argument("cut count must be bins - 1");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i - 1] < points[i]))
            throw std::invalid_argument("cuts not strictly increasing");
    }
}

namespace {

const std::size_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};

// Interpolated empirical quantile over sorted samples.
double quantile(const std::vector<double>& sorted, double u) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double t = u * static_cast<double>(n - 1);
    std::size_t j = static_cast<std::size_t>(t);
    if (j >= n - 1) j = n - 2;
    const double frac = t - static_cast<double>(j);
    return sorted[j] + frac * (sorted[j + 1] - sorted[j]);
}

double cut_entropy(const std::vector<double>& sorted, const std::vector<double>& cuts) {
    // counts via binary search on the sorted samples; [left, right) with the
    // last interval closed, sample == cut goes right
    const std::size_t bins = cuts.size() + 1;
    std::vector<double> counts(bins, 0.0);
    std::size_t prev = 0;
    for (std::size_t c = 0; c < cuts.size(); ++c) {
        const auto it = std::lower_bound(sorted.begin(), sorted.end(), cuts[c]);
        const std::size_t pos = static_cast<std::size_t>(it - sorted.begin());
        counts[c] = static_cast<double>(pos - prev);
        prev = pos;
    }
    counts[bins - 1] = static_cast<double>(sorted.size() - prev);
    const double total = static_cast<double>(sorted.size());
    double h = 0.0;
    for (double cnt : counts) {
        if (cnt > 0.0) {
            const double p = cnt / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

}  // namespace

CutPoints estimate_intervals(const std::vector<double>& samples,
                             std::size_t bin_count,
                             std::size_t proposal_count) {
    if (bin_count < 2) throw std::invalid_argument("degenerate binning");
    if (proposal_count < 1) throw std::invalid_argument("need at least one proposal");
    std::set<double> distinct(samples.begin(), samples.end());
    if (distinct.size() < bin_count) throw std::invalid_argument("insufficient support");
    if (bin_count - 1 > sizeof(kPrimes) / sizeof(kPrimes[0]))
        throw std::invalid_argument("too many bins");

    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());

    const std::size_t n_cuts = bin_count - 1;
    std::vector<std::vector<double>> winners;
    double best = -1.0;
    std::vector<double> cuts(n_cuts);
    for (std::size_t j = 1; j <= proposal_count; ++j) {
        for (std::size_t c = 0; c < n_cuts; ++c)
            cuts[c] = quantile(sorted, halton(j, kPrimes[c]));
        std::sort(cuts.begin(), cuts.end());
        const double h = std::round(cut_entropy(sorted, cuts) * 1e9) / 1e9;
        if (h > best) {
            best = h;
            winners.clear();
            winners.push_back(cuts);
        } else if (h == best) {
            winners.push_back(cuts);
        }
    }

    CutPoints result;
    result.target_bin_count = bin_count;
    result.points.assign(n_cuts, 0.0);
    for (const auto& w : winners) {
        for (std::size_t c = 0; c < n_cuts; ++c) result.points[c] += w[c];
    }
    for (double& p : result.points) p /= static_cast<double>(winners.size());
    result.validate();
    return result;
}

std::size_t bin_of(double sample, const CutPoints& cuts) {
    std::size_t b = 0;
    for (double c : cuts.points) {
        if (sample >= c) ++b;
        else break;
    }
    return b;
}

Histogram discretize(const std::vector<double>& samples, const CutPoints& cuts) {
    cuts.validate();
    if (samples.empty()) throw std::invalid_argument("empty input");
    std::vector<double> counts(cuts.target_bin_count, 0.0);
    for (double s : samples) counts[bin_of(s, cuts)] += 1.0;
    return Histogram::from_counts(counts, cuts.points);
}

}  // namespace mizo
