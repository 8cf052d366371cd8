#include "mizo/histogram.hpp"

#include <cmath>
#include <stdexcept>

namespace mizo {

Histogram Histogram::from_counts(const std::vector<double>& counts,
                                 std::vector<double> edges) {
    if (counts.empty()) throw std::invalid_argument("empty histogram");
    double total = 0.0;
    for (double c : counts) {
        if (c < 0.0) throw std::invalid_argument("negative count");
        total += c;
    }
    if (total <= 0.0) throw std::invalid_argument("zero total mass");
    Histogram h;
    h.bins.reserve(counts.size());
    for (double c : counts) h.bins.push_back(c / total);
    h.edges = std::move(edges);
    h.validate();
    return h;
}

void Histogram::validate() const {
    if (bins.empty()) throw std::invalid_argument("histogram needs at least one bin");
    double total = 0.0;
    for (double b : bins) {
        if (b < 0.0) throw std::invalid_argument("negative bin mass");
        total += b;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("histogram mass not normalized");
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i - 1] < edges[i]))
            throw std::invalid_argument("edges not strictly increasing");
    }
}

Histogram Histogram::resample(std::size_t target_bins) const {
    if (target_bins == 0) throw std::invalid_argument("degenerate binning");
    if (target_bins == bins.size()) return *this;
    const std::size_t n = bins.size();
    std::vector<double> out(target_bins, 0.0);
    // overlap of source bin [i/n, (i+1)/n) with target bin [j/t, (j+1)/t)
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        const double width = hi - lo;
        std::size_t j0 = static_cast<std::size_t>(lo * target_bins);
        if (j0 >= target_bins) j0 = target_bins - 1;
        for (std::size_t j = j0; j < target_bins; ++j) {
            const double tlo = static_cast<double>(j) / target_bins;
            if (tlo >= hi) break;
            const double thi = static_cast<double>(j + 1) / target_bins;
            const double overlap = std::min(hi, thi) - std::max(lo, tlo);
            if (overlap > 0.0) out[j] += bins[i] * (overlap / width);
        }
    }
    return Histogram::from_counts(out);
}

}  // namespace mizo
