#pragma once

#include <cstddef>
#include <vector>

namespace mizo {

// Normalized discrete distribution over bins. The universal carrier for
// entropy sources: colour histograms, edge-magnitude histograms, mixture
// distributions and discretized score streams all use this type.
struct Histogram {
    std::vector<double> bins;    // nonnegative, sums to 1 within 1e-9
    std::vector<double> edges;   // optional interior cut points, strictly increasing

    std::size_t size() const { return bins.size(); }

    // Normalizes raw counts. Throws if counts are empty, negative or all zero.
    static Histogram from_counts(const std::vector<double>& counts,
                                 std::vector<double> edges = {});

    // Enforces the type invariants; throws std::invalid_argument on violation.
    void validate() const;

    // Mass-preserving resample onto `target_bins` equal-width bins, treating
    // the current bins as a piecewise-constant density on [0, 1].
    Histogram resample(std::size_t target_bins) const;
};

}  // namespace mizo
