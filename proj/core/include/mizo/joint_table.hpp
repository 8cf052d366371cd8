#pragma once

#include <cstddef>
#include <vector>

#include "mizo/histogram.hpp"

namespace mizo {

// Dense joint probability table over a product of discrete variables.
// Mass is row-major with the last axis fastest.
struct JointTable {
    std::vector<std::size_t> dims;
    std::vector<double> mass;

    std::size_t cell_count() const;

    static JointTable from_mass(std::vector<std::size_t> dims, std::vector<double> mass);
    static JointTable from_counts(std::vector<std::size_t> dims, std::vector<double> counts);

    // 2-D joint from paired (x bin, y bin) observations.
    static JointTable from_pairs(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                 std::size_t x_bins, std::size_t y_bins);

    void validate() const;

    // Marginal over the kept axes (in their original order).
    JointTable marginal(const std::vector<std::size_t>& keep) const;

    Histogram axis_histogram(std::size_t axis) const;
};

}  // namespace mizo
