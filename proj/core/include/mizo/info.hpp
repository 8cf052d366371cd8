#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mizo/histogram.hpp"
#include "mizo/joint_table.hpp"

namespace mizo {

// Shannon entropy in bits, 0 log 0 := 0.
double entropy(const Histogram& h);
double entropy_of(const std::vector<double>& mass);
double entropy(const JointTable& j);

// H(x) + H(y) - H(x, y) from the plug-in marginals of a 2-D joint.
double mutual_information(const JointTable& j);

// Multi-information of (x_1..x_n) against the last axis y, n >= 2:
// the alternating inclusion-exclusion sum over nonempty subsets I of the
// input variables of I(X_I ; Y). Signed; may be negative when the inputs
// carry redundant information about the target.
double multi_information(const JointTable& j);

// Radical-inverse (van der Corput) value of `index` in the given base.
double halton(std::uint64_t index, std::uint64_t base);

// Strictly increasing interior cut points inside the data range.
struct CutPoints {
    std::vector<double> points;         // size = target_bin_count - 1
    std::size_t target_bin_count = 0;

    void validate() const;
};

// Entropy-maximizing cut selection. Generates `proposal_count` candidate
// cut sets by mapping Halton points (one prime base per cut dimension)
// through the interpolated empirical quantile function, evaluates the
// plug-in entropy of each induced histogram, and returns the elementwise
// mean of the proposals tied at maximum entropy (entropy rounded to 1e-9
// to define the tie set).
CutPoints estimate_intervals(const std::vector<double>& samples,
                             std::size_t bin_count,
                             std::size_t proposal_count);

// Counts per interval, normalized. Intervals are [left, right) except the
// last, which is closed above; a sample equal to a cut lands in the right
// interval.
Histogram discretize(const std::vector<double>& samples, const CutPoints& cuts);

std::size_t bin_of(double sample, const CutPoints& cuts);

}  // namespace mizo
