#include "mizo/joint_table.hpp"

#include <cmath>
#include <stdexcept>

namespace mizo {

std::size_t JointTable::cell_count() const {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    return n;
}

JointTable JointTable::from_mass(std::vector<std::size_t> dims, std::vector<double> mass) {
    JointTable j;
    j.dims = std::move(dims);
    j.mass = std::move(mass);
    j.validate();
    return j;
}

JointTable JointTable::from_counts(std::vector<std::size_t> dims, std::vector<double> counts) {
    double total = 0.0;
    for (double c : counts) {
        if (c < 0.0) throw std::invalid_argument("negative count");
        total += c;
    }
    if (total <= 0.0) throw std::invalid_argument("zero total mass");
    for (double& c : counts) c /= total;
    return from_mass(std::move(dims), std::move(counts));
}

JointTable JointTable::from_pairs(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                  std::size_t x_bins, std::size_t y_bins) {
    std::vector<double> counts(x_bins * y_bins, 0.0);
    for (const auto& [x, y] : pairs) {
        if (x >= x_bins || y >= y_bins) throw std::invalid_argument("pair out of range");
        counts[x * y_bins + y] += 1.0;
    }
    return from_counts({x_bins, y_bins}, std::move(counts));
}

void JointTable::validate() const {
    if (dims.empty()) throw std::invalid_argument("joint table needs at least one axis");
    for (std::size_t d : dims) {
        if (d == 0) throw std::invalid_argument("zero-width axis");
    }
    if (mass.size() != cell_count()) throw std::invalid_argument("mass size mismatch");
    double total = 0.0;
    for (double m : mass) {
        if (m < 0.0) throw std::invalid_argument("negative mass");
        total += m;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("joint mass not normalized");
}

JointTable JointTable::marginal(const std::vector<std::size_t>& keep) const {
    if (keep.empty()) throw std::invalid_argument("empty marginal");
    for (std::size_t k : keep) {
        if (k >= dims.size()) throw std::invalid_argument("axis out of range");
    }
    std::vector<std::size_t> out_dims;
    out_dims.reserve(keep.size());
    for (std::size_t k : keep) out_dims.push_back(dims[k]);

    std::size_t out_cells = 1;
    for (std::size_t d : out_dims) out_cells *= d;
    std::vector<double> out(out_cells, 0.0);

    // strides in the source table
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t a = dims.size(); a-- > 1;) stride[a - 1] = stride[a] * dims[a];

    std::vector<std::size_t> idx(dims.size(), 0);
    for (std::size_t cell = 0; cell < mass.size(); ++cell) {
        std::size_t out_cell = 0;
        for (std::size_t k : keep) out_cell = out_cell * dims[k] + idx[k];
        out[out_cell] += mass[cell];
        for (std::size_t a = dims.size(); a-- > 0;) {
            if (++idx[a] < dims[a]) break;
            idx[a] = 0;
        }
    }
    JointTable j;
    j.dims = std::move(out_dims);
    j.mass = std::move(out);
    return j;
}

Histogram JointTable::axis_histogram(std::size_t axis) const {
    JointTable m = marginal({axis});
    Histogram h;
    h.bins = m.mass;
    return h;
}

}  // namespace mizo
