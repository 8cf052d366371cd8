#include "mizo/rng.hpp"

#include <cmath>

namespace mizo {

double CounterRng::next_gaussian() {
    // Box-Muller; u1 kept away from zero so the log is finite.
    double u1 = next_double();
    double u2 = next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace mizo
