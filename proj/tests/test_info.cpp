#include <cmath>
#include <set>

#include "doctest.h"
#include "support.hpp"

#include "mizo/info.hpp"
#include "mizo/rng.hpp"

using namespace mizo;

namespace {

JointTable random_joint(CounterRng& rng, std::vector<std::size_t> dims) {
    std::size_t cells = 1;
    for (std::size_t d : dims) cells *= d;
    std::vector<double> mass(cells);
    double total = 0.0;
    for (double& m : mass) {
        m = rng.next_double();
        total += m;
    }
    for (double& m : mass) m /= total;
    return JointTable::from_mass(std::move(dims), std::move(mass));
}

}  // namespace

TEST_CASE("entropy closed forms") {
    CHECK(entropy(Histogram::from_counts({1, 1, 1, 1})) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(entropy(Histogram::from_counts({5, 0, 0})) == 0.0);
    CHECK(entropy(Histogram::from_counts({2, 1, 1})) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("entropy stays within the bin-count bound") {
    CounterRng rng(3, 0);
    for (int i = 0; i < 50; ++i) {
        const std::size_t bins = 1 + rng.next_index(12);
        std::vector<double> counts(bins);
        for (double& c : counts) c = rng.next_double() + 1e-6;
        const double h = entropy(Histogram::from_counts(counts));
        CHECK(h >= 0.0);
        CHECK(h <= std::log2(static_cast<double>(bins)) + 1e-12);
    }
}

TEST_CASE("mutual information of an independent product joint vanishes") {
    // dyadic marginals keep the arithmetic exact
    const std::vector<double> px = {0.5, 0.25, 0.25};
    const std::vector<double> py = {0.5, 0.5};
    std::vector<double> mass;
    for (double a : px)
        for (double b : py) mass.push_back(a * b);
    CHECK(std::fabs(mutual_information(JointTable::from_mass({3, 2}, mass))) <= 1e-12);
}

TEST_CASE("mutual information of a perfectly correlated fair pair is one bit") {
    const JointTable j = JointTable::from_mass({2, 2}, {0.5, 0.0, 0.0, 0.5});
    CHECK(mutual_information(j) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mutual information of a variable with itself equals its entropy") {
    const std::vector<double> p = {0.45, 0.3, 0.15, 0.1};
    std::vector<double> mass(16, 0.0);
    for (int i = 0; i < 4; ++i) mass[static_cast<std::size_t>(i) * 4 + static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
    const JointTable j = JointTable::from_mass({4, 4}, mass);
    CHECK(mutual_information(j) ==
          doctest::Approx(entropy(Histogram::from_counts(p))).epsilon(1e-12));
}

TEST_CASE("mutual information rejects higher-dimensional tables") {
    CounterRng rng(1, 0);
    CHECK_THROWS_AS((void)mutual_information(random_joint(rng, {2, 2, 2})),
                    std::invalid_argument);
}

TEST_CASE("mutual information is symmetric and nonnegative on random joints") {
    CounterRng rng(7, 0);
    for (int i = 0; i < 100; ++i) {
        const std::size_t nx = 2 + rng.next_index(4);
        const std::size_t ny = 2 + rng.next_index(4);
        const JointTable j = random_joint(rng, {nx, ny});
        const double mi = mutual_information(j);
        CHECK(mi >= -1e-12);
        // transpose
        std::vector<double> t(nx * ny);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) t[y * nx + x] = j.mass[x * ny + y];
        CHECK(std::fabs(mi - mutual_information(JointTable::from_mass({ny, nx}, t))) < 1e-12);
    }
}

TEST_CASE("multi-information with two inputs reduces to the pairwise formula") {
    CounterRng rng(11, 0);
    for (int i = 0; i < 40; ++i) {
        const JointTable j = random_joint(rng, {2, 3, 2});
        // direct route: I(x1;Y) + I(x2;Y) - I((x1,x2);Y)
        const double i1 = mutual_information(j.marginal({0, 2}));
        const double i2 = mutual_information(j.marginal({1, 2}));
        std::vector<double> flat(j.mass);  // (x1,x2) flattened is the same layout
        const double i12 = mutual_information(JointTable::from_mass({6, 2}, flat));
        CHECK(multi_information(j) == doctest::Approx(i1 + i2 - i12).epsilon(1e-12));
    }
}

TEST_CASE("multi-information of the xor joint matches exhaustive enumeration") {
    // X1, X2 independent fair bits, Y = X1 xor X2
    std::vector<double> mass(8, 0.0);
    for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2)
            mass[static_cast<std::size_t>(x1 * 4 + x2 * 2 + (x1 ^ x2))] = 0.25;
    const JointTable j = JointTable::from_mass({2, 2, 2}, mass);
    const double oracle = testsup::multi_information_oracle({2, 2, 2}, mass);
    CHECK(multi_information(j) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(multi_information(j) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("stored witness joint has negative multi-information") {
    // found by seeded random search over 2x2x2 joints and kept as a regression
    // witness; verified against the exhaustive-entropy oracle
    const std::vector<double> mass = {
        0.024793305261664941, 0.17214543533323842, 0.34008363605988284, 0.03526826499110966,
        0.24216392290661751,  0.021057020745347713, 0.0015073194783634689, 0.16298109522377552};
    const JointTable j = JointTable::from_mass({2, 2, 2}, mass);
    const double mi = multi_information(j);
    CHECK(mi < 0.0);
    CHECK(mi == doctest::Approx(testsup::multi_information_oracle({2, 2, 2}, mass)).epsilon(1e-12));
}

TEST_CASE("random search rediscovers negative multi-information tables") {
    CounterRng rng(2024, 0);
    double best = 1.0;
    for (int iter = 0; iter < 2000; ++iter) {
        std::vector<double> m(8);
        double s = 0.0;
        for (double& x : m) {
            x = rng.next_double();
            s += x;
        }
        for (double& x : m) x /= s;
        best = std::min(best, multi_information(JointTable::from_mass({2, 2, 2}, m)));
    }
    CHECK(best < 0.0);
}

TEST_CASE("multi-information needs at least two inputs") {
    CHECK_THROWS_AS((void)multi_information(JointTable::from_mass({2, 2}, {0.25, 0.25, 0.25, 0.25})),
                    std::invalid_argument);
}

TEST_CASE("halton radical inverse closed forms") {
    CHECK(halton(1, 2) == 0.5);
    CHECK(halton(2, 2) == 0.25);
    CHECK(halton(3, 2) == 0.75);
    CHECK(halton(1, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(halton(2, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)halton(0, 2), std::invalid_argument);
    CHECK_THROWS_AS((void)halton(1, 1), std::invalid_argument);
}

TEST_CASE("first sixteen base-2 halton values fill the unit interval") {
    std::vector<double> v;
    for (std::uint64_t i = 1; i <= 16; ++i) v.push_back(halton(i, 2));
    std::sort(v.begin(), v.end());
    CHECK(std::set<double>(v.begin(), v.end()).size() == 16);
    double prev = 0.0;
    double max_gap = 0.0;
    for (double x : v) {
        max_gap = std::max(max_gap, x - prev);
        prev = x;
    }
    max_gap = std::max(max_gap, 1.0 - prev);
    CHECK(max_gap <= 1.0 / 8.0 + 1e-15);
}

TEST_CASE("base-2 halton is injective over the first 2^20 indices") {
    std::vector<double> v;
    v.reserve(1u << 20);
    for (std::uint64_t i = 1; i <= (1u << 20); ++i) v.push_back(halton(i, 2));
    std::sort(v.begin(), v.end());
    CHECK(std::adjacent_find(v.begin(), v.end()) == v.end());
}

TEST_CASE("interval estimation splits bimodal data inside the gap") {
    std::vector<double> samples;
    for (int i = 0; i < 100; ++i) samples.push_back(0.1);
    for (int i = 0; i < 100; ++i) samples.push_back(0.9);
    const CutPoints cuts = estimate_intervals(samples, 2, 32);
    REQUIRE(cuts.points.size() == 1);
    CHECK(cuts.points[0] > 0.1);
    CHECK(cuts.points[0] < 0.9);
    CHECK(entropy(discretize(samples, cuts)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interval estimation halves a uniform grid within one spacing") {
    std::vector<double> samples;
    for (int i = 0; i < 200; ++i) samples.push_back(static_cast<double>(i));
    const CutPoints cuts = estimate_intervals(samples, 2, 32);
    const Histogram h = discretize(samples, cuts);
    CHECK(std::fabs(h.bins[0] - 0.5) <= 1.0 / 200.0 + 1e-12);
}

TEST_CASE("interval estimation reaches the exhaustive-partition optimum") {
    CounterRng rng(5, 0);
    std::vector<double> samples;
    for (int i = 0; i < 200; ++i) samples.push_back(rng.next_gaussian());
    const CutPoints cuts = estimate_intervals(samples, 4, 2048);
    const double got = entropy(discretize(samples, cuts));
    const double best = testsup::best_partition_entropy(samples, 4);
    CHECK(best - got <= 0.02);
}

TEST_CASE("interval estimation demands enough distinct support") {
    CHECK_THROWS_WITH_AS((void)estimate_intervals({1.0, 1.0, 1.0, 2.0}, 3, 8),
                         "insufficient support", std::invalid_argument);
}

TEST_CASE("estimated cuts stay inside the sample range") {
    CounterRng rng(6, 0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> samples;
        for (int i = 0; i < 60; ++i) samples.push_back(rng.next_gaussian() * 3.0 + 1.0);
        const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
        const CutPoints cuts = estimate_intervals(samples, 3, 64);
        for (double c : cuts.points) {
            CHECK(c >= *mn);
            CHECK(c <= *mx);
        }
    }
}

TEST_CASE("discretize boundary conventions") {
    CutPoints cuts;
    cuts.target_bin_count = 3;
    cuts.points = {1.0, 2.0};
    SUBCASE("all samples below the first cut concentrate in bin zero") {
        const Histogram h = discretize({0.1, 0.2, 0.5}, cuts);
        CHECK(h.bins[0] == 1.0);
    }
    SUBCASE("a sample exactly on a cut lands in the right interval") {
        const Histogram h = discretize({1.0}, cuts);
        CHECK(h.bins[1] == 1.0);
    }
}

TEST_CASE("estimate-discretize round trip on uniform data stays near uniform") {
    CounterRng rng(8, 0);
    std::vector<double> samples;
    for (int i = 0; i < 300; ++i) samples.push_back(rng.next_double());
    for (std::size_t bins : {2ul, 4ul}) {
        const CutPoints cuts = estimate_intervals(samples, bins, 512);
        CHECK(entropy(discretize(samples, cuts)) >=
              std::log2(static_cast<double>(bins)) - 0.1);
    }
}
