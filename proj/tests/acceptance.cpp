// Acceptance suite: one check per release criterion, each printed as a
// pass/fail line with the measured values. Exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "support.hpp"

#include "mizo/cli.hpp"
#include "mizo/harness.hpp"

using namespace mizo;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, bool pass, const std::string& name, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------------------

void criterion_estimator_exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string why = "all identities at 1e-12";

    if (std::fabs(entropy(Histogram::from_counts({1, 1, 1, 1})) - 2.0) > 1e-12) {
        ok = false;
        why = "uniform entropy";
    }
    const std::vector<double> p = {0.4, 0.35, 0.25};
    std::vector<double> diag(9, 0.0);
    for (std::size_t i = 0; i < 3; ++i) diag[i * 3 + i] = p[i];
    if (std::fabs(mutual_information(JointTable::from_mass({3, 3}, diag)) -
                  entropy(Histogram::from_counts(p))) > 1e-12) {
        ok = false;
        why = "self information";
    }
    std::vector<double> indep;
    for (double a : {0.5, 0.25, 0.25})
        for (double b : {0.5, 0.5}) indep.push_back(a * b);
    if (std::fabs(mutual_information(JointTable::from_mass({3, 2}, indep))) > 1e-12) {
        ok = false;
        why = "independence";
    }
    // pairwise reduction of the multi-information on random tables
    CounterRng rng(99, 0);
    for (int rep = 0; rep < 25 && ok; ++rep) {
        std::vector<double> mass(12);
        double total = 0.0;
        for (double& m : mass) {
            m = rng.next_double();
            total += m;
        }
        for (double& m : mass) m /= total;
        const JointTable j = JointTable::from_mass({2, 3, 2}, mass);
        const double direct = mutual_information(j.marginal({0, 2})) +
                              mutual_information(j.marginal({1, 2})) -
                              mutual_information(JointTable::from_mass({6, 2}, j.mass));
        if (std::fabs(multi_information(j) - direct) > 1e-12) {
            ok = false;
            why = "pairwise reduction";
        }
    }
    const std::vector<double> witness = {
        0.024793305261664941, 0.17214543533323842, 0.34008363605988284, 0.03526826499110966,
        0.24216392290661751,  0.021057020745347713, 0.0015073194783634689, 0.16298109522377552};
    const double wmi = multi_information(JointTable::from_mass({2, 2, 2}, witness));
    if (!(wmi < 0.0)) {
        ok = false;
        why = "witness not negative";
    }
    const double secs = seconds_since(t0);
    if (secs >= 1.0) {
        ok = false;
        why = "too slow";
    }
    report(1, ok, "estimator exactness",
           fmt("%s, witness %.4f, %.2fs", why.c_str(), wmi, secs));
}

void criterion_zo_invariants() {
    const auto t0 = std::chrono::steady_clock::now();
    bool simplex_ok = true, mean_ok = true, regret_ok = true;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto [views, ys] = testsup::planted_task(seed, 60);
        MizoConfig mc;
        mc.seed = seed;
        mc.rounds = 50;
        const MizoRun run = run_mizo(views, ys, mc);
        double total = 0.0;
        for (double x : run.state.theta_mix) {
            if (x < 0.0) simplex_ok = false;
            total += x;
        }
        if (std::fabs(total - 1.0) > 1e-9) simplex_ok = false;
        double prev_mean = 0.0;
        for (std::size_t t = 0; t < run.mi_log.size(); ++t) {
            if (run.regret_log[t] + run.mi_log[t] != prev_mean) regret_ok = false;
            if (run.regret_log[t] != prev_mean - run.mi_log[t]) regret_ok = false;
            if (run.mean_log[t] < prev_mean) mean_ok = false;
            prev_mean = run.mean_log[t];
        }
    }
    // the simplex invariant per intermediate round, on a stepwise sample
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto [views, ys] = testsup::planted_task(seed, 60);
        MizoConfig mc;
        mc.seed = seed;
        mc.rounds = 50;
        MizoEngine engine(3, mc);
        for (std::size_t k = 0; k < views.size(); ++k) engine.observe(views[k], ys[k] != 0, true);
        for (std::size_t t = 0; t < mc.rounds; ++t) {
            engine.step();
            double total = std::accumulate(engine.state().theta_mix.begin(),
                                           engine.state().theta_mix.end(), 0.0);
            if (std::fabs(total - 1.0) > 1e-9) simplex_ok = false;
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = simplex_ok && mean_ok && regret_ok && secs < 30.0;
    report(2, ok, "zo and regret invariants over 100 seeded runs",
           fmt("simplex %d, mean nondecreasing %d, regret identity %d, %.1fs", simplex_ok,
               mean_ok, regret_ok, secs));
}

void criterion_separation_trend() {
    const auto scenes = make_diagnostic_set(24, 24, 1);
    RunConfig c;
    c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto diags = diag_separation(scenes, c);
    double gap = 0.0;
    for (const auto& d : diags) gap += d.trained.auc - d.fixed.auc;
    gap /= static_cast<double>(diags.size());
    report(3, gap >= 0.10, "score separation beats fixed weights by 0.10 auc",
           fmt("mean auc gap %.3f over %zu seeds", gap, diags.size()));
}

void criterion_feedback_monotonicity() {
    const double fractions[3] = {1.0, 0.5, 0.2};
    int ordered = 0;
    double no_ar_mean[3] = {0.0, 0.0, 0.0};
    const std::size_t instances = 10;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        double with_ar[3] = {0.0, 0.0, 0.0};
        for (std::size_t inst = 0; inst < instances; ++inst) {
            auto [views, ys] = testsup::planted_task(seed * 100 + inst, 250);
            for (int f = 0; f < 3; ++f) {
                MizoConfig mc;
                mc.seed = seed * 100 + inst;
                mc.rounds = 12;
                mc.corner_trials = false;  // gradual steps keep feedback quantity decisive
                mc.feedback_fraction = fractions[f];
                with_ar[f] += run_mizo(views, ys, mc).final_mi_mean / instances;
                mc.active_regret = true;
                MizoConfig nc = mc;
                nc.active_regret = false;
                no_ar_mean[f] += run_mizo(views, ys, nc).final_mi_mean / (10.0 * instances);
            }
        }
        if (with_ar[0] >= with_ar[1] && with_ar[1] >= with_ar[2]) ++ordered;
    }
    double worst_delta = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            worst_delta = std::max(worst_delta, std::fabs(no_ar_mean[i] - no_ar_mean[j]));
    const bool ok = ordered >= 8 && worst_delta < 0.02;
    report(4, ok, "feedback monotonicity with active regret, flat without",
           fmt("ordering %d/10, no-ar mean delta %.4f bits", ordered, worst_delta));
}

void criterion_controller_benefit() {
    const auto scenes = make_occlusion_set(12, 2);
    RunConfig ours;
    ours.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    ours.action_budget = 8;
    RunConfig base = ours;
    base.controller = ControllerKind::DefaultTour;
    const Report r_ours = run_benchmark(scenes, ours);
    const Report r_base = run_benchmark(scenes, base);
    const bool ok = r_ours.delta_on_r1 >= 10.0 && r_ours.mean > r_base.mean;
    report(5, ok, "correction round beats measurement and the default tour",
           fmt("delta on r1 %.1f points, ours %.1f vs default %.1f", r_ours.delta_on_r1,
               r_ours.mean, r_base.mean));
}

void criterion_short_budget() {
    const auto scenes = make_feature_id_set(12, 3);
    RunConfig ours;
    ours.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    ours.action_budget = 5;
    RunConfig base = ours;
    base.controller = ControllerKind::DefaultTour;
    const Report r_ours = run_benchmark(scenes, ours);
    const Report r_base = run_benchmark(scenes, base);
    int positive = 0;
    for (std::size_t s = 0; s < r_ours.per_seed.size(); ++s)
        positive += r_ours.per_seed[s].r2_metric > r_base.per_seed[s].r2_metric ? 1 : 0;
    report(6, positive >= 8, "short-budget prioritisation",
           fmt("positive gap in %d/10 seeds, ours %.1f vs default %.1f", positive, r_ours.mean,
               r_base.mean));
}

void criterion_strong_product() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (std::size_t m = 3; m <= 8 && ok; ++m) {
        for (std::size_t n = 1; n <= 5 && ok; ++n) {
            const InteractionMatrix g = build_interaction_matrix(m, n);
            for (std::size_t xy1 = 0; xy1 < m && ok; ++xy1)
                for (std::size_t z1 = 0; z1 < n && ok; ++z1)
                    for (std::size_t xy2 = 0; xy2 < m && ok; ++xy2)
                        for (std::size_t z2 = 0; z2 < n && ok; ++z2)
                            ok = g.adjacent(g.index(xy1, z1), g.index(xy2, z2)) ==
                                 testsup::strong_product_adjacent(m, xy1, z1, xy2, z2);
        }
    }
    const InteractionMatrix def = build_interaction_matrix(6, 4);
    ok = ok && def.nodes() == 24 && def.edge_count() == 132;
    const double secs = seconds_since(t0);
    ok = ok && secs < 1.0;
    report(7, ok, "strong-product oracle equivalence",
           fmt("c6xk4 %zu nodes %zu edges, %.2fs", def.nodes(), def.edge_count(), secs));
}

void criterion_pcd_ordering() {
    const auto scenes = make_diagnostic_set(24, 24, 1);
    RunConfig c;
    c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto diags = diag_pcd(scenes, c);
    int ordered = 0;
    bool nonneg = true;
    for (const auto& d : diags) {
        ordered += d.pcd_trained < d.pcd_fixed ? 1 : 0;
        nonneg = nonneg && d.pcd_trained >= 0.0 && d.pcd_fixed >= 0.0;
    }
    report(8, ordered >= 8 && nonneg, "posterior-concentration dispersion ordering",
           fmt("trained < fixed in %d/%zu seeds, nonnegative %d", ordered, diags.size(), nonneg));
}

void criterion_determinism() {
    const fs::path dir = fs::temp_directory_path() / "mizo_acceptance";
    fs::remove_all(dir);
    const std::string scenes = (dir / "scenes").string();
    const std::string r1 = (dir / "a.json").string();
    const std::string r2 = (dir / "b.json").string();
    bool ok = cli_main({"gen-scenes", "--set", "occlusion", "--count", "8", "--seed", "2",
                        "--out", scenes}) == 0;
    ok = ok && cli_main({"bench", "--dataset", scenes, "--metric", "gh-led-ar", "--budget", "8",
                         "--seeds", "1,2", "--out", r1}) == 0;
    ok = ok && cli_main({"bench", "--dataset", scenes, "--metric", "gh-led-ar", "--budget", "8",
                         "--seeds", "1,2", "--out", r2}) == 0;
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const bool same = ok && !slurp(r1).empty() && slurp(r1) == slurp(r2);
    fs::remove_all(dir);
    report(9, same, "benchmark reports are byte identical", same ? "identical bytes" : "mismatch");
}

void criterion_interval_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        CounterRng rng(seed, 9);
        std::vector<double> samples;
        const int kind = static_cast<int>(seed % 3);
        for (int i = 0; i < 200; ++i) {
            const double x = kind == 0   ? rng.next_double()
                             : kind == 1 ? rng.next_gaussian()
                                         : std::exp(rng.next_gaussian());
            samples.push_back(x);
        }
        const CutPoints cuts = estimate_intervals(samples, 4, 2048);
        const double got = entropy(discretize(samples, cuts));
        worst = std::max(worst, testsup::best_partition_entropy(samples, 4) - got);
    }
    const double secs = seconds_since(t0);
    report(10, worst <= 0.02 && secs < 10.0, "interval estimation vs exhaustive optimum",
           fmt("worst gap %.4f bits over 50 datasets, %.1fs", worst, secs));
}

void criterion_timing_shape() {
    const auto scenes = make_occlusion_set(8, 4);
    std::vector<double> xs, ys;
    for (std::size_t budget = 3; budget <= 8; ++budget) {
        RunConfig c;
        c.seeds = {1};
        c.action_budget = budget;
        const Report r = run_benchmark(scenes, c);
        xs.push_back(static_cast<double>(budget));
        ys.push_back(r.simulated_oracle_ms);
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double r2 = sxy * sxy / (sxx * syy);
    report(11, r2 > 0.99, "wall-clock grows linearly with the action count",
           fmt("r^2 %.5f over budgets 3..8", r2));
}

}  // namespace

int main() {
    criterion_estimator_exactness();
    criterion_zo_invariants();
    criterion_separation_trend();
    criterion_feedback_monotonicity();
    criterion_controller_benefit();
    criterion_short_budget();
    criterion_strong_product();
    criterion_pcd_ordering();
    criterion_determinism();
    criterion_interval_oracle();
    criterion_timing_shape();
    if (g_failures > 0) {
        std::printf("%d criteria failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
