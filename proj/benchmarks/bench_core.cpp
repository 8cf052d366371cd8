#include <benchmark/benchmark.h>

#include "mizo/harness.hpp"
#include "mizo/rng.hpp"

using namespace mizo;

namespace {

Histogram random_hist(CounterRng& rng, std::size_t bins) {
    std::vector<double> counts(bins);
    for (double& c : counts) c = rng.next_double() + 1e-9;
    return Histogram::from_counts(counts);
}

void BM_entropy(benchmark::State& state) {
    CounterRng rng(1, 0);
    const Histogram h = random_hist(rng, 64);
    for (auto _ : state) benchmark::DoNotOptimize(entropy(h));
}
BENCHMARK(BM_entropy);

void BM_mutual_information(benchmark::State& state) {
    CounterRng rng(2, 0);
    std::vector<double> mass(32 * 2);
    double total = 0.0;
    for (double& m : mass) {
        m = rng.next_double();
        total += m;
    }
    for (double& m : mass) m /= total;
    const JointTable j = JointTable::from_mass({32, 2}, mass);
    for (auto _ : state) benchmark::DoNotOptimize(mutual_information(j));
}
BENCHMARK(BM_mutual_information);

void BM_multi_information(benchmark::State& state) {
    CounterRng rng(3, 0);
    std::vector<double> mass(2 * 3 * 4 * 2);
    double total = 0.0;
    for (double& m : mass) {
        m = rng.next_double();
        total += m;
    }
    for (double& m : mass) m /= total;
    const JointTable j = JointTable::from_mass({2, 3, 4, 2}, mass);
    for (auto _ : state) benchmark::DoNotOptimize(multi_information(j));
}
BENCHMARK(BM_multi_information);

void BM_estimate_intervals(benchmark::State& state) {
    CounterRng rng(4, 0);
    std::vector<double> samples;
    for (int i = 0; i < 200; ++i) samples.push_back(rng.next_gaussian());
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_intervals(samples, 4, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_estimate_intervals)->Arg(32)->Arg(512);

void BM_render_view(benchmark::State& state) {
    const Scene scene = generate_scene(make_diagnostic_set(1, 0, 7).front());
    const CameraState cam{Viewpoint::Front, 2};
    for (auto _ : state) benchmark::DoNotOptimize(render_view(scene, cam));
}
BENCHMARK(BM_render_view);

void BM_source_extraction(benchmark::State& state) {
    const Scene scene = generate_scene(make_diagnostic_set(1, 0, 7).front());
    const RasterView view = render_view(scene, {Viewpoint::Front, 2});
    for (auto _ : state)
        benchmark::DoNotOptimize(SourceSet::extract(view, scene.spec.description));
}
BENCHMARK(BM_source_extraction);

void BM_mizo_round(benchmark::State& state) {
    CounterRng rng(5, 0);
    MizoConfig mc;
    mc.seed = 5;
    MizoEngine engine(3, mc);
    for (int k = 0; k < 64; ++k) {
        ViewSources v;
        v.lambda = 1.0;
        for (int c = 0; c < 3; ++c) v.components.push_back(random_hist(rng, 32));
        engine.observe(v, rng.next_double() < 0.5, true);
    }
    for (auto _ : state) engine.step();
}
BENCHMARK(BM_mizo_round);

void BM_plan_actions(benchmark::State& state) {
    const InteractionMatrix m = build_interaction_matrix(6, 4);
    CounterRng rng(6, 0);
    std::vector<double> priorities(m.nodes());
    for (double& p : priorities) p = rng.next_double();
    const CameraState start{Viewpoint::Front, 3};
    for (auto _ : state) benchmark::DoNotOptimize(plan_actions(m, priorities, start, 8));
}
BENCHMARK(BM_plan_actions);

}  // namespace

BENCHMARK_MAIN();
