#include <cmath>

#include "doctest.h"
#include "support.hpp"

#include "mizo/controller.hpp"

using namespace mizo;

namespace {

CameraState st(Viewpoint v, std::size_t z) { return CameraState{v, z}; }

}  // namespace

TEST_CASE("proxy labels threshold at the batch median with ties up") {
    SUBCASE("all scores equal label everything one") {
        std::vector<std::pair<CameraState, double>> scores;
        for (std::size_t v = 0; v < 4; ++v)
            scores.emplace_back(st(static_cast<Viewpoint>(v), 0), 0.7);
        const ProxyLabels p = generate_proxy_labels(scores);
        for (std::size_t v = 0; v < 4; ++v)
            CHECK(p.at(st(static_cast<Viewpoint>(v), 0)) == 1);
    }
    SUBCASE("a two-score batch splits around its midpoint") {
        const ProxyLabels p = generate_proxy_labels(
            {{st(Viewpoint::Front, 0), 0.1}, {st(Viewpoint::Right, 0), 0.9}});
        CHECK(p.at(st(Viewpoint::Front, 0)) == 0);
        CHECK(p.at(st(Viewpoint::Right, 0)) == 1);
    }
}

TEST_CASE("proxy labels recover planted correctness on most views") {
    CounterRng rng(4, 0);
    std::vector<std::pair<CameraState, double>> scores;
    std::vector<int> truth;
    for (std::size_t i = 0; i < 12; ++i) {
        const bool correct = i % 2 == 0;
        const CameraState s{static_cast<Viewpoint>(i % 6), i / 6};
        scores.emplace_back(s, (correct ? 1.0 : 0.0) + 0.2 * rng.next_gaussian());
        truth.push_back(correct ? 1 : 0);
    }
    const ProxyLabels p = generate_proxy_labels(scores);
    int agree = 0;
    for (std::size_t i = 0; i < 12; ++i)
        agree += p.at(scores[i].first) == truth[i] ? 1 : 0;
    CHECK(agree >= 9);
}

TEST_CASE("labels attach revealed truth first, proxy otherwise") {
    ProxyLabels proxy;
    proxy.label[st(Viewpoint::Front, 0).node_index()] = 0;
    const std::vector<std::pair<CameraState, int>> decisions = {{st(Viewpoint::Front, 0), 1},
                                                                {st(Viewpoint::Front, 0), 1}};
    const auto obs = attach_labels(decisions, proxy, {std::optional<int>(1), std::nullopt});
    CHECK(obs[0].label == 1);
    CHECK(obs[1].label == 0);
}

TEST_CASE("component model one scores per-viewpoint disagreement") {
    SUBCASE("always wrong viewpoint saturates at one") {
        std::vector<DecisionObservation> h;
        for (int i = 0; i < 4; ++i) h.push_back({st(Viewpoint::Left, 0), 0, 1});
        const ComponentFit f = fit_cm1(h);
        CHECK(f.outputs[static_cast<std::size_t>(Viewpoint::Left)] == 1.0);
        CHECK(f.residual_trace == 4.0);
    }
    SUBCASE("always right viewpoint scores zero") {
        std::vector<DecisionObservation> h;
        for (int i = 0; i < 4; ++i) h.push_back({st(Viewpoint::Back, 2), 1, 1});
        const ComponentFit f = fit_cm1(h);
        CHECK(f.outputs[static_cast<std::size_t>(Viewpoint::Back)] == 0.0);
    }
    SUBCASE("mixed history matches the hand-solved least squares") {
        // front: residuals 0,1 -> 1/2; right: 1,1,0 -> 2/3; back: 0 -> 0
        std::vector<DecisionObservation> h = {
            {st(Viewpoint::Front, 0), 1, 1}, {st(Viewpoint::Front, 1), 0, 1},
            {st(Viewpoint::Right, 0), 1, 0}, {st(Viewpoint::Right, 1), 0, 1},
            {st(Viewpoint::Right, 2), 0, 0}, {st(Viewpoint::Back, 0), 1, 1}};
        const ComponentFit f = fit_cm1(h);
        CHECK(f.outputs[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(f.outputs[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(f.outputs[2] == 0.0);
        CHECK(f.outputs[3] == kUnseenErrorPrior);
        CHECK(f.residual_trace == doctest::Approx(3.0).epsilon(1e-12));
    }
}

TEST_CASE("adding a demonstrated error never lowers the error probability") {
    CounterRng rng(6, 0);
    std::vector<DecisionObservation> h;
    for (int i = 0; i < 20; ++i) {
        const int label = static_cast<int>(rng.next_index(2));
        const int dec = rng.next_double() < 0.7 ? label : 1 - label;
        h.push_back({st(Viewpoint::Front, rng.next_index(4)), dec, label});
    }
    const double before = fit_cm1(h).outputs[0];
    h.push_back({st(Viewpoint::Front, 0), 0, 1});  // one more error
    CHECK(fit_cm1(h).outputs[0] >= before);
}

TEST_CASE("component model two ranks zoom levels by confidence") {
    SUBCASE("single observed level ranks first, others follow the prior") {
        std::vector<DecisionObservation> h = {{st(Viewpoint::Front, 2), 1, 1}};
        const ComponentFit f = fit_cm2(h);
        const auto rank = cm2_ranking(f, 0);
        CHECK(rank.front() == 2);
        CHECK(f.outputs[0 * kZoomLevels + 2] == 1.0);
        CHECK(f.outputs[0 * kZoomLevels + 0] == 1.0 - kUnseenErrorPrior);
    }
    SUBCASE("a fully correct level dominates a fully wrong one") {
        std::vector<DecisionObservation> h;
        for (int i = 0; i < 4; ++i) h.push_back({st(Viewpoint::Right, 1), 1, 1});
        for (int i = 0; i < 4; ++i) h.push_back({st(Viewpoint::Right, 3), 0, 1});
        const auto rank = cm2_ranking(fit_cm2(h), 1);
        CHECK(rank.front() == 1);
        CHECK(rank[1] == 3);  // seen levels rank before unseen ones
    }
    SUBCASE("rankings are permutations") {
        std::vector<DecisionObservation> h = {{st(Viewpoint::Back, 0), 1, 0},
                                              {st(Viewpoint::Back, 2), 1, 1}};
        const ComponentFit f = fit_cm2(h);
        for (std::size_t v = 0; v < kViewpoints; ++v) {
            auto rank = cm2_ranking(f, v);
            std::sort(rank.begin(), rank.end());
            CHECK(rank == std::vector<std::size_t>{0, 1, 2, 3});
        }
    }
    SUBCASE("hand-solved toy history") {
        // level 0: residuals 1,0 -> cs 0.5; level 1: 0,0 -> cs 1
        std::vector<DecisionObservation> h = {{st(Viewpoint::Left, 0), 0, 1},
                                              {st(Viewpoint::Left, 0), 1, 1},
                                              {st(Viewpoint::Left, 1), 1, 1},
                                              {st(Viewpoint::Left, 1), 0, 0}};
        const ComponentFit f = fit_cm2(h);
        CHECK(f.outputs[3 * kZoomLevels + 0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(f.outputs[3 * kZoomLevels + 1] == 1.0);
        CHECK(cm2_ranking(f, 3).front() == 1);
    }
}

TEST_CASE("central unit gates on the inverse-trace factor") {
    SUBCASE("perfect fits with small aggregates are accepted at the default gate") {
        std::vector<DecisionObservation> h;
        for (std::size_t v = 0; v < kViewpoints; ++v)
            for (int i = 0; i < 2; ++i) h.push_back({st(static_cast<Viewpoint>(v), 0), 1, 1});
        const ComponentFit cm1 = fit_cm1(h);
        const ComponentFit cm2 = fit_cm2(h);
        CHECK(cm1.residual_trace == 0.0);
        // aggregate 0 scaled by 1/eps stays at 0 <= tau
        const GatedPriorities g = central_unit(cm1, cm2);
        CHECK(g.cm1_accepted);
        CHECK(g.cm2_accepted);
    }
    SUBCASE("hand evaluation of the gate inequality") {
        ComponentFit cm1;
        cm1.outputs.assign(kViewpoints, 0.5);
        cm1.seen.assign(kViewpoints, 1);
        cm1.residual_trace = 0.0;  // inverse factor 1e6
        ComponentFit cm2;
        cm2.outputs.assign(kViewpoints * kZoomLevels, 0.5);
        cm2.seen.assign(kViewpoints * kZoomLevels, 1);
        cm2.residual_trace = 0.0;
        // cm1 aggregate 3.0 * 1e6 = 3e6 <= 1e7 accepted;
        // cm2 aggregate 12.0 * 1e6 = 1.2e7 > 1e7 rejected
        const GatedPriorities g = central_unit(cm1, cm2, 1e7);
        CHECK(g.cm1_accepted);
        CHECK_FALSE(g.cm2_accepted);
        for (std::size_t v = 0; v < kViewpoints; ++v) CHECK(g.preferred_z[v] == 0);
    }
    SUBCASE("rejected components fall back to the documented priors") {
        ComponentFit cm1;
        cm1.outputs.assign(kViewpoints, 0.9);
        cm1.seen.assign(kViewpoints, 1);
        cm1.residual_trace = 0.0;
        ComponentFit cm2 = cm1;
        cm2.outputs.assign(kViewpoints * kZoomLevels, 0.9);
        cm2.seen.assign(kViewpoints * kZoomLevels, 1);
        cm2.residual_trace = 0.0;
        const GatedPriorities g = central_unit(cm1, cm2, 1e-3);
        CHECK_FALSE(g.cm1_accepted);
        CHECK_FALSE(g.cm2_accepted);
        for (std::size_t v = 0; v < kViewpoints; ++v) {
            CHECK(g.view_error[v] == kUnseenErrorPrior);
            CHECK(g.preferred_z[v] == 0);
        }
    }
}

TEST_CASE("error probabilities live in the unit interval") {
    CounterRng rng(11, 0);
    std::vector<DecisionObservation> h;
    for (int i = 0; i < 60; ++i) {
        h.push_back({st(static_cast<Viewpoint>(rng.next_index(6)), rng.next_index(4)),
                     static_cast<int>(rng.next_index(2)), static_cast<int>(rng.next_index(2))});
    }
    for (double p : fit_cm1(h).outputs) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("interaction matrix counts match the product structure") {
    SUBCASE("c3 x k2") {
        const InteractionMatrix m = build_interaction_matrix(3, 2);
        CHECK(m.nodes() == 6);
        CHECK(m.edge_count() == 15);
    }
    SUBCASE("default configuration c6 x k4") {
        const InteractionMatrix m = build_interaction_matrix(6, 4);
        CHECK(m.nodes() == 24);
        CHECK(m.edge_count() == 132);
    }
    SUBCASE("a single zoom level reduces to the cycle") {
        const InteractionMatrix m = build_interaction_matrix(4, 1);
        CHECK(m.edge_count() == 4);
    }
    SUBCASE("degenerate cycles are rejected") {
        CHECK_THROWS_WITH_AS((void)build_interaction_matrix(2, 3), "cycle undefined",
                             std::invalid_argument);
    }
}

TEST_CASE("adjacency agrees with the brute-force strong product everywhere") {
    for (std::size_t m = 3; m <= 8; ++m) {
        for (std::size_t n = 1; n <= 5; ++n) {
            const InteractionMatrix g = build_interaction_matrix(m, n);
            for (std::size_t xy1 = 0; xy1 < m; ++xy1)
                for (std::size_t z1 = 0; z1 < n; ++z1)
                    for (std::size_t xy2 = 0; xy2 < m; ++xy2)
                        for (std::size_t z2 = 0; z2 < n; ++z2) {
                            const bool want =
                                testsup::strong_product_adjacent(m, xy1, z1, xy2, z2);
                            CHECK(g.adjacent(g.index(xy1, z1), g.index(xy2, z2)) == want);
                        }
        }
    }
}

TEST_CASE("adjacency is symmetric with a zero diagonal") {
    const InteractionMatrix m = build_interaction_matrix(6, 4);
    for (std::size_t i = 0; i < m.nodes(); ++i) {
        CHECK_FALSE(m.adjacent(i, i));
        for (std::size_t j = 0; j < m.nodes(); ++j) CHECK(m.adjacent(i, j) == m.adjacent(j, i));
    }
}

TEST_CASE("planning emits exactly the requested budget of legal actions") {
    const InteractionMatrix m = build_interaction_matrix(6, 4);
    const std::vector<double> uniform(m.nodes(), 1.0);
    for (std::size_t budget : {1ul, 5ul, 8ul, 24ul, 40ul}) {
        const auto plan = plan_actions(m, uniform, st(Viewpoint::Front, 0), budget);
        CHECK(plan.size() == budget);
        CameraState cam = st(Viewpoint::Front, 0);
        for (const auto& a : plan) cam = apply_action(cam, a);  // throws if illegal
    }
}

TEST_CASE("uniform priorities reproduce the default tour") {
    const InteractionMatrix m = build_interaction_matrix(6, 4);
    const std::vector<double> uniform(m.nodes(), 1.0);
    for (std::size_t z : {0ul, 3ul}) {
        const auto tour = default_tour(st(Viewpoint::Front, z), 8);
        const auto plan = plan_actions(m, uniform, st(Viewpoint::Front, z), 8);
        CHECK(plan == tour);
    }
}

TEST_CASE("a planted high-priority node two hops away is reached in two actions") {
    const InteractionMatrix m = build_interaction_matrix(6, 4);
    std::vector<double> priorities(m.nodes(), 0.0);
    const CameraState target = st(Viewpoint::Back, 0);
    priorities[target.node_index()] = 1.0;
    const auto plan = plan_actions(m, priorities, st(Viewpoint::Front, 0), 8);
    CameraState cam = st(Viewpoint::Front, 0);
    bool visited = false;
    for (std::size_t i = 0; i < 2; ++i) {
        cam = apply_action(cam, plan[i]);
        visited = visited || cam == target;
    }
    CHECK(visited);
}

TEST_CASE("planning is deterministic") {
    const InteractionMatrix m = build_interaction_matrix(6, 4);
    std::vector<double> priorities(m.nodes(), 0.25);
    priorities[10] = 0.9;
    priorities[21] = 0.7;
    const auto a = plan_actions(m, priorities, st(Viewpoint::Left, 2), 8);
    const auto b = plan_actions(m, priorities, st(Viewpoint::Left, 2), 8);
    CHECK(a == b);
}

TEST_CASE("planner validates its inputs") {
    const InteractionMatrix m = build_interaction_matrix(6, 4);
    const std::vector<double> uniform(m.nodes(), 1.0);
    CHECK_THROWS_AS((void)plan_actions(m, uniform, st(Viewpoint::Front, 0), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)plan_actions(m, {1.0, 2.0}, st(Viewpoint::Front, 0), 4),
                    std::invalid_argument);
    const InteractionMatrix wrong = build_interaction_matrix(5, 4);
    CHECK_THROWS_AS(
        (void)plan_actions(wrong, std::vector<double>(20, 1.0), st(Viewpoint::Front, 0), 4),
        std::invalid_argument);
}
