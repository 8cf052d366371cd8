#include "mizo/controller.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

namespace mizo {

ProxyLabels generate_proxy_labels(const std::vector<std::pair<CameraState, double>>& view_scores) {
    if (view_scores.empty()) throw std::invalid_argument("no scored views");
    std::vector<double> scores;
    scores.reserve(view_scores.size());
    for (const auto& [s, v] : view_scores) scores.push_back(v);
    std::sort(scores.begin(), scores.end());
    const std::size_t n = scores.size();
    const double median = n % 2 == 1 ? scores[n / 2]
                                     : 0.5 * (scores[n / 2 - 1] + scores[n / 2]);

    // mean score per state, then threshold at the median (ties -> 1)
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (const auto& [state, v] : view_scores) {
        auto& slot = acc[state.node_index()];
        slot.first += v;
        slot.second += 1;
    }
    ProxyLabels out;
    for (const auto& [node, slot] : acc) {
        const double mean = slot.first / static_cast<double>(slot.second);
        out.label[node] = mean >= median ? 1 : 0;
    }
    return out;
}

std::vector<DecisionObservation> attach_labels(
    const std::vector<std::pair<CameraState, int>>& decisions,
    const ProxyLabels& proxy,
    const std::vector<std::optional<int>>& revealed_truth) {
    if (!revealed_truth.empty() && revealed_truth.size() != decisions.size())
        throw std::invalid_argument("truth mask size mismatch");
    std::vector<DecisionObservation> out;
    out.reserve(decisions.size());
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        DecisionObservation obs;
        obs.state = decisions[i].first;
        obs.decision = decisions[i].second;
        if (!revealed_truth.empty() && revealed_truth[i].has_value()) {
            obs.label = *revealed_truth[i];
        } else {
            const int p = proxy.at(obs.state);
            obs.label = p < 0 ? 1 : p;
        }
        out.push_back(obs);
    }
    return out;
}

namespace {

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

ComponentFit fit_cm1(const std::vector<DecisionObservation>& history) {
    ComponentFit fit;
    fit.outputs.assign(kViewpoints, kUnseenErrorPrior);
    fit.seen.assign(kViewpoints, 0);
    std::array<double, kViewpoints> sq{};
    std::array<std::size_t, kViewpoints> count{};
    for (const auto& obs : history) {
        const double r = static_cast<double>(obs.decision - obs.label);
        const std::size_t v = static_cast<std::size_t>(obs.state.viewpoint);
        sq[v] += r * r;
        count[v] += 1;
        fit.residual_trace += r * r;
    }
    for (std::size_t v = 0; v < kViewpoints; ++v) {
        if (count[v] == 0) continue;
        fit.seen[v] = 1;
        fit.outputs[v] = clamp01(sq[v] / static_cast<double>(count[v]));
        fit.coefficients.push_back(fit.outputs[v]);
    }
    return fit;
}

ComponentFit fit_cm2(const std::vector<DecisionObservation>& history) {
    const std::size_t cells = kViewpoints * kZoomLevels;
    ComponentFit fit;
    fit.outputs.assign(cells, 1.0 - kUnseenErrorPrior);
    fit.seen.assign(cells, 0);
    std::vector<double> sq(cells, 0.0);
    std::vector<std::size_t> count(cells, 0);
    for (const auto& obs : history) {
        const double r = static_cast<double>(obs.decision - obs.label);
        const std::size_t c = obs.state.node_index();
        sq[c] += r * r;
        count[c] += 1;
        fit.residual_trace += r * r;
    }
    for (std::size_t c = 0; c < cells; ++c) {
        if (count[c] == 0) continue;
        fit.seen[c] = 1;
        fit.outputs[c] = 1.0 - clamp01(sq[c] / static_cast<double>(count[c]));
        fit.coefficients.push_back(fit.outputs[c]);
    }
    return fit;
}

std::vector<std::size_t> cm2_ranking(const ComponentFit& cm2, std::size_t viewpoint) {
    if (cm2.outputs.size() != kViewpoints * kZoomLevels)
        throw std::invalid_argument("not a cm2 fit");
    std::vector<std::size_t> order(kZoomLevels);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const std::size_t ca = viewpoint * kZoomLevels + a;
        const std::size_t cb = viewpoint * kZoomLevels + b;
        if (cm2.seen[ca] != cm2.seen[cb]) return cm2.seen[ca] > cm2.seen[cb];
        if (cm2.outputs[ca] != cm2.outputs[cb]) return cm2.outputs[ca] > cm2.outputs[cb];
        return a < b;
    });
    return order;
}

GatedPriorities central_unit(const ComponentFit& cm1, const ComponentFit& cm2, double tau) {
    if (tau <= 0.0) throw std::invalid_argument("gate threshold must be positive");
    GatedPriorities out;

    const double inv1 = 1.0 / (cm1.residual_trace + kTraceEpsilon);
    const double inv2 = 1.0 / (cm2.residual_trace + kTraceEpsilon);
    double agg1 = 0.0, agg2 = 0.0;
    for (std::size_t i = 0; i < cm1.outputs.size(); ++i)
        if (cm1.seen[i]) agg1 += cm1.outputs[i];
    for (std::size_t i = 0; i < cm2.outputs.size(); ++i)
        if (cm2.seen[i]) agg2 += cm2.outputs[i];
    out.cm1_accepted = agg1 * inv1 <= tau;
    out.cm2_accepted = agg2 * inv2 <= tau;

    for (std::size_t v = 0; v < kViewpoints; ++v) {
        out.view_error[v] = out.cm1_accepted ? cm1.outputs[v] : kUnseenErrorPrior;
        out.preferred_z[v] = out.cm2_accepted ? cm2_ranking(cm2, v).front() : 0;
    }

    out.node_priority.assign(kViewpoints * kZoomLevels, 0.0);
    for (std::size_t v = 0; v < kViewpoints; ++v) {
        const double p = out.view_error[v];
        const double need = p * (1.0 - p);  // decision variance: least predictable views first
        for (std::size_t z = 0; z < kZoomLevels; ++z) {
            const double zw = z == out.preferred_z[v] ? 1.0 : 0.5;
            out.node_priority[v * kZoomLevels + z] = need * zw;
        }
    }
    return out;
}

std::size_t InteractionMatrix::edge_count() const {
    std::size_t doubled = 0;
    for (std::uint8_t a : adjacency) doubled += a;
    return doubled / 2;
}

InteractionMatrix build_interaction_matrix(std::size_t n_xy, std::size_t n_z) {
    if (n_xy < 3) throw std::invalid_argument("cycle undefined");
    if (n_z < 1) throw std::invalid_argument("need at least one z level");
    InteractionMatrix m;
    m.n_xy = n_xy;
    m.n_z = n_z;
    const std::size_t n = m.nodes();
    m.adjacency.assign(n * n, 0);
    m.node_values.assign(n, 0.0);

    auto cycle_adjacent = [n_xy](std::size_t a, std::size_t b) {
        if (a == b) return false;
        const std::size_t d = a > b ? a - b : b - a;
        return d == 1 || d == n_xy - 1;
    };
    for (std::size_t xy1 = 0; xy1 < n_xy; ++xy1) {
        for (std::size_t z1 = 0; z1 < n_z; ++z1) {
            for (std::size_t xy2 = 0; xy2 < n_xy; ++xy2) {
                for (std::size_t z2 = 0; z2 < n_z; ++z2) {
                    const std::size_t i = m.index(xy1, z1);
                    const std::size_t j = m.index(xy2, z2);
                    if (i == j) continue;
                    const bool same_xy = xy1 == xy2;
                    const bool adj_xy = cycle_adjacent(xy1, xy2);
                    const bool same_z = z1 == z2;
                    // strong product edges: either factor may stay, neither may jump
                    if ((same_xy && !same_z) || (adj_xy && same_z) || (adj_xy && !same_z))
                        m.adjacency[i * n + j] = 1;
                }
            }
        }
    }
    return m;
}

namespace {

std::vector<CameraAction> realize_edge(const CameraState& from, std::size_t target_xy,
                                       std::size_t target_z) {
    std::vector<CameraAction> actions = rotation_path(
        from.viewpoint, static_cast<Viewpoint>(target_xy));
    const long dz = static_cast<long>(target_z) - static_cast<long>(from.z_level);
    for (long k = 0; k < std::labs(dz); ++k)
        actions.push_back({ActionKind::Zoom, dz > 0 ? 1 : -1});
    return actions;
}

}  // namespace

namespace {

// Node priorities smoothed into an attraction field: a remote high-priority
// node pulls the walk along the graph with strength halved per hop.
std::vector<double> diffuse_priorities(const InteractionMatrix& matrix,
                                       const std::vector<double>& priorities) {
    const std::size_t n = matrix.nodes();
    std::vector<std::vector<std::size_t>> dist(n, std::vector<std::size_t>(n, n + 1));
    for (std::size_t s = 0; s < n; ++s) {
        std::deque<std::size_t> frontier{s};
        dist[s][s] = 0;
        while (!frontier.empty()) {
            const std::size_t cur = frontier.front();
            frontier.pop_front();
            for (std::size_t nxt = 0; nxt < n; ++nxt) {
                if (!matrix.adjacent(cur, nxt) || dist[s][nxt] <= n) continue;
                dist[s][nxt] = dist[s][cur] + 1;
                frontier.push_back(nxt);
            }
        }
    }
    std::vector<double> effective(n, 0.0);
    for (std::size_t node = 0; node < n; ++node) {
        for (std::size_t m = 0; m < n; ++m) {
            const double pull = priorities[m] * std::pow(0.5, static_cast<double>(dist[node][m]));
            effective[node] = std::max(effective[node], pull);
        }
    }
    return effective;
}

}  // namespace

std::vector<CameraAction> plan_actions(const InteractionMatrix& matrix,
                                       const std::vector<double>& raw_priorities,
                                       const CameraState& current, std::size_t budget) {
    if (budget < 1) throw std::invalid_argument("budget must be positive");
    if (matrix.n_xy != kViewpoints || matrix.n_z != kZoomLevels)
        throw std::invalid_argument("planner requires the camera interaction matrix");
    if (raw_priorities.size() != matrix.nodes())
        throw std::invalid_argument("priorities must cover all matrix nodes");
    const std::vector<double> priorities = diffuse_priorities(matrix, raw_priorities);

    std::vector<std::uint8_t> visited(matrix.nodes(), 0);
    CameraState cur = current;
    visited[cur.node_index()] = 1;

    std::vector<CameraAction> plan;
    plan.reserve(budget);
    while (plan.size() < budget) {
        long target = -1;
        double best = -1.0;
        for (std::size_t node = 0; node < matrix.nodes(); ++node) {
            if (visited[node] || !matrix.adjacent(cur.node_index(), node)) continue;
            if (priorities[node] > best) {
                best = priorities[node];
                target = static_cast<long>(node);
            }
        }
        if (target < 0) {
            // all neighbours exhausted; restart coverage from the current node
            std::fill(visited.begin(), visited.end(), 0);
            visited[cur.node_index()] = 1;
            continue;
        }
        const std::size_t xy = static_cast<std::size_t>(target) / matrix.n_z;
        const std::size_t z = static_cast<std::size_t>(target) % matrix.n_z;
        for (const CameraAction& a : realize_edge(cur, xy, z)) {
            cur = apply_action(cur, a);
            visited[cur.node_index()] = 1;
            plan.push_back(a);
            if (plan.size() == budget) break;
        }
    }
    return plan;
}

std::vector<CameraAction> default_tour(const CameraState& start, std::size_t budget) {
    const InteractionMatrix m = build_interaction_matrix(kViewpoints, kZoomLevels);
    const std::vector<double> uniform(m.nodes(), 1.0);
    return plan_actions(m, uniform, start, budget);
}

}  // namespace mizo
