#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mizo/scene.hpp"

namespace mizo {

// Proxy correctness labels per camera state, derived from view scores.
struct ProxyLabels {
    std::array<int, kViewpoints * kZoomLevels> label;  // -1 where undefined

    ProxyLabels() { label.fill(-1); }
    int at(const CameraState& s) const { return label[s.node_index()]; }
};

// label 1 iff the state's mean score >= the median of all scores (ties -> 1)
ProxyLabels generate_proxy_labels(const std::vector<std::pair<CameraState, double>>& view_scores);

// One oracle decision with its reference label: the revealed truth where
// available, otherwise the proxy label for the state.
struct DecisionObservation {
    CameraState state;
    int decision = 0;   // boolean answer given by the system
    int label = 0;      // reference the answer is compared against
};

std::vector<DecisionObservation> attach_labels(
    const std::vector<std::pair<CameraState, int>>& decisions,
    const ProxyLabels& proxy,
    const std::vector<std::optional<int>>& revealed_truth);

inline constexpr double kUnseenErrorPrior = 0.5;

// Least-squares fit of decisions against reference labels. `outputs` holds
// per-viewpoint error probabilities for CM1 and per-(viewpoint, z) confidences
// for CM2; residual_trace is the total squared residual.
struct ComponentFit {
    std::vector<double> coefficients;      // fitted means over the seen cells
    double residual_trace = 0.0;
    std::vector<double> outputs;
    std::vector<std::uint8_t> seen;
};

ComponentFit fit_cm1(const std::vector<DecisionObservation>& history);
ComponentFit fit_cm2(const std::vector<DecisionObservation>& history);

// z-levels of one viewpoint ordered by confidence, seen levels first,
// ties to the lower index.
std::vector<std::size_t> cm2_ranking(const ComponentFit& cm2, std::size_t viewpoint);

inline constexpr double kTraceEpsilon = 1e-6;
inline constexpr double kDefaultGateTau = 1e7;

// Trace-gated combination of the component models. Each model's aggregate
// output is scaled by 1/(trace + eps) and accepted iff it stays within tau;
// rejected models fall back to the documented priors (uniform error 0.5,
// z-level index 0). Node priorities favour states whose decisions are least
// predictable: P(v)(1 - P(v)), concentrated on the preferred z-level.
struct GatedPriorities {
    bool cm1_accepted = false;
    bool cm2_accepted = false;
    std::array<double, kViewpoints> view_error{};          // P(v)
    std::array<std::size_t, kViewpoints> preferred_z{};    // CM2 top z per viewpoint
    std::vector<double> node_priority;                     // per interaction-matrix node
};

GatedPriorities central_unit(const ComponentFit& cm1, const ComponentFit& cm2,
                             double tau = kDefaultGateTau);

// Strong product of the viewpoint cycle C_{n_xy} and the complete zoom graph
// K_{n_z}; node index = xy * n_z + z.
struct InteractionMatrix {
    std::size_t n_xy = 0;
    std::size_t n_z = 0;
    std::vector<std::uint8_t> adjacency;   // dense, symmetric, zero diagonal
    std::vector<double> node_values;

    std::size_t nodes() const { return n_xy * n_z; }
    std::size_t index(std::size_t xy, std::size_t z) const { return xy * n_z + z; }
    bool adjacent(std::size_t i, std::size_t j) const { return adjacency[i * nodes() + j] != 0; }
    std::size_t edge_count() const;
};

InteractionMatrix build_interaction_matrix(std::size_t n_xy, std::size_t n_z);

// Greedy walk over the interaction matrix: repeatedly move to the adjacent
// unvisited node of maximum priority (ties to the lowest node index), emit
// the camera actions realizing each edge (rotations before zooms), truncated
// to exactly `budget` actions. Pass-through states count as visited.
std::vector<CameraAction> plan_actions(const InteractionMatrix& matrix,
                                       const std::vector<double>& priorities,
                                       const CameraState& current, std::size_t budget);

// The measurement-round tour: the same walk under uniform priorities.
std::vector<CameraAction> default_tour(const CameraState& start, std::size_t budget);

}  // namespace mizo
