#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mizo/histogram.hpp"
#include "mizo/info.hpp"
#include "mizo/joint_table.hpp"
#include "mizo/sources.hpp"

namespace mizo {

inline constexpr std::size_t kCommonGridBins = 32;

// Max-margin unit separator. gamma tracks 2/||w|| whenever ||w|| > 0.
struct Separator {
    std::vector<double> w;
    double bias = 0.0;
    double gamma = 0.0;
};

// Per-step policy context phi_t: step index and feedback availability.
struct PolicyContext {
    std::size_t step = 0;
    bool feedback_available = false;
};

struct MizoState {
    std::vector<double> theta_mix;       // on the probability simplex
    PolicyContext phi;
    double mi_running_mean = 0.0;        // MI'_t, mean of accepted MI values
    std::size_t accepted_count = 0;
    std::vector<double> loss_history;
    Separator separator;
    std::uint64_t rng_seed = 0;
    std::size_t step = 0;

    static MizoState init(std::size_t n_sources, std::uint64_t seed,
                          std::size_t feature_dims = 3);
    void validate() const;

    std::string to_json() const;
    static MizoState from_json(const std::string& text);
};

// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(std::vector<double> v);

// Mixing weights: theta gated by per-source availability, renormalized.
// With every source available this is the identity on the simplex.
std::vector<double> policy_weights(const std::vector<double>& theta,
                                   const std::vector<std::uint8_t>& available);

struct MixtureResult {
    Histogram distribution;  // S_t
    double score = 0.0;      // entropy of S_t
};

// S_t: policy-weighted mixture of the sources (already on a common grid),
// exponent-tilted by lambda (mass^lambda, renormalized). lambda == 1 leaves
// the mixture untouched.
MixtureResult mixture_score(const std::vector<Histogram>& sources,
                            const MizoState& state, double lambda,
                            const std::vector<std::uint8_t>& available = {});

// MI between a scalar score and the boolean response: scores discretized by
// entropy-maximizing intervals, then plug-in bivariate MI against Y.
// Constant scores carry no information and return 0.
double mi_of_score(const std::vector<std::pair<double, bool>>& samples,
                   std::size_t score_bins = 2, std::size_t proposal_count = 32);

// MI'_{t-1} - mi_t. Negative regret means the step improved on the running mean.
double regret(const MizoState& state, double mi_t);

using MiEval = std::function<double(const std::vector<double>&)>;

inline constexpr std::size_t kAllCoordinates = static_cast<std::size_t>(-1);

// Arithmetic mean of the drawn perturbation directions.
std::vector<double> mean_direction(const std::vector<std::vector<double>>& directions);

// Proposal before gating: project_simplex(theta + (mean(loss_history) -
// current_loss) * mean(directions)).
std::vector<double> zo_proposal(const MizoState& state, double current_loss,
                                const std::vector<std::vector<double>>& directions);

// Derivative-free update. Draws r signed perturbations on the simplex tangent
// (confined to one coordinate when `coordinate` is given), proposes a new
// theta and RETAINS it only if the recomputed running-mean MI increases;
// loss_history is appended either way.
MizoState zo_update(const MizoState& state, double current_loss, std::size_t r,
                    const MiEval& mi_eval, std::size_t coordinate = kAllCoordinates,
                    double perturbation = 0.05);

MizoState zo_update_with_directions(const MizoState& state, double current_loss,
                                    const std::vector<std::vector<double>>& directions,
                                    const MiEval& mi_eval);

enum class Orientation { Up, Down };

// Bin-level descriptor: (bin probability, p(Y=1 | bin), pointwise MI of the
// bin with Y=1). Up units contribute positively to MI(source; Y).
struct UnitSample {
    std::vector<double> feature;
    Orientation orientation = Orientation::Down;
};

std::vector<UnitSample> classify_units(const Histogram& source, const JointTable& joint_with_y);

struct MarginStep {
    Separator separator;
    bool stepped = false;
};

// One projected-subgradient step on the hinge loss separating Up from Down
// features, gated by alpha and scaled by eta; w is projected to ||w|| <= 1 and
// gamma recomputed as 2/||w||. Missing orientation on either side is a no-op.
MarginStep max_margin_step(const Separator& separator, const std::vector<UnitSample>& units,
                           double eta, int alpha);

struct ViewSources {
    std::vector<Histogram> components;
    double lambda = 1.0;
};

enum class SourceVariant { GoLedOl, GhLed, Go, Gh, Led, Ol };

SourceVariant parse_variant(const std::string& name);
std::string variant_name(SourceVariant v);
std::size_t variant_component_count(SourceVariant v);

// Resampled mixture components for a variant; the OL component is the mean of
// the per-object histograms.
ViewSources mixture_components(const SourceSet& s, SourceVariant v,
                               std::size_t grid = kCommonGridBins);

struct MizoConfig {
    std::size_t rounds = 50;            // tau
    std::size_t zo_directions = 4;      // r
    double perturbation = 0.05;
    double eta0 = 0.1;                  // separator step size, decayed eta0/sqrt(t)
    std::size_t score_bins = 2;
    std::size_t interval_proposals = 32;
    std::size_t common_grid = kCommonGridBins;
    double feedback_fraction = 1.0;
    std::uint64_t seed = 0;
    bool active_regret = true;
    bool corner_trials = true;          // also test each component on its own per round
};

struct MizoRun {
    MizoState state;
    std::vector<double> view_scores;    // per-view score under the final theta
    std::vector<double> mi_log;         // MI_t per round
    std::vector<double> regret_log;     // MI'_{t-1} - MI_t per round
    std::vector<double> mean_log;       // MI'_t after each round
    double final_mi_mean = 0.0;         // MI'_tau
};

// Full online loop: mixture scoring, MI against revealed responses, global and
// coordinate-wise derivative-free weight updates gated on the running mean,
// and the unit-separation step, for `rounds` rounds. Feedback is masked to
// floor(fraction * views) labels chosen by a seeded permutation.
MizoRun run_mizo(const std::vector<ViewSources>& views,
                 const std::vector<std::uint8_t>& responses,
                 const MizoConfig& config);

// Indices revealed by the seeded permutation mask (sorted).
std::vector<std::size_t> feedback_mask(std::size_t count, double fraction, std::uint64_t seed);

// Incremental form of the same loop: observations stream in, each step()
// executes one full round over everything observed so far. run_mizo is a
// convenience wrapper around this engine.
class MizoEngine {
public:
    MizoEngine(std::size_t n_sources, const MizoConfig& config);

    void observe(const ViewSources& view, bool response, bool revealed);
    void step();
    double score(const ViewSources& view) const;  // under the current theta

    const MizoState& state() const { return state_; }
    MizoState& mutable_state() { return state_; }
    // MI_t of the last completed round, the value regret was formed against
    double last_mi() const { return last_round_mi_; }
    double last_regret() const { return last_regret_; }
    std::size_t sample_count() const { return samples_.size(); }

private:
    double evaluate(const std::vector<double>& theta) const;

    MizoConfig config_;
    MizoState state_;
    std::vector<ViewSources> samples_;        // resampled to the common grid
    std::vector<std::uint8_t> responses_;
    std::vector<std::uint8_t> revealed_;
    double current_mi_ = 0.0;
    bool mi_dirty_ = true;
    double last_round_mi_ = 0.0;
    double last_regret_ = 0.0;
};

}  // namespace mizo
