#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mizo/controller.hpp"
#include "mizo/metrics.hpp"
#include "mizo/mizo.hpp"
#include "mizo/scene.hpp"

namespace mizo {

enum class TaskMetric { Acc, Ber };
enum class ControllerKind { Ours, DefaultTour };

struct RunConfig {
    std::string dataset_dir;
    SourceVariant variant = SourceVariant::GoLedOl;
    bool active_regret = true;
    ControllerKind controller = ControllerKind::Ours;
    std::size_t action_budget = 8;
    double demo_fraction = 0.05;
    double feedback_fraction = 1.0;
    std::vector<std::uint64_t> seeds = {1};
    OracleParams oracle;
    TaskMetric task_metric = TaskMetric::Acc;
    std::size_t start_z = kZoomLevels - 1;   // nearest stop; demos of the CLI use 0
    double gate_tau = kDefaultGateTau;
    std::size_t demo_train_rounds = 12;      // engine rounds after demonstrations
    std::size_t episode_rounds = 4;          // engine rounds after the measurement round
    std::size_t score_bins = 2;
    std::string out_path;

    void validate() const;
    MizoConfig mizo_config(std::uint64_t seed) const;
};

struct StepRecord {
    CameraState state;
    CameraAction action;
    bool decision = false;
    bool correct = false;
    double score = 0.0;
    bool revealed = false;
};

struct EpisodeRecord {
    std::string scene;
    std::uint64_t seed = 0;
    std::vector<StepRecord> round1;
    std::vector<StepRecord> round2;
    bool summary_truth = true;
    double r1_summary_info = 0.0, r2_summary_info = 0.0;
    bool r1_summary_decision = false, r2_summary_decision = false;
    bool r1_summary_correct = false, r2_summary_correct = false;
    bool cm1_gate = false, cm2_gate = false;
    std::array<double, kViewpoints> view_error{};        // controller error probabilities
    std::array<std::size_t, kViewpoints> preferred_z{};  // CM2 top zoom level per viewpoint
    double mi_running_mean = 0.0;
    std::vector<double> theta;
    std::size_t oracle_calls = 0;
};

// Demonstration feedback: the pre-trained engine plus the labelled
// observations the controller reuses in every episode.
struct DemoStore {
    MizoEngine engine;
    std::vector<DecisionObservation> observations;
    std::size_t oracle_calls = 0;
    std::size_t scene_count = 0;
};

std::vector<SceneSpec> load_dataset(const std::string& dir);

DemoStore run_demonstrations(const std::vector<SceneSpec>& demo_scenes, const RunConfig& config,
                             std::uint64_t seed);

EpisodeRecord run_episode(const SceneSpec& spec, std::size_t scene_index, const RunConfig& config,
                          std::uint64_t seed, const DemoStore& demos);

struct SeedAggregate {
    std::uint64_t seed = 0;
    double r1_metric = 0.0;
    double r2_metric = 0.0;
    double delta_on_r1 = 0.0;
};

struct Report {
    RunConfig config;
    std::vector<EpisodeRecord> per_episode;
    std::vector<SeedAggregate> per_seed;
    std::string metric_name;            // "acc_sq" or "ber"
    double mean = 0.0;                  // round-2 metric, mean over seeds
    double sigma = 0.0;                 // std over seeds
    double delta_on_r1 = 0.0;           // mean over seeds
    std::size_t oracle_calls = 0;
    std::size_t renders = 0;
    double simulated_oracle_ms = 0.0;

    std::string to_json() const;
    std::string to_csv() const;
};

Report run_benchmark(const std::vector<SceneSpec>& scenes, const RunConfig& config);

// Score-distribution diagnostic over the dataset: per-seed rank AUC of the
// trained score against correctness, next to the untrained fixed-weight score.
struct SeparationDiag {
    std::uint64_t seed = 0;
    SeparationStats trained;
    SeparationStats fixed;
};

std::vector<SeparationDiag> diag_separation(const std::vector<SceneSpec>& scenes,
                                            const RunConfig& config);

struct PcdDiag {
    std::uint64_t seed = 0;
    double pcd_trained = 0.0;
    double pcd_fixed = 0.0;
};

std::vector<PcdDiag> diag_pcd(const std::vector<SceneSpec>& scenes, const RunConfig& config);

// Pooled per-view samples for the diagnostics: scores under a trained run and
// under fixed uniform weights, with per-view correctness labels.
struct DiagSamples {
    std::vector<double> trained_scores;
    std::vector<double> fixed_scores;
    std::vector<int> labels;
};

DiagSamples collect_diag_samples(const std::vector<SceneSpec>& scenes, const RunConfig& config,
                                 std::uint64_t seed);

std::string separation_to_json(const RunConfig& config, const std::vector<SeparationDiag>& d);
std::string pcd_to_json(const RunConfig& config, const std::vector<PcdDiag>& d);

}  // namespace mizo
