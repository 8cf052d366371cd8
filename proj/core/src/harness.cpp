#include "mizo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mizo {

void RunConfig::validate() const {
    if (action_budget < 1) throw std::invalid_argument("action budget must be >= 1");
    if (demo_fraction <= 0.0 || demo_fraction >= 1.0)
        throw std::invalid_argument("demonstrations fraction must lie in (0, 1)");
    const bool known = feedback_fraction == 1.0 || feedback_fraction == 0.5 ||
                       feedback_fraction == 0.2;
    if (!known) throw std::invalid_argument("feedback fraction must be 1.0, 0.5 or 0.2");
    if (seeds.empty()) throw std::invalid_argument("need at least one seed");
    if (start_z >= kZoomLevels) throw std::invalid_argument("start z out of range");
}

MizoConfig RunConfig::mizo_config(std::uint64_t seed) const {
    MizoConfig mc;
    mc.seed = seed;
    mc.active_regret = active_regret;
    mc.feedback_fraction = feedback_fraction;
    mc.score_bins = score_bins;
    return mc;
}

std::vector<SceneSpec> load_dataset(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::invalid_argument("dataset directory not found: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::invalid_argument("dataset directory holds no scene files");
    std::vector<SceneSpec> scenes;
    scenes.reserve(files.size());
    for (const auto& f : files) {
        std::ifstream in(f);
        std::stringstream buf;
        buf << in.rdbuf();
        scenes.push_back(SceneSpec::from_json(buf.str()));
    }
    return scenes;
}

namespace {

std::uint64_t episode_stream_seed(std::uint64_t run_seed, std::size_t scene_index) {
    return run_seed ^ (0x9e3779b97f4a7c15ULL * (scene_index + 1));
}

struct ViewObservation {
    CameraState state;
    ViewSources sources;
    bool decision = false;
    bool correct = false;
};

// one camera pass over the default tour, querying the oracle after each action
std::vector<ViewObservation> run_tour(const Scene& scene,
                                      const std::vector<CameraAction>& actions,
                                      const RunConfig& config, SourceVariant variant,
                                      CounterRng& stream, CameraState start) {
    std::vector<ViewObservation> out;
    CameraState cam = start;
    for (const CameraAction& a : actions) {
        cam = apply_action(cam, a);
        const RasterView view = render_view(scene, cam);
        ViewObservation obs;
        obs.state = cam;
        obs.sources = mixture_components(SourceSet::extract(view, scene.spec.description), variant);
        obs.decision = oracle_respond(scene, cam, view_line(scene, cam.viewpoint),
                                      config.oracle, stream);
        obs.correct = obs.decision == scene.spec.summary_truth;
        out.push_back(std::move(obs));
    }
    return out;
}

double accumulated_summary_info(const Scene& scene, const std::vector<CameraState>& visited) {
    double info = 1.0;
    for (const Query& q : summary_features(scene)) {
        const auto& f = scene.spec.objects[q.object].features[q.feature];
        double best = 0.0;
        for (const CameraState& s : visited) {
            best = std::max(best, f.visibility[static_cast<std::size_t>(s.viewpoint)] *
                                      zoom_factor(s.z_level));
        }
        info = std::min(info, best);
    }
    return info;
}

}  // namespace

DemoStore run_demonstrations(const std::vector<SceneSpec>& demo_scenes, const RunConfig& config,
                             std::uint64_t seed) {
    if (demo_scenes.empty()) throw std::invalid_argument("demonstrations need at least one scene");
    DemoStore store{MizoEngine(variant_component_count(config.variant), config.mizo_config(seed)),
                    {}, 0, demo_scenes.size()};
    const CameraState start{Viewpoint::Front, config.start_z};
    const auto tour = default_tour(start, config.action_budget);
    for (std::size_t i = 0; i < demo_scenes.size(); ++i) {
        const Scene scene = generate_scene(demo_scenes[i]);
        CounterRng stream(episode_stream_seed(seed, i), 0);
        const auto views = run_tour(scene, tour, config, config.variant, stream, start);
        store.oracle_calls += views.size();
        for (const auto& v : views) {
            store.engine.observe(v.sources, v.correct, true);
            store.observations.push_back(
                {v.state, v.decision ? 1 : 0, scene.spec.summary_truth ? 1 : 0});
        }
    }
    for (std::size_t r = 0; r < config.demo_train_rounds; ++r) store.engine.step();
    return store;
}

EpisodeRecord run_episode(const SceneSpec& spec, std::size_t scene_index, const RunConfig& config,
                          std::uint64_t seed, const DemoStore& demos) {
    const Scene scene = generate_scene(spec);
    const CameraState start{Viewpoint::Front, config.start_z};
    CounterRng stream(episode_stream_seed(seed, scene_index), 0);

    EpisodeRecord rec;
    rec.scene = spec.name;
    rec.seed = seed;
    rec.summary_truth = spec.summary_truth;

    // measurement round on the default tour
    MizoEngine engine = demos.engine;
    const auto tour = default_tour(start, config.action_budget);
    const auto r1 = run_tour(scene, tour, config, config.variant, stream, start);
    rec.oracle_calls += r1.size();

    const auto mask = feedback_mask(r1.size(), config.feedback_fraction,
                                    episode_stream_seed(seed, scene_index));
    std::vector<bool> revealed(r1.size(), false);
    for (std::size_t k : mask) revealed[k] = true;
    for (std::size_t i = 0; i < r1.size(); ++i)
        engine.observe(r1[i].sources, r1[i].correct, revealed[i]);
    for (std::size_t r = 0; r < config.episode_rounds; ++r) engine.step();

    std::vector<std::pair<CameraState, double>> scored;
    for (std::size_t i = 0; i < r1.size(); ++i) {
        const double score = engine.score(r1[i].sources);
        scored.emplace_back(r1[i].state, score);
        rec.round1.push_back({r1[i].state, tour[i], r1[i].decision, r1[i].correct, score,
                              revealed[i]});
    }

    // controller: proxy labels, component fits, trace gate, planned actions
    const ProxyLabels proxy = generate_proxy_labels(scored);
    std::vector<std::pair<CameraState, int>> decisions;
    std::vector<std::optional<int>> truth;
    for (const auto& obs : demos.observations) {
        decisions.emplace_back(obs.state, obs.decision);
        truth.emplace_back(obs.label);  // demonstrations reveal every label
    }
    for (std::size_t i = 0; i < r1.size(); ++i) {
        decisions.emplace_back(r1[i].state, r1[i].decision ? 1 : 0);
        truth.emplace_back(revealed[i] ? std::optional<int>(spec.summary_truth ? 1 : 0)
                                       : std::nullopt);
    }
    const auto history = attach_labels(decisions, proxy, truth);
    const ComponentFit cm1 = fit_cm1(history);
    const ComponentFit cm2 = fit_cm2(history);
    const GatedPriorities gate = central_unit(cm1, cm2, config.gate_tau);
    rec.cm1_gate = gate.cm1_accepted;
    rec.cm2_gate = gate.cm2_accepted;
    rec.view_error = gate.view_error;
    rec.preferred_z = gate.preferred_z;

    std::vector<CameraAction> plan;
    if (config.controller == ControllerKind::Ours) {
        const InteractionMatrix matrix = build_interaction_matrix(kViewpoints, kZoomLevels);
        plan = plan_actions(matrix, gate.node_priority, start, config.action_budget);
    } else {
        plan = default_tour(start, config.action_budget);
    }

    // correction round
    const auto r2 = run_tour(scene, plan, config, config.variant, stream, start);
    rec.oracle_calls += r2.size();
    for (std::size_t i = 0; i < r2.size(); ++i) {
        rec.round2.push_back({r2[i].state, plan[i], r2[i].decision, r2[i].correct,
                              engine.score(r2[i].sources), false});
    }

    // summary question per round; the correction round sees the whole episode
    std::vector<CameraState> visited;
    for (const auto& v : r1) visited.push_back(v.state);
    rec.r1_summary_info = accumulated_summary_info(scene, visited);
    rec.r1_summary_decision = oracle_decide(spec.summary_truth, rec.r1_summary_info,
                                            config.oracle, stream);
    rec.oracle_calls += 1;
    for (const auto& v : r2) visited.push_back(v.state);
    rec.r2_summary_info = accumulated_summary_info(scene, visited);
    rec.r2_summary_decision = oracle_decide(spec.summary_truth, rec.r2_summary_info,
                                            config.oracle, stream);
    rec.oracle_calls += 1;
    rec.r1_summary_correct = rec.r1_summary_decision == spec.summary_truth;
    rec.r2_summary_correct = rec.r2_summary_decision == spec.summary_truth;

    rec.mi_running_mean = engine.state().mi_running_mean;
    rec.theta = engine.state().theta_mix;
    return rec;
}

namespace {

double seed_metric(const std::vector<const EpisodeRecord*>& eps, TaskMetric metric, bool round2) {
    if (metric == TaskMetric::Acc) {
        std::vector<std::pair<std::size_t, std::size_t>> per_scene;
        for (const auto* e : eps) {
            const bool c = round2 ? e->r2_summary_correct : e->r1_summary_correct;
            per_scene.push_back(c ? std::make_pair<std::size_t, std::size_t>(1, 0)
                                  : std::make_pair<std::size_t, std::size_t>(0, 1));
        }
        return acc_sq(per_scene);
    }
    ConfusionCounts c;
    for (const auto* e : eps)
        c.add(e->summary_truth, round2 ? e->r2_summary_decision : e->r1_summary_decision);
    return 100.0 * ber(c);
}

}  // namespace

Report run_benchmark(const std::vector<SceneSpec>& scenes, const RunConfig& config) {
    config.validate();
    if (scenes.empty()) throw std::invalid_argument("empty dataset");
    const std::size_t demo_count = static_cast<std::size_t>(
        std::ceil(config.demo_fraction * static_cast<double>(scenes.size())));
    if (demo_count == 0) throw std::invalid_argument("demonstrations fraction yields no scenes");
    if (demo_count >= scenes.size())
        throw std::invalid_argument("demonstrations leave no evaluation scenes");

    const std::vector<SceneSpec> demo_scenes(scenes.begin(),
                                             scenes.begin() + static_cast<long>(demo_count));
    Report report;
    report.config = config;
    report.metric_name = config.task_metric == TaskMetric::Acc ? "acc_sq" : "ber";

    for (const std::uint64_t seed : config.seeds) {
        const DemoStore demos = run_demonstrations(demo_scenes, config, seed);
        report.oracle_calls += demos.oracle_calls;
        std::vector<const EpisodeRecord*> seed_eps;
        const std::size_t first = report.per_episode.size();
        for (std::size_t i = demo_count; i < scenes.size(); ++i) {
            report.per_episode.push_back(run_episode(scenes[i], i, config, seed, demos));
            report.oracle_calls += report.per_episode.back().oracle_calls;
        }
        for (std::size_t i = first; i < report.per_episode.size(); ++i)
            seed_eps.push_back(&report.per_episode[i]);

        SeedAggregate agg;
        agg.seed = seed;
        agg.r1_metric = seed_metric(seed_eps, config.task_metric, false);
        agg.r2_metric = seed_metric(seed_eps, config.task_metric, true);
        agg.delta_on_r1 = agg.r2_metric - agg.r1_metric;
        report.per_seed.push_back(agg);
    }

    double mean = 0.0, delta = 0.0;
    for (const auto& a : report.per_seed) {
        mean += a.r2_metric;
        delta += a.delta_on_r1;
    }
    mean /= static_cast<double>(report.per_seed.size());
    delta /= static_cast<double>(report.per_seed.size());
    double var = 0.0;
    for (const auto& a : report.per_seed) var += (a.r2_metric - mean) * (a.r2_metric - mean);
    report.mean = mean;
    report.sigma = report.per_seed.size() > 1
                       ? std::sqrt(var / static_cast<double>(report.per_seed.size() - 1))
                       : 0.0;
    report.delta_on_r1 = delta;
    report.renders = report.oracle_calls;  // one render per per-view query
    report.simulated_oracle_ms = static_cast<double>(report.oracle_calls) *
                                 config.oracle.latency_ms;
    return report;
}

namespace {

nlohmann::ordered_json config_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["dataset"] = c.dataset_dir;
    j["variant"] = variant_name(c.variant);
    j["active_regret"] = c.active_regret;
    j["controller"] = c.controller == ControllerKind::Ours ? "ours" : "default-tour";
    j["action_budget"] = c.action_budget;
    j["demo_fraction"] = c.demo_fraction;
    j["feedback_fraction"] = c.feedback_fraction;
    j["seeds"] = c.seeds;
    j["oracle"] = {{"a", c.oracle.a}, {"b", c.oracle.b}, {"latency_ms", c.oracle.latency_ms}};
    j["task_metric"] = c.task_metric == TaskMetric::Acc ? "acc" : "ber";
    j["start_z"] = c.start_z;
    return j;
}

nlohmann::ordered_json step_json(const StepRecord& s) {
    nlohmann::ordered_json j;
    j["state"] = std::string(viewpoint_name(s.state.viewpoint)) + "@z" +
                 std::to_string(s.state.z_level);
    j["action"] = action_name(s.action);
    j["decision"] = s.decision;
    j["correct"] = s.correct;
    j["score"] = s.score;
    j["revealed"] = s.revealed;
    return j;
}

}  // namespace

std::string Report::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["config"] = config_json(config);
    j["per_episode"] = nlohmann::ordered_json::array();
    for (const auto& e : per_episode) {
        nlohmann::ordered_json je;
        je["scene"] = e.scene;
        je["seed"] = e.seed;
        je["round1"] = nlohmann::ordered_json::array();
        for (const auto& s : e.round1) je["round1"].push_back(step_json(s));
        je["round2"] = nlohmann::ordered_json::array();
        for (const auto& s : e.round2) je["round2"].push_back(step_json(s));
        je["summary"] = {{"truth", e.summary_truth},
                         {"r1_info", e.r1_summary_info},
                         {"r1_decision", e.r1_summary_decision},
                         {"r1_correct", e.r1_summary_correct},
                         {"r2_info", e.r2_summary_info},
                         {"r2_decision", e.r2_summary_decision},
                         {"r2_correct", e.r2_summary_correct}};
        je["gates"] = {{"cm1", e.cm1_gate}, {"cm2", e.cm2_gate}};
        je["view_error"] = e.view_error;
        je["preferred_z"] = e.preferred_z;
        je["mi_running_mean"] = e.mi_running_mean;
        je["theta"] = e.theta;
        je["oracle_calls"] = e.oracle_calls;
        j["per_episode"].push_back(je);
    }
    j["per_seed"] = nlohmann::ordered_json::array();
    for (const auto& a : per_seed) {
        j["per_seed"].push_back({{"seed", a.seed},
                                 {"r1_metric", a.r1_metric},
                                 {"r2_metric", a.r2_metric},
                                 {"delta_on_r1", a.delta_on_r1}});
    }
    j["aggregate"] = {{"metric", metric_name},
                      {"mean", mean},
                      {"sigma", sigma},
                      {"delta_on_r1", delta_on_r1}};
    j["timing"] = {{"oracle_calls", oracle_calls},
                   {"renders", renders},
                   {"simulated_oracle_ms", simulated_oracle_ms}};
    return j.dump(2) + "\n";
}

std::string Report::to_csv() const {
    std::ostringstream out;
    out << "seed,scene,r1_correct,r2_correct,r1_info,r2_info,mi_running_mean\n";
    for (const auto& e : per_episode) {
        out << e.seed << ',' << e.scene << ',' << (e.r1_summary_correct ? 1 : 0) << ','
            << (e.r2_summary_correct ? 1 : 0) << ',' << e.r1_summary_info << ','
            << e.r2_summary_info << ',' << e.mi_running_mean << "\n";
    }
    return out.str();
}

DiagSamples collect_diag_samples(const std::vector<SceneSpec>& scenes, const RunConfig& config,
                                 std::uint64_t seed) {
    if (scenes.empty()) throw std::invalid_argument("empty dataset");
    const CameraState start{Viewpoint::Front, config.start_z};
    const auto tour = default_tour(start, config.action_budget);

    std::vector<ViewSources> pooled;
    std::vector<std::uint8_t> labels;
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        const Scene scene = generate_scene(scenes[i]);
        CounterRng stream(episode_stream_seed(seed, i), 0);
        for (const auto& v : run_tour(scene, tour, config, config.variant, stream, start)) {
            pooled.push_back(v.sources);
            labels.push_back(v.correct ? 1 : 0);
        }
    }

    MizoConfig mc = config.mizo_config(seed);
    mc.rounds = 50;
    mc.active_regret = true;
    const MizoRun trained = run_mizo(pooled, labels, mc);

    mc.active_regret = false;
    mc.rounds = 1;
    const MizoRun fixed = run_mizo(pooled, labels, mc);

    DiagSamples out;
    out.trained_scores = trained.view_scores;
    out.fixed_scores = fixed.view_scores;
    out.labels.assign(labels.begin(), labels.end());
    return out;
}

std::vector<SeparationDiag> diag_separation(const std::vector<SceneSpec>& scenes,
                                            const RunConfig& config) {
    std::vector<SeparationDiag> out;
    for (const std::uint64_t seed : config.seeds) {
        const DiagSamples s = collect_diag_samples(scenes, config, seed);
        std::vector<std::pair<double, bool>> trained, fixed;
        for (std::size_t i = 0; i < s.labels.size(); ++i) {
            trained.emplace_back(s.trained_scores[i], s.labels[i] != 0);
            fixed.emplace_back(s.fixed_scores[i], s.labels[i] != 0);
        }
        out.push_back({seed, separation_stats(trained), separation_stats(fixed)});
    }
    return out;
}

std::vector<PcdDiag> diag_pcd(const std::vector<SceneSpec>& scenes, const RunConfig& config) {
    std::vector<PcdDiag> out;
    for (const std::uint64_t seed : config.seeds) {
        const DiagSamples s = collect_diag_samples(scenes, config, seed);
        PcdDiag d;
        d.seed = seed;
        d.pcd_trained = pc_dispersion(s.trained_scores, s.labels, 6, kGibbsIterations, seed);
        d.pcd_fixed = pc_dispersion(s.fixed_scores, s.labels, 6, kGibbsIterations, seed);
        out.push_back(d);
    }
    return out;
}

namespace {

nlohmann::ordered_json stats_json(const SeparationStats& s) {
    return {{"auc", s.auc},
            {"median_correct", s.median_correct},
            {"median_incorrect", s.median_incorrect},
            {"median_gap", s.median_gap},
            {"kurtosis_correct", s.kurtosis_correct},
            {"kurtosis_incorrect", s.kurtosis_incorrect}};
}

}  // namespace

std::string separation_to_json(const RunConfig& config, const std::vector<SeparationDiag>& d) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["config"] = config_json(config);
    j["per_seed"] = nlohmann::ordered_json::array();
    double gap = 0.0;
    for (const auto& e : d) {
        j["per_seed"].push_back({{"seed", e.seed},
                                 {"trained", stats_json(e.trained)},
                                 {"fixed", stats_json(e.fixed)}});
        gap += e.trained.auc - e.fixed.auc;
    }
    j["aggregate"] = {{"mean_auc_gap", d.empty() ? 0.0 : gap / static_cast<double>(d.size())}};
    return j.dump(2) + "\n";
}

std::string pcd_to_json(const RunConfig& config, const std::vector<PcdDiag>& d) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["config"] = config_json(config);
    j["per_seed"] = nlohmann::ordered_json::array();
    std::size_t ordered = 0;
    for (const auto& e : d) {
        j["per_seed"].push_back(
            {{"seed", e.seed}, {"pcd_trained", e.pcd_trained}, {"pcd_fixed", e.pcd_fixed}});
        if (e.pcd_trained < e.pcd_fixed) ++ordered;
    }
    j["aggregate"] = {{"seeds_with_lower_trained_pcd", ordered}, {"seeds", d.size()}};
    return j.dump(2) + "\n";
}

}  // namespace mizo
