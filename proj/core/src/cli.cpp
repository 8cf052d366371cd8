#include "mizo/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mizo/harness.hpp"
#include "mizo/raster.hpp"

namespace mizo {

namespace {

namespace fs = std::filesystem;

std::string default_out(const std::string& leaf) {
    const char* env = std::getenv("MIZO_OUT_DIR");
    const fs::path base = env && *env ? fs::path(env) : fs::path("out");
    return (base / leaf).string();
}

void write_file(const std::string& path, const std::string& content) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

struct MetricFlag {
    std::string name = "go-led-ol-ar";

    void apply(RunConfig& config) const {
        std::string base = name;
        bool ar = false;
        const std::string suffix = "-ar";
        if (base.size() > suffix.size() &&
            base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
            ar = true;
            base = base.substr(0, base.size() - suffix.size());
        }
        config.variant = parse_variant(base);  // throws with the valid names
        config.active_regret = ar;
    }
};

void add_run_options(CLI::App* cmd, RunConfig& config, MetricFlag& metric,
                     std::vector<std::uint64_t>& seeds, std::string& out,
                     std::string& controller, std::string& task) {
    cmd->add_option("--dataset", config.dataset_dir, "directory of scene JSON files")
        ->required();
    cmd->add_option("--metric", metric.name,
                    "score variant: go-led-ol[-ar], gh-led[-ar], go, gh, led, ol");
    cmd->add_option("--controller", controller, "ours | default-tour");
    cmd->add_option("--budget", config.action_budget, "camera actions per round");
    cmd->add_option("--demos", config.demo_fraction, "demonstrations fraction of scenes");
    cmd->add_option("--feedback", config.feedback_fraction, "revealed label fraction: 1.0|0.5|0.2");
    cmd->add_option("--seed,--seeds", seeds, "run seeds")->delimiter(',');
    cmd->add_option("--oracle-a", config.oracle.a, "oracle zero-information level");
    cmd->add_option("--oracle-b", config.oracle.b, "oracle information sensitivity");
    cmd->add_option("--oracle-latency-ms", config.oracle.latency_ms,
                    "simulated per-call latency");
    cmd->add_option("--task", task, "acc | ber");
    cmd->add_option("--gate-tau", config.gate_tau, "central-unit acceptance threshold");
    cmd->add_option("--start-z", config.start_z, "initial zoom stop (0 outermost)");
    cmd->add_option("--out", out, "output report path");
}

void finalize_config(RunConfig& config, const MetricFlag& metric,
                     const std::vector<std::uint64_t>& seeds, const std::string& controller,
                     const std::string& task) {
    metric.apply(config);
    if (!seeds.empty()) config.seeds = seeds;
    if (controller == "ours") config.controller = ControllerKind::Ours;
    else if (controller == "default-tour") config.controller = ControllerKind::DefaultTour;
    else throw std::invalid_argument("unknown controller '" + controller +
                                     "' (valid: ours, default-tour)");
    if (task == "acc") config.task_metric = TaskMetric::Acc;
    else if (task == "ber") config.task_metric = TaskMetric::Ber;
    else throw std::invalid_argument("unknown task metric '" + task + "' (valid: acc, ber)");
    config.validate();
}

int cmd_gen_scenes(const std::string& set, std::size_t count, std::uint64_t seed,
                   const std::string& out_dir) {
    std::vector<SceneSpec> scenes;
    if (set == "diagnostic") {
        const std::size_t half = count / 2;
        scenes = make_diagnostic_set(half, count - half, seed);
    } else if (set == "occlusion") {
        scenes = make_occlusion_set(count, seed);
    } else if (set == "feature-id") {
        scenes = make_feature_id_set(count, seed);
    } else {
        throw std::invalid_argument("unknown scene set '" + set +
                                    "' (valid: diagnostic, occlusion, feature-id)");
    }
    fs::create_directories(out_dir);
    for (const auto& s : scenes)
        write_file((fs::path(out_dir) / (s.name + ".json")).string(), s.to_json() + "\n");
    std::cout << "wrote " << scenes.size() << " scenes to " << out_dir << "\n";
    return 0;
}

int cmd_demo(RunConfig config, const std::string& out_dir) {
    const auto scenes = load_dataset(config.dataset_dir);
    const std::size_t demo_count = static_cast<std::size_t>(
        std::ceil(config.demo_fraction * static_cast<double>(scenes.size())));
    const std::vector<SceneSpec> demo_scenes(
        scenes.begin(), scenes.begin() + static_cast<long>(std::min(demo_count, scenes.size() - 1)));
    const DemoStore demos = run_demonstrations(demo_scenes, config, config.seeds.front());
    const EpisodeRecord rec =
        run_episode(scenes[demo_scenes.size()], demo_scenes.size(), config,
                    config.seeds.front(), demos);

    fs::create_directories(out_dir);
    // dump the correction-round views for inspection
    const Scene scene = generate_scene(scenes[demo_scenes.size()]);
    for (std::size_t i = 0; i < rec.round2.size(); ++i) {
        const RasterView view = render_view(scene, rec.round2[i].state);
        char name[64];
        std::snprintf(name, sizeof(name), "r2_step%02zu.ppm", i);
        write_ppm((fs::path(out_dir) / name).string(), view);
        for (std::size_t m = 0; m < view.masks.size(); ++m) {
            std::snprintf(name, sizeof(name), "r2_step%02zu_mask%zu.pgm", i, m);
            write_pgm_mask((fs::path(out_dir) / name).string(), view.masks[m], view.width,
                           view.height);
        }
    }
    Report report;
    report.config = config;
    report.per_episode.push_back(rec);
    report.metric_name = "episode";
    write_file((fs::path(out_dir) / "episode.json").string(), report.to_json());
    std::cout << "episode written to " << out_dir << " (r1 correct " << rec.r1_summary_correct
              << ", r2 correct " << rec.r2_summary_correct << ")\n";
    return 0;
}

int cmd_bench(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto scenes = load_dataset(config.dataset_dir);
    const Report report = run_benchmark(scenes, config);
    const std::string path = config.out_path.empty() ? default_out("bench.json") : config.out_path;
    write_file(path, report.to_json());
    const fs::path csv = fs::path(path).replace_extension(".csv");
    write_file(csv.string(), report.to_csv());
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::cerr << "bench took " << ms << " ms wall clock\n";
    std::cout << "report written to " << path << "\n"
              << report.metric_name << " mean " << report.mean << " sigma " << report.sigma
              << " delta_on_r1 " << report.delta_on_r1 << "\n";
    return 0;
}

int cmd_diag_separation(const RunConfig& config) {
    const auto scenes = load_dataset(config.dataset_dir);
    const auto diags = diag_separation(scenes, config);
    const std::string path =
        config.out_path.empty() ? default_out("diag_separation.json") : config.out_path;
    write_file(path, separation_to_json(config, diags));
    double gap = 0.0;
    for (const auto& d : diags) gap += d.trained.auc - d.fixed.auc;
    std::cout << "report written to " << path << "\nmean auc gap "
              << (diags.empty() ? 0.0 : gap / static_cast<double>(diags.size())) << "\n";
    return 0;
}

int cmd_diag_pcd(const RunConfig& config) {
    const auto scenes = load_dataset(config.dataset_dir);
    const auto diags = diag_pcd(scenes, config);
    const std::string path =
        config.out_path.empty() ? default_out("diag_pcd.json") : config.out_path;
    write_file(path, pcd_to_json(config, diags));
    std::cout << "report written to " << path << "\n";
    for (const auto& d : diags)
        std::cout << "seed " << d.seed << ": pcd trained " << d.pcd_trained << " vs fixed "
                  << d.pcd_fixed << "\n";
    return 0;
}

int cmd_report(const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open " + in_path);
    nlohmann::json j;
    in >> j;
    const auto& agg = j.at("aggregate");
    std::cout << "schema " << j.value("schema_version", 0) << "\n";
    if (j.contains("config"))
        std::cout << "variant " << j["config"].value("variant", std::string("?")) << " controller "
                  << j["config"].value("controller", std::string("?")) << "\n";
    for (auto it = agg.begin(); it != agg.end(); ++it)
        std::cout << it.key() << ": " << it.value() << "\n";
    if (j.contains("per_seed")) {
        for (const auto& s : j["per_seed"]) {
            std::cout << "  seed";
            for (auto it = s.begin(); it != s.end(); ++it)
                std::cout << " " << it.key() << "=" << it.value();
            std::cout << "\n";
        }
    }
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"multi-information camera-control harness"};
    app.require_subcommand(1);

    // gen-scenes
    auto* gen = app.add_subcommand("gen-scenes", "emit a scene dataset");
    std::string gen_set = "diagnostic";
    std::size_t gen_count = 48;
    std::uint64_t gen_seed = 1;
    std::string gen_out = "scenes";
    gen->add_option("--set", gen_set, "diagnostic | occlusion | feature-id");
    gen->add_option("--count", gen_count, "number of scenes");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output directory")->required();

    RunConfig config;
    MetricFlag metric;
    std::vector<std::uint64_t> seeds;
    std::string controller = "ours";
    std::string task = "acc";
    std::string demo_out = "demo_out";

    auto* demo = app.add_subcommand("demo", "run one episode verbosely, dumping renders");
    add_run_options(demo, config, metric, seeds, demo_out, controller, task);

    RunConfig bench_config;
    MetricFlag bench_metric;
    std::vector<std::uint64_t> bench_seeds;
    std::string bench_controller = "ours";
    std::string bench_task = "acc";
    auto* bench = app.add_subcommand("bench", "run the two-round benchmark");
    add_run_options(bench, bench_config, bench_metric, bench_seeds, bench_config.out_path,
                    bench_controller, bench_task);

    RunConfig sep_config;
    MetricFlag sep_metric;
    std::vector<std::uint64_t> sep_seeds;
    std::string sep_controller = "ours";
    std::string sep_task = "acc";
    auto* sep = app.add_subcommand("diag-separation",
                                   "score-distribution separation diagnostic");
    add_run_options(sep, sep_config, sep_metric, sep_seeds, sep_config.out_path, sep_controller,
                    sep_task);

    RunConfig pcd_config;
    MetricFlag pcd_metric;
    std::vector<std::uint64_t> pcd_seeds;
    std::string pcd_controller = "ours";
    std::string pcd_task = "acc";
    auto* pcd = app.add_subcommand("diag-pcd", "posterior-concentration dispersion diagnostic");
    add_run_options(pcd, pcd_config, pcd_metric, pcd_seeds, pcd_config.out_path, pcd_controller,
                    pcd_task);

    auto* rep = app.add_subcommand("report", "print a report summary");
    std::string rep_in;
    rep->add_option("--in", rep_in, "report JSON path")->required();

    std::vector<const char*> argv;
    argv.push_back("mizo");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen_scenes(gen_set, gen_count, gen_seed, gen_out);
        if (demo->parsed()) {
            finalize_config(config, metric, seeds, controller, task);
            config.start_z = demo->count("--start-z") ? config.start_z : 0;
            return cmd_demo(config, demo_out);
        }
        if (bench->parsed()) {
            finalize_config(bench_config, bench_metric, bench_seeds, bench_controller, bench_task);
            return cmd_bench(bench_config);
        }
        if (sep->parsed()) {
            finalize_config(sep_config, sep_metric, sep_seeds, sep_controller, sep_task);
            return cmd_diag_separation(sep_config);
        }
        if (pcd->parsed()) {
            finalize_config(pcd_config, pcd_metric, pcd_seeds, pcd_controller, pcd_task);
            return cmd_diag_pcd(pcd_config);
        }
        if (rep->parsed()) return cmd_report(rep_in);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace mizo
