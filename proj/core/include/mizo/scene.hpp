#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mizo/raster.hpp"
#include "mizo/rng.hpp"

namespace mizo {

inline constexpr std::size_t kViewpoints = 6;
inline constexpr std::size_t kZoomLevels = 4;

enum class Viewpoint : std::size_t {
    Front = 0, Right = 1, Back = 2, Left = 3, FrontUp = 4, BackUp = 5
};

const char* viewpoint_name(Viewpoint v);

// One of the 24 legal camera states. z_level 0 is the outermost stop and
// kZoomLevels-1 the nearest to the scene.
struct CameraState {
    Viewpoint viewpoint = Viewpoint::Front;
    std::size_t z_level = 0;

    std::size_t node_index() const {
        return static_cast<std::size_t>(viewpoint) * kZoomLevels + z_level;
    }
    bool operator==(const CameraState&) const = default;
};

enum class ActionKind { RotateX, RotateY, Zoom };

// direction: +1 / -1. RotateX +1 steps front->right->back->left->front.
// RotateY +1 raises front/back to the elevated variant. Zoom +1 moves one
// level nearer.
struct CameraAction {
    ActionKind kind = ActionKind::RotateX;
    int direction = 1;

    bool operator==(const CameraAction&) const = default;
};

std::string action_name(const CameraAction& a);

// Applies an action; throws on the documented illegal moves.
CameraState apply_action(const CameraState& state, const CameraAction& action);

// Shortest rotation sequence between viewpoints (BFS with a fixed expansion
// order: rx+, rx-, ry+, ry-).
std::vector<CameraAction> rotation_path(Viewpoint from, Viewpoint to);

// --- synthetic scenes -------------------------------------------------------

struct FeatureSpec {
    std::string name;
    std::array<double, kViewpoints> visibility{};  // fraction in [0, 1] per viewpoint
};

struct ObjectSpec {
    int sides = 4;                                  // polygon side count >= 3
    std::array<std::uint8_t, 3> color{128, 128, 128};
    std::string position;                           // one of the 6 position groups
    std::vector<FeatureSpec> features;              // [0] is the body, rest are patches
};

const std::vector<std::string>& position_groups();

struct SceneSpec {
    std::string name;
    std::vector<ObjectSpec> objects;
    bool occluder = false;
    std::string complexity = "uniform";             // "uniform" | "complex"
    std::string description;
    bool summary_truth = true;                      // does the description match the scene
    std::uint64_t seed = 0;

    void validate() const;
    std::string to_json() const;
    static SceneSpec from_json(const std::string& text);
};

// Materialized scene: per-object placement and palette, fully determined by
// the spec (and its seed).
struct Scene {
    SceneSpec spec;
    struct Layout {
        double cx = 0.0, cy = 0.0;      // center at base zoom, raster coordinates
        double base_radius = 0.0;
        double angle = 0.0;             // polygon rotation
        std::array<std::uint8_t, 3> color{};
        std::array<std::uint8_t, 3> patch_color{};
    };
    std::vector<Layout> layout;
    std::array<std::uint8_t, 3> stripe_a{};
    std::array<std::uint8_t, 3> stripe_b{};
    std::size_t stripe_period = 8;
};

Scene generate_scene(const SceneSpec& spec);

inline constexpr std::size_t kRasterSize = 128;

// zoom proximity scaling: {0.7, 0.8, 0.9, 1.0} from outermost to nearest
double zoom_factor(std::size_t z_level);

// Deterministic flat-shaded render with per-object masks. Object size scales
// with zoom; each feature's visible fraction clips its drawing.
RasterView render_view(const Scene& scene, const CameraState& state);

// --- decision oracle --------------------------------------------------------

struct Query {
    enum class Kind { ViewMatch, SceneSummary };
    Kind kind = Kind::ViewMatch;
    std::size_t object = 0;
    std::size_t feature = 0;
};

// The (object, feature) a viewpoint's description line refers to: the patch
// feature with maximum visibility from the viewpoint (bodies only when no
// patches exist); an all-zero viewpoint falls back to the globally most
// visible candidate, ties to the lowest index.
Query view_line(const Scene& scene, Viewpoint vp);

// Features the scene-summary question refers to: all patch features when any
// exist, otherwise the object bodies.
std::vector<Query> summary_features(const Scene& scene);

struct OracleParams {
    double a = 1.0;                 // zero-information error level logistic(a)
    double b = 3.5;                 // information sensitivity
    double force_p_err = -1.0;      // >= 0 overrides the computed error rate
    double latency_ms = 25.0;       // simulated per-call latency, for timing reports
};

// Visibility of the queried feature scaled by zoom proximity, in [0, 1].
double ground_truth_info(const Scene& scene, const CameraState& state, const Query& query);

double oracle_error_probability(const OracleParams& params, double info);

// Flips `truth` with probability p_err(info); consumes exactly one draw.
bool oracle_decide(bool truth, double info, const OracleParams& params, CounterRng& stream);

// Per-view decision for the query: ground truth is the scene's match flag,
// flipped with the state-dependent error probability.
bool oracle_respond(const Scene& scene, const CameraState& state, const Query& query,
                    const OracleParams& params, CounterRng& stream);

// --- generated scene sets ----------------------------------------------------

std::vector<SceneSpec> make_diagnostic_set(std::size_t uniform_count = 24,
                                           std::size_t complex_count = 24,
                                           std::uint64_t seed = 1);
std::vector<SceneSpec> make_occlusion_set(std::size_t count = 12, std::uint64_t seed = 2);
std::vector<SceneSpec> make_feature_id_set(std::size_t count = 12, std::uint64_t seed = 3);

}  // namespace mizo
