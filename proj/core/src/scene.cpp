#include "mizo/scene.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "json.hpp"

namespace mizo {

const char* viewpoint_name(Viewpoint v) {
    switch (v) {
        case Viewpoint::Front: return "front";
        case Viewpoint::Right: return "right";
        case Viewpoint::Back: return "back";
        case Viewpoint::Left: return "left";
        case Viewpoint::FrontUp: return "front_up45";
        case Viewpoint::BackUp: return "back_up45";
    }
    return "?";
}

std::string action_name(const CameraAction& a) {
    switch (a.kind) {
        case ActionKind::RotateX: return a.direction > 0 ? "rotate_x:+90" : "rotate_x:-90";
        case ActionKind::RotateY: return a.direction > 0 ? "rotate_y:+45" : "rotate_y:-45";
        case ActionKind::Zoom: return a.direction > 0 ? "zoom:in" : "zoom:out";
    }
    return "?";
}

namespace {

bool is_cardinal(Viewpoint v) {
    return v == Viewpoint::Front || v == Viewpoint::Right || v == Viewpoint::Back ||
           v == Viewpoint::Left;
}

}  // namespace

CameraState apply_action(const CameraState& state, const CameraAction& action) {
    CameraState next = state;
    switch (action.kind) {
        case ActionKind::RotateX: {
            if (!is_cardinal(state.viewpoint))
                throw std::invalid_argument("x-rotation requires a cardinal viewpoint");
            const int idx = static_cast<int>(state.viewpoint);
            next.viewpoint = static_cast<Viewpoint>(((idx + (action.direction > 0 ? 1 : 3)) % 4));
            break;
        }
        case ActionKind::RotateY: {
            if (action.direction > 0) {
                if (state.viewpoint == Viewpoint::Front) next.viewpoint = Viewpoint::FrontUp;
                else if (state.viewpoint == Viewpoint::Back) next.viewpoint = Viewpoint::BackUp;
                else throw std::invalid_argument("y-rotation constrained to front or back");
            } else {
                if (state.viewpoint == Viewpoint::FrontUp) next.viewpoint = Viewpoint::Front;
                else if (state.viewpoint == Viewpoint::BackUp) next.viewpoint = Viewpoint::Back;
                else throw std::invalid_argument("y-rotation constrained to front or back");
            }
            break;
        }
        case ActionKind::Zoom: {
            if (action.direction > 0) {
                if (state.z_level + 1 >= kZoomLevels) throw std::invalid_argument("zoom bound");
                next.z_level = state.z_level + 1;
            } else {
                if (state.z_level == 0) throw std::invalid_argument("zoom bound");
                next.z_level = state.z_level - 1;
            }
            break;
        }
    }
    return next;
}

std::vector<CameraAction> rotation_path(Viewpoint from, Viewpoint to) {
    if (from == to) return {};
    const std::vector<CameraAction> moves = {
        {ActionKind::RotateX, 1}, {ActionKind::RotateX, -1},
        {ActionKind::RotateY, 1}, {ActionKind::RotateY, -1}};
    std::array<int, kViewpoints> prev_vp;
    std::array<int, kViewpoints> prev_mv;
    prev_vp.fill(-1);
    prev_mv.fill(-1);
    std::deque<Viewpoint> frontier{from};
    prev_vp[static_cast<std::size_t>(from)] = static_cast<int>(from);
    while (!frontier.empty()) {
        const Viewpoint cur = frontier.front();
        frontier.pop_front();
        if (cur == to) break;
        for (std::size_t m = 0; m < moves.size(); ++m) {
            CameraState probe{cur, 1};
            Viewpoint nxt;
            try {
                nxt = apply_action(probe, moves[m]).viewpoint;
            } catch (const std::invalid_argument&) {
                continue;
            }
            auto& p = prev_vp[static_cast<std::size_t>(nxt)];
            if (p >= 0) continue;
            p = static_cast<int>(cur);
            prev_mv[static_cast<std::size_t>(nxt)] = static_cast<int>(m);
            frontier.push_back(nxt);
        }
    }
    std::vector<CameraAction> path;
    Viewpoint cur = to;
    while (cur != from) {
        const std::size_t c = static_cast<std::size_t>(cur);
        path.push_back(moves[static_cast<std::size_t>(prev_mv[c])]);
        cur = static_cast<Viewpoint>(prev_vp[c]);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

const std::vector<std::string>& position_groups() {
    static const std::vector<std::string> groups = {"center", "north", "south",
                                                    "east",   "west",  "mid"};
    return groups;
}

void SceneSpec::validate() const {
    if (objects.empty()) throw std::invalid_argument("scene needs at least one object");
    for (const auto& o : objects) {
        if (o.sides < 3) throw std::invalid_argument("polygon needs at least 3 sides");
        const auto& groups = position_groups();
        if (std::find(groups.begin(), groups.end(), o.position) == groups.end())
            throw std::invalid_argument("unknown position group '" + o.position + "'");
        if (o.features.empty()) throw std::invalid_argument("object needs a body feature");
        for (const auto& f : o.features) {
            for (double v : f.visibility) {
                if (v < 0.0 || v > 1.0)
                    throw std::invalid_argument("visibility fraction out of range");
            }
        }
    }
    if (complexity != "uniform" && complexity != "complex")
        throw std::invalid_argument("complexity must be uniform or complex");
}

std::string SceneSpec::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["objects"] = nlohmann::ordered_json::array();
    for (const auto& o : objects) {
        nlohmann::ordered_json jo;
        jo["sides"] = o.sides;
        jo["color"] = {o.color[0], o.color[1], o.color[2]};
        jo["position"] = o.position;
        jo["features"] = nlohmann::ordered_json::array();
        for (const auto& f : o.features) {
            nlohmann::ordered_json jf;
            jf["name"] = f.name;
            jf["visibility"] = f.visibility;
            jo["features"].push_back(jf);
        }
        j["objects"].push_back(jo);
    }
    j["occluder"] = occluder;
    j["complexity"] = complexity;
    j["description"] = description;
    j["summary_truth"] = summary_truth;
    j["seed"] = seed;
    return j.dump(2);
}

SceneSpec SceneSpec::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    SceneSpec s;
    s.name = j.at("name").get<std::string>();
    for (const auto& jo : j.at("objects")) {
        ObjectSpec o;
        o.sides = jo.at("sides").get<int>();
        const auto c = jo.at("color");
        o.color = {c[0].get<std::uint8_t>(), c[1].get<std::uint8_t>(), c[2].get<std::uint8_t>()};
        o.position = jo.at("position").get<std::string>();
        for (const auto& jf : jo.at("features")) {
            FeatureSpec f;
            f.name = jf.at("name").get<std::string>();
            const auto vis = jf.at("visibility");
            for (std::size_t v = 0; v < kViewpoints; ++v) f.visibility[v] = vis[v].get<double>();
            o.features.push_back(std::move(f));
        }
        s.objects.push_back(std::move(o));
    }
    s.occluder = j.at("occluder").get<bool>();
    s.complexity = j.at("complexity").get<std::string>();
    s.description = j.at("description").get<std::string>();
    s.summary_truth = j.at("summary_truth").get<bool>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.validate();
    return s;
}

namespace {

std::pair<double, double> position_offset(const std::string& tag) {
    if (tag == "center") return {0.0, 0.0};
    if (tag == "north") return {0.0, -26.0};
    if (tag == "south") return {0.0, 26.0};
    if (tag == "east") return {26.0, 0.0};
    if (tag == "west") return {-26.0, 0.0};
    return {14.0, -14.0};  // mid
}

// saturated marking palette, distinct from any body colour
const std::array<std::array<std::uint8_t, 3>, 6> kPatchPalette = {{{220, 30, 30},
                                                                   {30, 190, 40},
                                                                   {40, 60, 220},
                                                                   {235, 210, 30},
                                                                   {190, 40, 200},
                                                                   {30, 200, 200}}};

}  // namespace

Scene generate_scene(const SceneSpec& spec) {
    spec.validate();
    Scene scene;
    scene.spec = spec;
    CounterRng rng(spec.seed, 7);
    const double half = kRasterSize / 2.0;
    for (const auto& o : spec.objects) {
        Scene::Layout l;
        const auto [dx, dy] = position_offset(o.position);
        l.cx = half + dx + (rng.next_double() - 0.5) * 6.0;
        l.cy = half + dy + (rng.next_double() - 0.5) * 6.0;
        l.base_radius = 20.0 + rng.next_double() * 6.0;
        l.angle = rng.next_double() * 2.0 * 3.14159265358979323846;
        l.color = o.color;
        l.patch_color = kPatchPalette[rng.next_index(kPatchPalette.size())];
        scene.layout.push_back(l);
    }
    scene.stripe_period = 4 + rng.next_index(9);
    for (int i = 0; i < 3; ++i) scene.stripe_a[i] = static_cast<std::uint8_t>(60 + rng.next_index(140));
    for (int i = 0; i < 3; ++i) scene.stripe_b[i] = static_cast<std::uint8_t>(60 + rng.next_index(140));
    return scene;
}

double zoom_factor(std::size_t z_level) {
    if (z_level >= kZoomLevels) throw std::invalid_argument("zoom level out of range");
    return 0.7 + 0.1 * static_cast<double>(z_level);
}

namespace {

// per-pixel hash for the body speckle texture
std::uint64_t pixel_hash(std::uint64_t seed, std::size_t vp, long x, long y) {
    std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (vp + 1));
    z ^= 0xbf58476d1ce4e5b9ULL * (static_cast<std::uint64_t>(x) << 20 |
                                  static_cast<std::uint64_t>(y));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint8_t clamp_channel(int v) {
    return static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
}

// regular polygon point test around (cx, cy)
bool in_polygon(double px, double py, double cx, double cy, double radius, int sides,
                double angle) {
    const double dx = px - cx, dy = py - cy;
    const double dist = std::sqrt(dx * dx + dy * dy);
    if (dist > radius) return false;
    if (dist < 1e-9) return true;
    // distance to the polygon boundary along this ray
    const double theta = std::atan2(dy, dx) - angle;
    const double sector = 2.0 * 3.14159265358979323846 / static_cast<double>(sides);
    double local = std::fmod(theta, sector);
    if (local < 0.0) local += sector;
    const double apothem = radius * std::cos(sector / 2.0);
    const double boundary = apothem / std::cos(local - sector / 2.0);
    return dist <= boundary;
}

}  // namespace

RasterView render_view(const Scene& scene, const CameraState& state) {
    RasterView v;
    v.width = kRasterSize;
    v.height = kRasterSize;
    v.pixels.assign(3 * v.pixel_count(), 0);

    // background stripes vary per viewpoint but not per zoom
    CounterRng bg(scene.spec.seed, 100 + static_cast<std::size_t>(state.viewpoint));
    std::array<std::uint8_t, 3> sa = scene.stripe_a;
    std::array<std::uint8_t, 3> sb = scene.stripe_b;
    for (int i = 0; i < 3; ++i) {
        sa[i] = static_cast<std::uint8_t>((sa[i] + bg.next_index(90)) % 200 + 30);
        sb[i] = static_cast<std::uint8_t>((sb[i] + bg.next_index(90)) % 200 + 30);
    }
    const std::size_t period = 3 + bg.next_index(10);
    for (std::size_t y = 0; y < v.height; ++y) {
        const auto& c = (y / period) % 2 == 0 ? sa : sb;
        for (std::size_t x = 0; x < v.width; ++x) {
            std::uint8_t* p = v.pixels.data() + 3 * (y * v.width + x);
            p[0] = c[0];
            p[1] = c[1];
            p[2] = c[2];
        }
    }

    const std::size_t vp = static_cast<std::size_t>(state.viewpoint);
    const double scale = 0.55 + 0.15 * static_cast<double>(state.z_level);
    std::vector<std::int16_t> owner(v.pixel_count(), -1);
    v.masks.assign(scene.spec.objects.size(), std::vector<std::uint8_t>(v.pixel_count(), 0));

    for (std::size_t oi = 0; oi < scene.spec.objects.size(); ++oi) {
        const auto& obj = scene.spec.objects[oi];
        const auto& lay = scene.layout[oi];
        const double radius = lay.base_radius * scale;
        const double body_vis = obj.features.front().visibility[vp];
        if (body_vis <= 0.0) continue;
        // per-viewpoint nudge keeps views distinguishable
        CounterRng place(scene.spec.seed, 200 + 16 * oi + vp);
        const double cx = lay.cx + (place.next_double() - 0.5) * 8.0;
        const double cy = lay.cy + (place.next_double() - 0.5) * 8.0;

        const double top = cy - radius;
        const double cut = top + body_vis * (2.0 * radius);
        const long y0 = std::max(0L, static_cast<long>(std::floor(top)));
        const long y1 = std::min(static_cast<long>(v.height) - 1,
                                 static_cast<long>(std::ceil(cy + radius)));
        const long x0 = std::max(0L, static_cast<long>(std::floor(cx - radius)));
        const long x1 = std::min(static_cast<long>(v.width) - 1,
                                 static_cast<long>(std::ceil(cx + radius)));
        for (long y = y0; y <= y1; ++y) {
            if (static_cast<double>(y) > cut) break;  // visibility clip from the top
            for (long x = x0; x <= x1; ++x) {
                if (!in_polygon(x + 0.5, y + 0.5, cx, cy, radius, obj.sides, lay.angle)) continue;
                const std::size_t px = static_cast<std::size_t>(y) * v.width +
                                       static_cast<std::size_t>(x);
                if (owner[px] >= 0) v.masks[static_cast<std::size_t>(owner[px])][px] = 0;
                owner[px] = static_cast<std::int16_t>(oi);
                v.masks[oi][px] = 1;
                std::uint8_t* p = v.pixels.data() + 3 * px;
                p[0] = lay.color[0];
                p[1] = lay.color[1];
                p[2] = lay.color[2];
                // luminance speckle, per-view texture on the body surface
                const std::uint64_t h = pixel_hash(scene.spec.seed, vp, x, y);
                if (h % 3 == 0) {
                    const int delta = static_cast<int>((h >> 8) & 127) - 64;
                    p[0] = clamp_channel(p[0] + delta);
                    p[1] = clamp_channel(p[1] + delta);
                    p[2] = clamp_channel(p[2] + delta);
                }
            }
        }
        // patch features: concentric smaller polygons, area tracking visibility
        for (std::size_t fi = 1; fi < obj.features.size(); ++fi) {
            const double vis = obj.features[fi].visibility[vp];
            if (vis <= 0.0) continue;
            const double pr = 0.8 * radius * std::sqrt(vis);
            const double ang = lay.angle + 2.0 * 3.14159265358979323846 *
                                               static_cast<double>(fi) /
                                               static_cast<double>(obj.features.size());
            const double pcx = cx + 0.2 * radius * std::cos(ang);
            const double pcy = cy + 0.2 * radius * std::sin(ang);
            for (long y = y0; y <= y1; ++y) {
                for (long x = x0; x <= x1; ++x) {
                    const std::size_t px = static_cast<std::size_t>(y) * v.width +
                                           static_cast<std::size_t>(x);
                    if (owner[px] != static_cast<std::int16_t>(oi)) continue;  // stay inside the body
                    if (!in_polygon(x + 0.5, y + 0.5, pcx, pcy, pr, obj.sides, ang)) continue;
                    std::uint8_t* p = v.pixels.data() + 3 * px;
                    p[0] = lay.patch_color[0];
                    p[1] = lay.patch_color[1];
                    p[2] = lay.patch_color[2];
                    // same speckle as the body, so edge statistics stay
                    // comparable whatever the marking covers
                    const std::uint64_t h = pixel_hash(scene.spec.seed, vp, x, y);
                    if (h % 3 == 0) {
                        const int delta = static_cast<int>((h >> 8) & 127) - 64;
                        p[0] = clamp_channel(p[0] + delta);
                        p[1] = clamp_channel(p[1] + delta);
                        p[2] = clamp_channel(p[2] + delta);
                    }
                }
            }
        }
    }
    return v;
}

Query view_line(const Scene& scene, Viewpoint vp) {
    const std::size_t v = static_cast<std::size_t>(vp);
    bool any_patch = false;
    for (const auto& o : scene.spec.objects) {
        if (o.features.size() > 1) any_patch = true;
    }
    Query best;
    double best_vis = -1.0;
    double best_total = -1.0;
    for (std::size_t oi = 0; oi < scene.spec.objects.size(); ++oi) {
        const auto& o = scene.spec.objects[oi];
        for (std::size_t fi = any_patch ? 1u : 0u; fi < o.features.size(); ++fi) {
            if (any_patch && fi == 0) continue;
            const double vis = o.features[fi].visibility[v];
            double total = 0.0;
            for (double x : o.features[fi].visibility) total += x;
            const bool better = vis > best_vis + 1e-12 ||
                                (std::fabs(vis - best_vis) <= 1e-12 && total > best_total + 1e-12);
            if (better) {
                best_vis = vis;
                best_total = total;
                best = Query{Query::Kind::ViewMatch, oi, fi};
            }
        }
    }
    return best;
}

std::vector<Query> summary_features(const Scene& scene) {
    std::vector<Query> out;
    bool any_patch = false;
    for (const auto& o : scene.spec.objects)
        if (o.features.size() > 1) any_patch = true;
    for (std::size_t oi = 0; oi < scene.spec.objects.size(); ++oi) {
        const auto& o = scene.spec.objects[oi];
        if (any_patch) {
            for (std::size_t fi = 1; fi < o.features.size(); ++fi)
                out.push_back({Query::Kind::ViewMatch, oi, fi});
        } else {
            out.push_back({Query::Kind::ViewMatch, oi, 0});
        }
    }
    return out;
}

double ground_truth_info(const Scene& scene, const CameraState& state, const Query& query) {
    if (query.object >= scene.spec.objects.size())
        throw std::invalid_argument("unknown query template");
    const auto& obj = scene.spec.objects[query.object];
    if (query.kind == Query::Kind::ViewMatch) {
        if (query.feature >= obj.features.size())
            throw std::invalid_argument("unknown query template");
        return obj.features[query.feature].visibility[static_cast<std::size_t>(state.viewpoint)] *
               zoom_factor(state.z_level);
    }
    // single-state summary information: the weakest summary feature from here
    double info = 1.0;
    for (const Query& q : summary_features(scene)) {
        const auto& f = scene.spec.objects[q.object].features[q.feature];
        info = std::min(info, f.visibility[static_cast<std::size_t>(state.viewpoint)]);
    }
    return info * zoom_factor(state.z_level);
}

double oracle_error_probability(const OracleParams& params, double info) {
    if (params.force_p_err >= 0.0) return params.force_p_err;
    return 1.0 / (1.0 + std::exp(-(params.a - params.b * info)));
}

bool oracle_decide(bool truth, double info, const OracleParams& params, CounterRng& stream) {
    const double p_err = oracle_error_probability(params, info);
    const bool flip = stream.next_double() < p_err;
    return flip ? !truth : truth;
}

bool oracle_respond(const Scene& scene, const CameraState& state, const Query& query,
                    const OracleParams& params, CounterRng& stream) {
    const double info = ground_truth_info(scene, state, query);
    return oracle_decide(scene.spec.summary_truth, info, params, stream);
}

}  // namespace mizo
