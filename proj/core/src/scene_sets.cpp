#include <cmath>

#include "mizo/scene.hpp"

namespace mizo {

namespace {

const std::array<std::array<std::uint8_t, 3>, 8> kPalette = {{{200, 40, 40},
                                                              {40, 160, 60},
                                                              {50, 80, 200},
                                                              {220, 200, 40},
                                                              {170, 60, 190},
                                                              {40, 190, 190},
                                                              {230, 130, 40},
                                                              {120, 120, 220}}};

const char* kShapeNames[] = {"triangle", "square", "pentagon", "hexagon", "heptagon", "octagon"};

std::string shape_name(int sides) { return kShapeNames[(sides - 3) % 6]; }

std::string color_word(std::size_t palette_index) {
    static const char* names[] = {"red", "green", "blue", "yellow",
                                  "purple", "cyan", "orange", "pale"};
    return names[palette_index % 8];
}

}  // namespace

std::vector<SceneSpec> make_diagnostic_set(std::size_t uniform_count, std::size_t complex_count,
                                           std::uint64_t seed) {
    std::vector<SceneSpec> set;
    const auto& groups = position_groups();
    CounterRng rng(seed, 11);
    const std::size_t total = uniform_count + complex_count;
    for (std::size_t i = 0; i < total; ++i) {
        const bool uniform = i < uniform_count;
        SceneSpec s;
        char name[32];
        std::snprintf(name, sizeof(name), "diag_%03zu", i);
        s.name = name;
        s.complexity = uniform ? "uniform" : "complex";
        s.occluder = false;
        s.summary_truth = i % 2 == 0;  // balanced for error-rate benchmarks
        s.seed = seed * 1000 + i;

        const std::size_t c0 = rng.next_index(kPalette.size());
        const std::size_t c1 = uniform ? c0 : (c0 + 1 + rng.next_index(kPalette.size() - 1)) %
                                                  kPalette.size();
        const int sides0 = 3 + static_cast<int>(rng.next_index(6));
        const int sides1 = uniform ? sides0 : 3 + static_cast<int>(rng.next_index(6));

        // one marking-visibility pattern per scene, shared by both objects
        std::array<double, kViewpoints> pattern{};
        for (std::size_t v = 0; v < kViewpoints; ++v)
            pattern[v] = static_cast<double>(rng.next_index(4)) / 3.0;
        pattern[rng.next_index(kViewpoints)] = 1.0;

        for (std::size_t o = 0; o < 2; ++o) {
            ObjectSpec obj;
            obj.sides = o == 0 ? sides0 : sides1;
            // neutral bodies keep the object-level base distribution comparable
            // across scenes; the planted markings carry the per-view signal
            obj.color = {120, 120, 120};
            obj.position = groups[(i + (o == 0 ? 0 : 3)) % groups.size()];
            FeatureSpec body;
            body.name = "body";
            body.visibility.fill(1.0);
            obj.features.push_back(body);
            FeatureSpec patch;
            patch.name = o == 0 ? "marking_a" : "marking_b";
            patch.visibility = pattern;
            obj.features.push_back(patch);
            s.objects.push_back(obj);
        }
        // one fixed phrasing pattern, so text scaling matches across the set
        s.description = "a " + color_word(c0) + " " + shape_name(sides0) + " and a " +
                        color_word(c1) + " " + shape_name(sides1) + " near a striped panel";
        set.push_back(std::move(s));
    }
    return set;
}

std::vector<SceneSpec> make_occlusion_set(std::size_t count, std::uint64_t seed) {
    std::vector<SceneSpec> set;
    const auto& groups = position_groups();
    CounterRng rng(seed, 13);
    for (std::size_t i = 0; i < count; ++i) {
        SceneSpec s;
        char name[32];
        std::snprintf(name, sizeof(name), "occl_%03zu", i);
        s.name = name;
        s.complexity = "complex";
        s.occluder = true;
        s.summary_truth = true;
        s.seed = seed * 1000 + i;

        const std::size_t c0 = rng.next_index(kPalette.size());
        const std::size_t c1 = (c0 + 2 + rng.next_index(3)) % kPalette.size();

        ObjectSpec front_obj;
        front_obj.sides = 3 + static_cast<int>(rng.next_index(6));
        front_obj.color = kPalette[c0];
        front_obj.position = groups[1];  // north
        FeatureSpec fa;
        fa.name = "front_body";
        fa.visibility = {1.0, 0.5, 0.0, 0.5, 1.0, 0.0};
        front_obj.features.push_back(fa);

        ObjectSpec back_obj;
        back_obj.sides = 3 + static_cast<int>(rng.next_index(6));
        back_obj.color = kPalette[c1];
        back_obj.position = groups[2];  // south, behind the partition
        FeatureSpec fb;
        fb.name = "back_body";
        fb.visibility = {0.0, 0.0, 0.4, 0.0, 0.0, 1.0};
        back_obj.features.push_back(fb);

        s.objects.push_back(front_obj);
        s.objects.push_back(back_obj);
        s.description = "a " + color_word(c0) + " " + shape_name(front_obj.sides) + " and a " +
                        color_word(c1) + " " + shape_name(back_obj.sides) +
                        " on opposite sides of a partition";
        set.push_back(std::move(s));
    }
    return set;
}

std::vector<SceneSpec> make_feature_id_set(std::size_t count, std::uint64_t seed) {
    std::vector<SceneSpec> set;
    const auto& groups = position_groups();
    CounterRng rng(seed, 17);
    for (std::size_t i = 0; i < count; ++i) {
        SceneSpec s;
        char name[32];
        std::snprintf(name, sizeof(name), "feat_%03zu", i);
        s.name = name;
        s.complexity = "uniform";
        s.occluder = false;
        s.summary_truth = true;
        s.seed = seed * 1000 + i;

        ObjectSpec obj;
        obj.sides = 3 + static_cast<int>(rng.next_index(6));
        obj.color = kPalette[rng.next_index(kPalette.size())];
        obj.position = groups[i % groups.size()];
        FeatureSpec body;
        body.name = "body";
        body.visibility.fill(1.0);
        obj.features.push_back(body);

        // the named feature sits on the far side of the object: fully visible
        // from back or the elevated back view, faintly hinted from the right
        FeatureSpec feat;
        feat.name = "marking";
        feat.visibility.fill(0.0);
        const Viewpoint planted = i % 2 == 0 ? Viewpoint::Back : Viewpoint::BackUp;
        feat.visibility[static_cast<std::size_t>(planted)] = 1.0;
        feat.visibility[static_cast<std::size_t>(Viewpoint::Right)] =
            0.2 + 0.1 * rng.next_double();
        obj.features.push_back(feat);
        s.objects.push_back(obj);

        s.description = "a " + color_word(0) + " marking on a " + shape_name(obj.sides) +
                        " visible from a single side";
        set.push_back(std::move(s));
    }
    return set;
}

}  // namespace mizo
