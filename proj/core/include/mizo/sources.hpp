#pragma once

#include <array>
#include <string>
#include <vector>

#include "mizo/histogram.hpp"
#include "mizo/raster.hpp"

namespace mizo {

enum class ColorSpace { LabAb, HsvHue };

// D65 sRGB -> CIELAB. Returns (L, a, b).
std::array<double, 3> rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Standard hexcone RGB -> HSV. Returns (h in [0,360), s in [0,1], v in [0,1]).
std::array<double, 3> rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Pixels at or below this saturation have no stable hue and are routed to a
// dedicated achromatic bin appended after the hue bins.
inline constexpr double kAchromaticSaturation = 0.05;

// Global colour histogram. LabAb yields a joint (a, b) histogram flattened to
// bins_per_axis^2 bins with both axes clamped to [-128, 128). HsvHue yields
// bins_per_axis hue bins plus the achromatic bin.
Histogram extract_global_color_hist(const RasterView& view, ColorSpace space,
                                    std::size_t bins_per_axis);

inline constexpr std::size_t kEdgeMagnitudeBins = 16;

// Sobel gradient magnitudes over the grayscale image, pooled across all mask
// interiors, binned into 16 fixed-width intervals over the representable
// magnitude range. Constant regions concentrate in bin 0.
Histogram extract_local_edge_density(const RasterView& view);

struct ObjectHists {
    std::vector<Histogram> hists;          // one per non-empty mask
    std::vector<std::size_t> skipped;      // indices of zero-pixel masks
};

// Per-mask joint (a, b) histogram concatenated with a 1-D L histogram,
// renormalized: bins_per_axis^2 + bins_per_axis bins per object.
ObjectHists extract_object_level_hists(const RasterView& view, std::size_t bins_per_axis);

struct ScalingFactors {
    std::size_t noun_phrase_count = 0;
    std::size_t descriptor_count = 0;
    double lambda_value = 1.0;
};

// Deterministic rule lexicon: stopwords, descriptor wordlist and suffix
// rules. Sections are introduced by [stopwords], [descriptors],
// [descriptor_suffixes]; one entry per line, '#' comments allowed.
struct Lexicon {
    std::vector<std::string> stopwords;
    std::vector<std::string> descriptors;
    std::vector<std::string> descriptor_suffixes;

    static const Lexicon& builtin();
    static Lexicon load(const std::string& path);
    std::string serialize() const;

    bool is_stopword(const std::string& w) const;
    bool is_descriptor(const std::string& w) const;
};

// noun_phrase_count = maximal runs of non-stopword tokens containing at least
// one non-descriptor token; descriptor_count = descriptor tokens;
// lambda = 1 + ln(1 + noun_phrase_count + descriptor_count).
ScalingFactors compute_scaling_factors(const std::string& description,
                                       const Lexicon& lexicon = Lexicon::builtin());

inline constexpr std::size_t kColorBinsPerAxis = 8;

// Named entropy sources for one view plus the text scaling factor.
struct SourceSet {
    Histogram global_ab;                 // GO
    Histogram global_hue;                // GH
    Histogram edge_density;              // LED
    std::vector<Histogram> object_lab;   // OL, one per mask
    ScalingFactors lambda;

    static SourceSet extract(const RasterView& view, const std::string& description,
                             std::size_t bins_per_axis = kColorBinsPerAxis,
                             const Lexicon& lexicon = Lexicon::builtin());
};

}  // namespace mizo
