#include "mizo/sources.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mizo {

namespace {

double srgb_to_linear(std::uint8_t c) {
    const double v = c / 255.0;
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double kCube = (6.0 / 29.0) * (6.0 / 29.0) * (6.0 / 29.0);
    constexpr double kScale = (29.0 / 6.0) * (29.0 / 6.0) / 3.0;
    return t > kCube ? std::cbrt(t) : kScale * t + 4.0 / 29.0;
}

}  // namespace

std::array<double, 3> rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const double rl = srgb_to_linear(r);
    const double gl = srgb_to_linear(g);
    const double bl = srgb_to_linear(b);
    // sRGB -> XYZ, D65 white
    const double x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
    const double y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
    const double z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;
    const double fx = lab_f(x / 0.95047);
    const double fy = lab_f(y / 1.0);
    const double fz = lab_f(z / 1.08883);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::array<double, 3> rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    double h = 0.0;
    if (d > 0.0) {
        if (mx == r) h = 60.0 * std::fmod((g - b) / d + 6.0, 6.0);
        else if (mx == g) h = 60.0 * ((b - r) / d + 2.0);
        else h = 60.0 * ((r - g) / d + 4.0);
    }
    const double s = mx == 0.0 ? 0.0 : d / mx;
    return {h, s, mx};
}

namespace {

std::size_t clamp_bin(double t, std::size_t bins) {
    if (t < 0.0) return 0;
    std::size_t b = static_cast<std::size_t>(t);
    return b >= bins ? bins - 1 : b;
}

std::size_t ab_joint_bin(double a, double b, std::size_t k) {
    const std::size_t ba = clamp_bin((a + 128.0) / 256.0 * static_cast<double>(k), k);
    const std::size_t bb = clamp_bin((b + 128.0) / 256.0 * static_cast<double>(k), k);
    return ba * k + bb;
}

}  // namespace

Histogram extract_global_color_hist(const RasterView& view, ColorSpace space,
                                    std::size_t bins_per_axis) {
    if (view.width == 0 || view.height == 0 || view.pixels.empty())
        throw std::invalid_argument("empty input");
    if (view.pixels.size() != 3 * view.pixel_count())
        throw std::invalid_argument("pixel buffer size mismatch");
    if (bins_per_axis < 2) throw std::invalid_argument("degenerate binning");

    if (space == ColorSpace::LabAb) {
        std::vector<double> counts(bins_per_axis * bins_per_axis, 0.0);
        for (std::size_t i = 0; i < view.pixel_count(); ++i) {
            const std::uint8_t* p = view.pixels.data() + 3 * i;
            const auto lab = rgb_to_lab(p[0], p[1], p[2]);
            counts[ab_joint_bin(lab[1], lab[2], bins_per_axis)] += 1.0;
        }
        return Histogram::from_counts(counts);
    }
    // hue bins plus the trailing achromatic bin
    std::vector<double> counts(bins_per_axis + 1, 0.0);
    for (std::size_t i = 0; i < view.pixel_count(); ++i) {
        const std::uint8_t* p = view.pixels.data() + 3 * i;
        const auto hsv = rgb_to_hsv(p[0], p[1], p[2]);
        if (hsv[1] <= kAchromaticSaturation) {
            counts[bins_per_axis] += 1.0;
        } else {
            counts[clamp_bin(hsv[0] / 360.0 * static_cast<double>(bins_per_axis), bins_per_axis)] += 1.0;
        }
    }
    return Histogram::from_counts(counts);
}

namespace {

double luma(const RasterView& v, std::size_t x, std::size_t y) {
    const std::uint8_t* p = v.rgb(x, y);
    return 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
}

}  // namespace

Histogram extract_local_edge_density(const RasterView& view) {
    view.validate();
    if (view.masks.empty()) throw std::invalid_argument("no objects segmented");

    // 3x3 Sobel; |Gx|,|Gy| <= 4*255, magnitude <= 4*255*sqrt(2)
    const double max_mag = 4.0 * 255.0 * std::sqrt(2.0);
    const double bin_width = max_mag / static_cast<double>(kEdgeMagnitudeBins) * (1.0 + 1e-12);
    std::vector<double> counts(kEdgeMagnitudeBins, 0.0);
    double pooled = 0.0;
    for (const auto& mask : view.masks) {
        for (std::size_t y = 1; y + 1 < view.height; ++y) {
            for (std::size_t x = 1; x + 1 < view.width; ++x) {
                if (!mask[y * view.width + x]) continue;
                const double tl = luma(view, x - 1, y - 1), tc = luma(view, x, y - 1), tr = luma(view, x + 1, y - 1);
                const double ml = luma(view, x - 1, y), mr = luma(view, x + 1, y);
                const double bl = luma(view, x - 1, y + 1), bc = luma(view, x, y + 1), br = luma(view, x + 1, y + 1);
                const double gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
                const double gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
                const double mag = std::sqrt(gx * gx + gy * gy);
                counts[clamp_bin(mag / bin_width, kEdgeMagnitudeBins)] += 1.0;
                pooled += 1.0;
            }
        }
    }
    if (pooled == 0.0) throw std::invalid_argument("no objects segmented");
    return Histogram::from_counts(counts);
}

ObjectHists extract_object_level_hists(const RasterView& view, std::size_t bins_per_axis) {
    view.validate();
    if (view.masks.empty()) throw std::invalid_argument("no objects segmented");
    if (bins_per_axis < 2) throw std::invalid_argument("degenerate binning");

    ObjectHists out;
    const std::size_t k = bins_per_axis;
    for (std::size_t m = 0; m < view.masks.size(); ++m) {
        const auto& mask = view.masks[m];
        std::vector<double> counts(k * k + k, 0.0);
        double inside = 0.0;
        for (std::size_t i = 0; i < view.pixel_count(); ++i) {
            if (!mask[i]) continue;
            const std::uint8_t* p = view.pixels.data() + 3 * i;
            const auto lab = rgb_to_lab(p[0], p[1], p[2]);
            counts[ab_joint_bin(lab[1], lab[2], k)] += 1.0;
            counts[k * k + clamp_bin(lab[0] / 100.0 * static_cast<double>(k), k)] += 1.0;
            inside += 1.0;
        }
        if (inside == 0.0) {
            out.skipped.push_back(m);
            continue;
        }
        out.hists.push_back(Histogram::from_counts(counts));
    }
    return out;
}

const Lexicon& Lexicon::builtin() {
    static const Lexicon lex = [] {
        Lexicon l;
        l.stopwords = {"a",  "an",  "the", "and", "or",  "of",  "on",  "in", "at",
                       "to", "is",  "are", "was", "were", "with", "by", "it", "its",
                       "this", "that", "there", "from", "for", "as", "be", "near"};
        l.descriptors = {"red",    "green",  "blue",   "yellow", "orange", "purple",
                         "white",  "black",  "gray",   "grey",   "brown",  "pink",
                         "cyan",   "magenta", "big",   "small",  "large",  "tiny",
                         "tall",   "short",  "wide",   "narrow", "flat",   "round",
                         "uniform", "complex", "plain", "bright", "dark",  "pale",
                         "left",   "right",  "upper",  "lower",  "front",  "back",
                         "striped", "solid", "smooth", "rough",  "matching", "distinct"};
        l.descriptor_suffixes = {"ish", "ous", "ful", "less", "able", "ive", "ed", "est"};
        return l;
    }();
    return lex;
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon " + path);
    Lexicon lex;
    std::vector<std::string>* section = nullptr;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line == "[stopwords]") section = &lex.stopwords;
        else if (line == "[descriptors]") section = &lex.descriptors;
        else if (line == "[descriptor_suffixes]") section = &lex.descriptor_suffixes;
        else if (line[0] == '[') throw std::runtime_error("unknown lexicon section " + line);
        else if (section) section->push_back(line);
        else throw std::runtime_error("lexicon entry before any section");
    }
    return lex;
}

std::string Lexicon::serialize() const {
    std::ostringstream out;
    out << "[stopwords]\n";
    for (const auto& w : stopwords) out << w << "\n";
    out << "[descriptors]\n";
    for (const auto& w : descriptors) out << w << "\n";
    out << "[descriptor_suffixes]\n";
    for (const auto& w : descriptor_suffixes) out << w << "\n";
    return out.str();
}

bool Lexicon::is_stopword(const std::string& w) const {
    return std::find(stopwords.begin(), stopwords.end(), w) != stopwords.end();
}

bool Lexicon::is_descriptor(const std::string& w) const {
    if (std::find(descriptors.begin(), descriptors.end(), w) != descriptors.end()) return true;
    for (const auto& suf : descriptor_suffixes) {
        if (w.size() > suf.size() + 2 && w.compare(w.size() - suf.size(), suf.size(), suf) == 0)
            return true;
    }
    return false;
}

ScalingFactors compute_scaling_factors(const std::string& description, const Lexicon& lexicon) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : description) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);

    ScalingFactors f;
    bool in_run = false;
    bool run_has_noun = false;
    auto close_run = [&] {
        if (in_run && run_has_noun) ++f.noun_phrase_count;
        in_run = false;
        run_has_noun = false;
    };
    for (const auto& t : tokens) {
        if (lexicon.is_stopword(t)) {
            close_run();
            continue;
        }
        in_run = true;
        if (lexicon.is_descriptor(t)) ++f.descriptor_count;
        else run_has_noun = true;  // non-stopword, non-descriptor tokens count as nouns
    }
    close_run();
    f.lambda_value = 1.0 + std::log(1.0 + static_cast<double>(f.noun_phrase_count) +
                                    static_cast<double>(f.descriptor_count));
    return f;
}

SourceSet SourceSet::extract(const RasterView& view, const std::string& description,
                             std::size_t bins_per_axis, const Lexicon& lexicon) {
    SourceSet s;
    s.global_ab = extract_global_color_hist(view, ColorSpace::LabAb, bins_per_axis);
    s.global_hue = extract_global_color_hist(view, ColorSpace::HsvHue, bins_per_axis);
    s.edge_density = extract_local_edge_density(view);
    s.object_lab = extract_object_level_hists(view, bins_per_axis).hists;
    s.lambda = compute_scaling_factors(description, lexicon);
    return s;
}

}  // namespace mizo
