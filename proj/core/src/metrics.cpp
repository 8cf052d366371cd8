#include "mizo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mizo/rng.hpp"

namespace mizo {

double ber(const ConfusionCounts& c) {
    if (c.fp + c.tn == 0 || c.fn + c.tp == 0) throw std::invalid_argument("undefined rate");
    const double fpr = static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
    const double fnr = static_cast<double>(c.fn) / static_cast<double>(c.fn + c.tp);
    return 0.5 * (fpr + fnr);
}

double acc_sq(const std::vector<std::pair<std::size_t, std::size_t>>& per_scene) {
    if (per_scene.empty()) throw std::invalid_argument("no scenes");
    double total = 0.0;
    for (const auto& [correct, incorrect] : per_scene) {
        if (correct + incorrect == 0) throw std::invalid_argument("scene without decisions");
        total += static_cast<double>(correct) / static_cast<double>(correct + incorrect);
    }
    return 100.0 * total / static_cast<double>(per_scene.size());
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double excess_kurtosis(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    if (m2 <= 0.0) return 0.0;
    return m4 / (m2 * m2) - 3.0;
}

}  // namespace

SeparationStats separation_stats(const std::vector<std::pair<double, bool>>& scores) {
    std::vector<double> pos, neg;
    for (const auto& [s, correct] : scores) (correct ? pos : neg).push_back(s);
    if (pos.empty() || neg.empty()) throw std::invalid_argument("single class");

    SeparationStats out;
    out.median_correct = median_of(pos);
    out.median_incorrect = median_of(neg);
    out.median_gap = out.median_correct - out.median_incorrect;
    out.kurtosis_correct = excess_kurtosis(pos);
    out.kurtosis_incorrect = excess_kurtosis(neg);

    // Mann-Whitney AUC via joint ranking with midranks for ties
    std::vector<std::pair<double, bool>> all(scores);
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k) {
            if (all[k].second) rank_sum_pos += midrank;
        }
        i = j;
    }
    const double np = static_cast<double>(pos.size());
    const double nn = static_cast<double>(neg.size());
    out.auc = (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
    return out;
}

namespace {

double log_likelihood(double beta, const std::vector<double>& x, const std::vector<int>& y) {
    double ll = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = beta * x[i];
        // log p(y) = y*z - log(1 + e^z), computed stably
        const double log1pe = z > 30.0 ? z : std::log1p(std::exp(z));
        ll += static_cast<double>(y[i]) * z - log1pe;
    }
    return ll;
}

double sample_sigma(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

PosteriorSummary gibbs_logistic(const std::vector<double>& x, const std::vector<int>& y,
                                std::size_t iterations, std::uint64_t seed) {
    if (x.size() != y.size()) throw std::invalid_argument("size mismatch");
    if (iterations < 100) throw std::invalid_argument("too few iterations");
    if (!x.empty()) {
        bool seen0 = false, seen1 = false;
        for (int yi : y) (yi ? seen1 : seen0) = true;
        if (!seen0 || !seen1) throw std::invalid_argument("degenerate target");
    }

    CounterRng rng(seed, 0x6b5);
    double beta = 0.0;
    double ll = log_likelihood(beta, x, y);
    PosteriorSummary out;
    out.beta_samples.reserve(iterations > kGibbsBurnIn ? iterations - kGibbsBurnIn : 0);
    for (std::size_t it = 0; it < iterations; ++it) {
        // independence proposal from the prior; prior terms cancel
        const double proposal = kBetaPriorSigma * rng.next_gaussian();
        const double ll_prop = log_likelihood(proposal, x, y);
        const double log_accept = ll_prop - ll;
        if (std::log(std::max(rng.next_double(), 1e-300)) < log_accept) {
            beta = proposal;
            ll = ll_prop;
        }
        if (it >= kGibbsBurnIn) out.beta_samples.push_back(beta);
    }
    const double sigma = std::max(sample_sigma(out.beta_samples), 1e-9);
    out.dispersion = 1.0 / sigma;
    return out;
}

double pc_dispersion(const std::vector<double>& scores, const std::vector<int>& labels,
                     std::size_t increment, std::size_t iterations, std::uint64_t seed) {
    if (scores.size() != labels.size()) throw std::invalid_argument("size mismatch");
    if (increment < 1) throw std::invalid_argument("increment must be positive");

    std::vector<double> concentrations;
    for (std::size_t end = increment; end <= scores.size(); end += increment) {
        bool seen0 = false, seen1 = false;
        for (std::size_t i = 0; i < end; ++i) (labels[i] ? seen1 : seen0) = true;
        if (!seen0 || !seen1) continue;
        const std::vector<double> xs(scores.begin(), scores.begin() + static_cast<long>(end));
        const std::vector<int> ys(labels.begin(), labels.begin() + static_cast<long>(end));
        concentrations.push_back(gibbs_logistic(xs, ys, iterations, seed).dispersion);
    }
    if (concentrations.size() < 2) throw std::invalid_argument("insufficient data");
    const auto [mn, mx] = std::minmax_element(concentrations.begin(), concentrations.end());
    return *mx - *mn;
}

}  // namespace mizo
