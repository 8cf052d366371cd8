#pragma once

#include <cstdint>
#include <vector>

namespace mizo {

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    void add(bool truth, bool decision) {
        if (truth && decision) ++tp;
        else if (!truth && decision) ++fp;
        else if (!truth && !decision) ++tn;
        else ++fn;
    }
};

// Balanced error rate (FPR + FNR) / 2.
double ber(const ConfusionCounts& c);

// 100 x mean over scenes of correct / (correct + incorrect).
double acc_sq(const std::vector<std::pair<std::size_t, std::size_t>>& per_scene);

struct SeparationStats {
    double median_correct = 0.0;
    double median_incorrect = 0.0;
    double median_gap = 0.0;             // correct minus incorrect
    double kurtosis_correct = 0.0;       // excess kurtosis per class
    double kurtosis_incorrect = 0.0;
    double auc = 0.0;                    // rank-based, ties counted half
};

SeparationStats separation_stats(const std::vector<std::pair<double, bool>>& scores);

struct PosteriorSummary {
    std::vector<double> beta_samples;
    double dispersion = 0.0;             // 1 / max(sigma, 1e-9)
};

inline constexpr std::size_t kGibbsIterations = 1000;
inline constexpr std::size_t kGibbsBurnIn = 200;
inline constexpr double kBetaPriorSigma = 2.0;

// Posterior of the single coefficient in y ~ Bernoulli(logistic(beta x)),
// normal prior N(0, 2^2), sampled with an independence Metropolis step
// proposing from the prior (the prior then cancels in the accept ratio).
// Burn-in is discarded. Empty data reproduces the prior.
PosteriorSummary gibbs_logistic(const std::vector<double>& x, const std::vector<int>& y,
                                std::size_t iterations, std::uint64_t seed);

// Max minus min posterior concentration (1/sigma of the beta posterior) over
// cumulative prefixes in steps of `increment`, starting at the first prefix
// containing both labels.
double pc_dispersion(const std::vector<double>& scores, const std::vector<int>& labels,
                     std::size_t increment = 6, std::size_t iterations = kGibbsIterations,
                     std::uint64_t seed = 0);

}  // namespace mizo
