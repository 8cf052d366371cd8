#include "mizo/mizo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mizo/rng.hpp"

#include "json.hpp"

namespace mizo {

MizoState MizoState::init(std::size_t n_sources, std::uint64_t seed, std::size_t feature_dims) {
    if (n_sources == 0) throw std::invalid_argument("need at least one source");
    MizoState s;
    s.theta_mix.assign(n_sources, 1.0 / static_cast<double>(n_sources));
    s.separator.w.assign(feature_dims, 0.0);
    s.rng_seed = seed;
    return s;
}

void MizoState::validate() const {
    if (theta_mix.empty()) throw std::invalid_argument("empty mixture weights");
    double total = 0.0;
    for (double t : theta_mix) {
        if (t < 0.0) throw std::invalid_argument("negative mixture weight");
        total += t;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("mixture weights off the simplex");
    double norm = 0.0;
    for (double w : separator.w) norm += w * w;
    norm = std::sqrt(norm);
    if (norm > 0.0 && std::fabs(separator.gamma * norm - 2.0) > 1e-6)
        throw std::invalid_argument("margin inconsistent with weight norm");
}

std::string MizoState::to_json() const {
    nlohmann::ordered_json j;
    j["theta_mix"] = theta_mix;
    j["phi"] = {{"step", phi.step}, {"feedback_available", phi.feedback_available}};
    j["mi_running_mean"] = mi_running_mean;
    j["accepted_count"] = accepted_count;
    j["loss_history"] = loss_history;
    j["separator"] = {{"w", separator.w}, {"bias", separator.bias}, {"gamma", separator.gamma}};
    j["rng_seed"] = rng_seed;
    j["step"] = step;
    return j.dump(2);
}

MizoState MizoState::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    MizoState s;
    s.theta_mix = j.at("theta_mix").get<std::vector<double>>();
    s.phi.step = j.at("phi").at("step").get<std::size_t>();
    s.phi.feedback_available = j.at("phi").at("feedback_available").get<bool>();
    s.mi_running_mean = j.at("mi_running_mean").get<double>();
    s.accepted_count = j.at("accepted_count").get<std::size_t>();
    s.loss_history = j.at("loss_history").get<std::vector<double>>();
    s.separator.w = j.at("separator").at("w").get<std::vector<double>>();
    s.separator.bias = j.at("separator").at("bias").get<double>();
    s.separator.gamma = j.at("separator").at("gamma").get<double>();
    s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    s.step = j.at("step").get<std::size_t>();
    return s;
}

std::vector<double> project_simplex(std::vector<double> v) {
    const std::size_t n = v.size();
    std::vector<double> u(v);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0;
    double shift = 0.0;
    std::size_t rho = 0;
    for (std::size_t j = 0; j < n; ++j) {
        css += u[j];
        const double candidate = (1.0 - css) / static_cast<double>(j + 1);
        if (u[j] + candidate > 0.0) {
            rho = j + 1;
            shift = candidate;
        }
    }
    for (double& x : v) x = std::max(0.0, x + shift);
    // guard against accumulated drift
    double total = std::accumulate(v.begin(), v.end(), 0.0);
    if (total <= 0.0) {
        std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(n));
    } else {
        for (double& x : v) x /= total;
    }
    (void)rho;
    return v;
}

std::vector<double> policy_weights(const std::vector<double>& theta,
                                   const std::vector<std::uint8_t>& available) {
    if (!available.empty() && available.size() != theta.size())
        throw std::invalid_argument("availability mask size mismatch");
    std::vector<double> pi(theta);
    if (!available.empty()) {
        for (std::size_t i = 0; i < pi.size(); ++i) {
            if (!available[i]) pi[i] = 0.0;
        }
    }
    const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
    if (total <= 0.0) throw std::invalid_argument("no available source has weight");
    for (double& p : pi) p /= total;
    return pi;
}

MixtureResult mixture_score(const std::vector<Histogram>& sources, const MizoState& state,
                            double lambda, const std::vector<std::uint8_t>& available) {
    if (sources.size() != state.theta_mix.size())
        throw std::invalid_argument("source count does not match mixture weights");
    if (sources.empty()) throw std::invalid_argument("empty source set");
    const std::size_t grid = sources.front().size();
    for (const auto& s : sources) {
        if (s.size() != grid) throw std::invalid_argument("sources not on a common grid");
    }
    const auto pi = policy_weights(state.theta_mix, available);

    MixtureResult out;
    out.distribution.bins.assign(grid, 0.0);
    for (std::size_t h = 0; h < sources.size(); ++h) {
        for (std::size_t b = 0; b < grid; ++b)
            out.distribution.bins[b] += pi[h] * sources[h].bins[b];
    }
    if (lambda != 1.0) {
        double total = 0.0;
        for (double& m : out.distribution.bins) {
            m = std::pow(m, lambda);
            total += m;
        }
        for (double& m : out.distribution.bins) m /= total;
    }
    out.score = entropy_of(out.distribution.bins);
    return out;
}

double mi_of_score(const std::vector<std::pair<double, bool>>& samples,
                   std::size_t score_bins, std::size_t proposal_count) {
    if (samples.size() < 2) throw std::invalid_argument("degenerate target");
    bool seen_true = false, seen_false = false;
    for (const auto& [s, y] : samples) (y ? seen_true : seen_false) = true;
    if (!seen_true || !seen_false) throw std::invalid_argument("degenerate target");

    std::vector<double> scores;
    scores.reserve(samples.size());
    for (const auto& [s, y] : samples) scores.push_back(s);
    std::set<double> distinct(scores.begin(), scores.end());
    const std::size_t bins = std::min(score_bins, distinct.size());
    if (bins < 2) return 0.0;  // constant score carries no information

    const CutPoints cuts = estimate_intervals(scores, bins, proposal_count);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(samples.size());
    for (const auto& [s, y] : samples)
        pairs.emplace_back(bin_of(s, cuts), y ? 1u : 0u);
    return mutual_information(JointTable::from_pairs(pairs, bins, 2));
}

double regret(const MizoState& state, double mi_t) {
    if (state.step < 1) throw std::invalid_argument("regret needs step >= 1");
    return state.mi_running_mean - mi_t;
}

std::vector<double> mean_direction(const std::vector<std::vector<double>>& directions) {
    if (directions.empty()) throw std::invalid_argument("no directions");
    std::vector<double> v(directions.front().size(), 0.0);
    for (const auto& d : directions) {
        if (d.size() != v.size()) throw std::invalid_argument("direction size mismatch");
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += d[i];
    }
    for (double& x : v) x /= static_cast<double>(directions.size());
    return v;
}

std::vector<double> zo_proposal(const MizoState& state, double current_loss,
                                const std::vector<std::vector<double>>& directions) {
    const double historical = state.loss_history.empty()
        ? 0.0
        : std::accumulate(state.loss_history.begin(), state.loss_history.end(), 0.0) /
              static_cast<double>(state.loss_history.size());
    const double coefficient = historical - current_loss;
    const auto v = mean_direction(directions);
    if (v.size() != state.theta_mix.size()) throw std::invalid_argument("direction size mismatch");
    std::vector<double> proposal(state.theta_mix);
    for (std::size_t i = 0; i < proposal.size(); ++i) proposal[i] += coefficient * v[i];
    return project_simplex(std::move(proposal));
}

MizoState zo_update_with_directions(const MizoState& state, double current_loss,
                                    const std::vector<std::vector<double>>& directions,
                                    const MiEval& mi_eval) {
    MizoState next = state;
    const auto proposal = zo_proposal(state, current_loss, directions);
    const double proposed_mi = mi_eval(proposal);
    // retained only if the running mean over accepted MI values would rise
    if (proposed_mi > state.mi_running_mean) {
        next.theta_mix = proposal;
        next.accepted_count = state.accepted_count + 1;
        next.mi_running_mean += (proposed_mi - next.mi_running_mean) /
                                static_cast<double>(next.accepted_count);
    }
    next.loss_history.push_back(current_loss);
    return next;
}

MizoState zo_update(const MizoState& state, double current_loss, std::size_t r,
                    const MiEval& mi_eval, std::size_t coordinate, double perturbation) {
    if (r < 1) throw std::invalid_argument("need at least one perturbation");
    const std::size_t n = state.theta_mix.size();
    CounterRng rng(state.rng_seed, 1 + state.loss_history.size());
    std::vector<std::vector<double>> directions;
    directions.reserve(r);
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<double> d(n, 0.0);
        const std::size_t i = coordinate == kAllCoordinates ? rng.next_index(n) : coordinate;
        const double sign = rng.next_sign();
        // coordinate bump on the simplex tangent (sums to zero)
        for (std::size_t a = 0; a < n; ++a)
            d[a] = sign * perturbation * ((a == i ? 1.0 : 0.0) - 1.0 / static_cast<double>(n));
        directions.push_back(std::move(d));
    }
    return zo_update_with_directions(state, current_loss, directions, mi_eval);
}

std::vector<UnitSample> classify_units(const Histogram& source, const JointTable& joint_with_y) {
    if (joint_with_y.dims.size() != 2 || joint_with_y.dims[1] != 2)
        throw std::invalid_argument("unit joint must be (bins, 2)");
    if (joint_with_y.dims[0] != source.size())
        throw std::invalid_argument("joint dims incompatible with source bins");

    const double p_y1 = joint_with_y.marginal({1}).mass[1];
    std::vector<UnitSample> units;
    units.reserve(source.size());
    for (std::size_t b = 0; b < source.size(); ++b) {
        const double p_b = joint_with_y.mass[2 * b] + joint_with_y.mass[2 * b + 1];
        const double p_b1 = joint_with_y.mass[2 * b + 1];
        double pmi = 0.0;
        if (p_b > 0.0 && p_b1 > 0.0 && p_y1 > 0.0)
            pmi = std::log2(p_b1 / (p_b * p_y1));
        UnitSample u;
        u.feature = {source.bins[b], p_b > 0.0 ? p_b1 / p_b : 0.0, pmi};
        u.orientation = pmi > 0.0 ? Orientation::Up : Orientation::Down;
        units.push_back(std::move(u));
    }
    return units;
}

MarginStep max_margin_step(const Separator& separator, const std::vector<UnitSample>& units,
                           double eta, int alpha) {
    MarginStep out{separator, false};
    if (alpha == 0) return out;
    std::size_t ups = 0, downs = 0;
    for (const auto& u : units) (u.orientation == Orientation::Up ? ups : downs)++;
    if (ups == 0 || downs == 0) return out;

    const std::size_t d = separator.w.size();
    std::vector<double> grad_w(d, 0.0);
    double grad_b = 0.0;
    for (const auto& u : units) {
        if (u.feature.size() != d) throw std::invalid_argument("unit feature size mismatch");
        const double label = u.orientation == Orientation::Up ? 1.0 : -1.0;
        double margin = separator.bias;
        for (std::size_t i = 0; i < d; ++i) margin += separator.w[i] * u.feature[i];
        if (label * margin < 1.0) {  // hinge violation
            for (std::size_t i = 0; i < d; ++i) grad_w[i] -= label * u.feature[i];
            grad_b -= label;
        }
    }
    const double inv_m = 1.0 / static_cast<double>(units.size());
    for (std::size_t i = 0; i < d; ++i)
        out.separator.w[i] -= eta * static_cast<double>(alpha) * grad_w[i] * inv_m;
    out.separator.bias -= eta * static_cast<double>(alpha) * grad_b * inv_m;

    double norm = 0.0;
    for (double w : out.separator.w) norm += w * w;
    norm = std::sqrt(norm);
    if (norm > 1.0) {
        for (double& w : out.separator.w) w /= norm;
        norm = 1.0;
    }
    out.separator.gamma = norm > 0.0 ? 2.0 / norm : 0.0;
    out.stepped = true;
    return out;
}

SourceVariant parse_variant(const std::string& name) {
    if (name == "go-led-ol") return SourceVariant::GoLedOl;
    if (name == "gh-led") return SourceVariant::GhLed;
    if (name == "go") return SourceVariant::Go;
    if (name == "gh") return SourceVariant::Gh;
    if (name == "led") return SourceVariant::Led;
    if (name == "ol") return SourceVariant::Ol;
    throw std::invalid_argument("unknown metric variant '" + name +
                                "' (valid: go-led-ol, gh-led, go, gh, led, ol)");
}

std::string variant_name(SourceVariant v) {
    switch (v) {
        case SourceVariant::GoLedOl: return "go-led-ol";
        case SourceVariant::GhLed: return "gh-led";
        case SourceVariant::Go: return "go";
        case SourceVariant::Gh: return "gh";
        case SourceVariant::Led: return "led";
        case SourceVariant::Ol: return "ol";
    }
    return "?";
}

std::size_t variant_component_count(SourceVariant v) {
    switch (v) {
        case SourceVariant::GoLedOl: return 3;
        case SourceVariant::GhLed: return 2;
        default: return 1;
    }
}

namespace {

Histogram mean_object_hist(const std::vector<Histogram>& ol, std::size_t grid) {
    if (ol.empty()) throw std::invalid_argument("no objects segmented");
    std::vector<double> acc(grid, 0.0);
    for (const auto& h : ol) {
        const Histogram r = h.resample(grid);
        for (std::size_t b = 0; b < grid; ++b) acc[b] += r.bins[b];
    }
    return Histogram::from_counts(acc);
}

}  // namespace

ViewSources mixture_components(const SourceSet& s, SourceVariant v, std::size_t grid) {
    ViewSources out;
    out.lambda = s.lambda.lambda_value;
    switch (v) {
        case SourceVariant::GoLedOl:
            out.components = {s.global_ab.resample(grid), s.edge_density.resample(grid),
                              mean_object_hist(s.object_lab, grid)};
            break;
        case SourceVariant::GhLed:
            out.components = {s.global_hue.resample(grid), s.edge_density.resample(grid)};
            break;
        case SourceVariant::Go: out.components = {s.global_ab.resample(grid)}; break;
        case SourceVariant::Gh: out.components = {s.global_hue.resample(grid)}; break;
        case SourceVariant::Led: out.components = {s.edge_density.resample(grid)}; break;
        case SourceVariant::Ol: out.components = {mean_object_hist(s.object_lab, grid)}; break;
    }
    return out;
}

std::vector<std::size_t> feedback_mask(std::size_t count, double fraction, std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0) throw std::invalid_argument("feedback fraction out of range");
    const std::size_t reveal = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(count)));
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    CounterRng rng(seed, 0);
    for (std::size_t i = count; i > 1; --i) {
        const std::size_t j = rng.next_index(i);
        std::swap(order[i - 1], order[j]);
    }
    order.resize(reveal);
    std::sort(order.begin(), order.end());
    return order;
}

MizoEngine::MizoEngine(std::size_t n_sources, const MizoConfig& config)
    : config_(config), state_(MizoState::init(n_sources, config.seed)) {
    if (config.rounds < 1) throw std::invalid_argument("rounds must be positive");
}

void MizoEngine::observe(const ViewSources& view, bool response, bool revealed) {
    if (view.components.size() != state_.theta_mix.size())
        throw std::invalid_argument("source count does not match mixture weights");
    ViewSources grid = view;
    for (auto& c : grid.components) c = c.resample(config_.common_grid);
    samples_.push_back(std::move(grid));
    responses_.push_back(response ? 1 : 0);
    revealed_.push_back(revealed ? 1 : 0);
    mi_dirty_ = true;
}

double MizoEngine::score(const ViewSources& view) const {
    ViewSources grid = view;
    for (auto& c : grid.components) c = c.resample(config_.common_grid);
    return mixture_score(grid.components, state_, grid.lambda).score;
}

double MizoEngine::evaluate(const std::vector<double>& theta) const {
    std::vector<std::pair<double, bool>> pairs;
    bool seen_true = false, seen_false = false;
    MizoState probe = state_;
    probe.theta_mix = theta;
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        if (!revealed_[k]) continue;
        pairs.emplace_back(mixture_score(samples_[k].components, probe, samples_[k].lambda).score,
                           responses_[k] != 0);
        (responses_[k] ? seen_true : seen_false) = true;
    }
    if (pairs.size() < 2 || !seen_true || !seen_false) return 0.0;
    return mi_of_score(pairs, config_.score_bins, config_.interval_proposals);
}

void MizoEngine::step() {
    const std::size_t n_sources = state_.theta_mix.size();
    const std::size_t t = state_.step + 1;
    state_.step = t;
    bool any_revealed = false;
    for (std::uint8_t r : revealed_) any_revealed = any_revealed || r;
    state_.phi = {t, any_revealed};

    const MiEval mi_eval = [this](const std::vector<double>& theta) { return evaluate(theta); };
    if (mi_dirty_) {
        current_mi_ = evaluate(state_.theta_mix);
        mi_dirty_ = false;
    }
    last_round_mi_ = current_mi_;
    last_regret_ = state_.mi_running_mean - current_mi_;

    if (!config_.active_regret) {
        // plain running mean, no weight adaptation and no separation step
        state_.accepted_count += 1;
        state_.mi_running_mean += (current_mi_ - state_.mi_running_mean) /
                                  static_cast<double>(state_.accepted_count);
        state_.loss_history.push_back(-current_mi_);
        return;
    }

    // global update over all coordinates, then per-component refinement
    for (std::size_t i = 0; i <= n_sources; ++i) {
        const std::size_t coordinate = i == 0 ? kAllCoordinates : i - 1;
        const std::size_t accepted_before = state_.accepted_count;
        state_ = zo_update(state_, -current_mi_, config_.zo_directions, mi_eval, coordinate,
                           config_.perturbation);
        if (state_.accepted_count != accepted_before)
            current_mi_ = evaluate(state_.theta_mix);
    }

    // initialise signed weight changes directly and retain the best one if the
    // running mean rises; this keeps the search moving when the loss history is
    // still flat and the finite-difference coefficient vanishes. Candidates per
    // component: a small bump either way, and the component taken on its own
    // (the extreme point of renormalizing against coordinate i).
    if (n_sources > 1) {
        std::vector<std::vector<double>> candidates;
        for (std::size_t i = 0; i < n_sources; ++i) {
            for (const double sign : {1.0, -1.0}) {
                std::vector<double> cand(state_.theta_mix);
                for (std::size_t a = 0; a < n_sources; ++a)
                    cand[a] += sign * config_.perturbation *
                               ((a == i ? 1.0 : 0.0) - 1.0 / static_cast<double>(n_sources));
                candidates.push_back(project_simplex(std::move(cand)));
            }
            if (config_.corner_trials) {
                std::vector<double> corner(n_sources, 0.0);
                corner[i] = 1.0;
                candidates.push_back(std::move(corner));
            }
        }
        std::vector<double> best_theta;
        double best_mi = state_.mi_running_mean;
        for (auto& cand : candidates) {
            const double mi = evaluate(cand);
            if (mi > best_mi) {
                best_mi = mi;
                best_theta = std::move(cand);
            }
        }
        if (!best_theta.empty()) {
            state_.theta_mix = std::move(best_theta);
            state_.accepted_count += 1;
            state_.mi_running_mean += (best_mi - state_.mi_running_mean) /
                                      static_cast<double>(state_.accepted_count);
            current_mi_ = best_mi;
        }
    }

    // unit separation on each source against the revealed responses
    const int alpha = any_revealed ? 1 : 0;
    if (alpha == 1) {
        const double eta_t = config_.eta0 / std::sqrt(static_cast<double>(t));
        for (std::size_t h = 0; h < n_sources; ++h) {
            std::vector<double> counts(config_.common_grid * 2, 0.0);
            for (std::size_t k = 0; k < samples_.size(); ++k) {
                if (!revealed_[k]) continue;
                const auto& hist = samples_[k].components[h];
                const std::size_t y = responses_[k] ? 1 : 0;
                for (std::size_t b = 0; b < config_.common_grid; ++b)
                    counts[2 * b + y] += hist.bins[b];
            }
            const JointTable joint = JointTable::from_counts({config_.common_grid, 2}, counts);
            const auto units = classify_units(joint.axis_histogram(0), joint);
            state_.separator = max_margin_step(state_.separator, units, eta_t, alpha).separator;
        }
    }
}

MizoRun run_mizo(const std::vector<ViewSources>& views,
                 const std::vector<std::uint8_t>& responses,
                 const MizoConfig& config) {
    if (config.rounds < 1) throw std::invalid_argument("rounds must be positive");
    if (views.empty()) throw std::invalid_argument("empty source set");
    if (responses.size() != views.size())
        throw std::invalid_argument("responses must match views");
    const std::size_t n_sources = views.front().components.size();
    if (n_sources == 0) throw std::invalid_argument("empty source set");
    for (const auto& v : views) {
        if (v.components.size() != n_sources)
            throw std::invalid_argument("source count varies across views");
    }

    const auto revealed = feedback_mask(views.size(), config.feedback_fraction, config.seed);
    std::vector<std::uint8_t> is_revealed(views.size(), 0);
    for (std::size_t k : revealed) is_revealed[k] = 1;

    MizoEngine engine(n_sources, config);
    for (std::size_t k = 0; k < views.size(); ++k)
        engine.observe(views[k], responses[k] != 0, is_revealed[k] != 0);

    MizoRun run;
    for (std::size_t t = 1; t <= config.rounds; ++t) {
        engine.step();
        run.mi_log.push_back(engine.last_mi());
        run.regret_log.push_back(engine.last_regret());
        run.mean_log.push_back(engine.state().mi_running_mean);
    }
    run.state = engine.state();
    run.final_mi_mean = run.state.mi_running_mean;
    run.view_scores.reserve(views.size());
    for (const auto& v : views) run.view_scores.push_back(engine.score(v));
    return run;
}

}  // namespace mizo
