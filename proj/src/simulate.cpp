#include "hacomp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <boost/random/beta_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "hacomp/error.hpp"
#include "hacomp/rng.hpp"
#include "hacomp/stats.hpp"

namespace hacomp::sim {

namespace {

// stream domains
constexpr std::uint64_t kTaskStream = 0x7A5C;
constexpr std::uint64_t kParticipantStream = 0x9A27;

bool unit(double p) { return p >= 0.0 && p <= 1.0; }

// Standard Laplace variate (scale 1, E|x| = 1) by inversion.
double standard_laplace(Engine& eng) {
    double u = uniform01(eng) - 0.5;
    while (u == -0.5) u = uniform01(eng) - 0.5;
    const double mag = -std::log1p(-2.0 * std::fabs(u));
    return u < 0.0 ? -mag : mag;
}

// Label different from `truth`, chosen uniformly by the variate u in [0, 1).
int wrong_label(double u, int truth, int n_classes) {
    const auto k = static_cast<int>(u * (n_classes - 1));
    const int pick = std::min(k, n_classes - 2);
    return pick >= truth ? pick + 1 : pick;
}

template <class Fn>
void for_each_participant(int n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1))));
    if (threads == 1) {
        for (int p = 0; p < n; ++p) fn(p);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int p = static_cast<int>(t); p < n; p += static_cast<int>(threads)) fn(p);
        });
    }
}

std::string participant_name(const std::string& condition, int index) {
    return condition + "-p" + std::to_string(index + 1);
}

}  // namespace

void IntegrationPolicy::validate() const {
    if (!unit(ai_weight_mean)) throw ConfigError("integration: ai_weight_mean must lie in [0, 1]");
    if (kind == IntegrationKind::convex_blend && !(concentration > 0.0)) {
        throw ConfigError("integration: concentration must be > 0");
    }
}

void ReliancePolicy::validate() const {
    if (!unit(p_adopt_when_disagree)) {
        throw ConfigError("reliance: p_adopt_when_disagree must lie in [0, 1]");
    }
    if (!unit(difficulty_coupling)) throw ConfigError("reliance: difficulty_coupling must lie in [0, 1]");
}

void RegressionScenario::validate() const {
    if (n_participants < 1 || n_instances < 1) {
        throw ConfigError("regression scenario: participant and instance counts must be >= 1");
    }
    if (!(truth_min > 0.0 && truth_min < truth_mean && truth_mean < truth_max)) {
        throw ConfigError("regression scenario: need 0 < min < mean < max");
    }
    const double width = truth_max - truth_min;
    auto check = [&](double target, const char* name) {
        if (!std::isfinite(target) || target < 0.0) {
            throw ConfigError(std::string("regression scenario: ") + name + " must be >= 0");
        }
        if (target > width) {
            throw ConfigError(std::string("regression scenario: ") + name +
                              " exceeds the truth range width");
        }
    };
    check(ai_mae_target, "ai_mae_target");
    check(human_mae_target, "human_mae_target");
    if (uhci_human_mae_target) check(*uhci_human_mae_target, "uhci_human_mae_target");
    if (uhci_human_mae_target && condition_id == uhci_condition_id) {
        throw ConfigError("regression scenario: condition ids must differ");
    }
    integration.validate();
}

void ClassificationScenario::validate() const {
    if (n_participants < 1 || n_instances < 1) {
        throw ConfigError("classification scenario: participant and instance counts must be >= 1");
    }
    if (n_classes < 2) throw ConfigError("classification scenario: n_classes must be >= 2");
    if (!unit(ai_error_target) || !unit(human_error_target) || !unit(error_overlap)) {
        throw ConfigError("classification scenario: rates must lie in [0, 1]");
    }
    joint_error_table(human_error_target, ai_error_target, error_overlap);
    reliance.validate();
}

JointErrorTable joint_error_table(double h, double a, double overlap) {
    JointErrorTable t;
    t.both = overlap * h;
    t.human_only = h - t.both;
    t.ai_only = a - t.both;
    t.neither = 1.0 - h - a + t.both;
    constexpr double eps = 1e-12;
    if (t.human_only < -eps || t.ai_only < -eps || t.neither < -eps) {
        throw ConfigError("error_overlap " + std::to_string(overlap) +
                          " is infeasible for the given error rates");
    }
    t.human_only = std::max(0.0, t.human_only);
    t.ai_only = std::max(0.0, t.ai_only);
    t.neither = std::max(0.0, t.neither);
    return t;
}

OverlapBounds error_overlap_bounds(double h, double a) {
    if (h <= 0.0) return {0.0, 1.0};
    return {std::max(0.0, (h + a - 1.0) / h), std::min(1.0, a / h)};
}

double clipped_lognormal_mean(double mu, double sigma, double min, double max) {
    const double lmin = std::log(min);
    const double lmax = std::log(max);
    if (sigma <= 0.0) return std::clamp(std::exp(mu), min, max);
    const double a = (lmin - mu) / sigma;
    const double b = (lmax - mu) / sigma;
    using stats::normal_cdf;
    return min * normal_cdf(a) + max * (1.0 - normal_cdf(b)) +
           std::exp(mu + 0.5 * sigma * sigma) * (normal_cdf(b - sigma) - normal_cdf(a - sigma));
}

ClippedLogNormal calibrate_truth(double min, double max, double mean) {
    if (!(min > 0.0 && min < mean && mean < max)) {
        throw ConfigError("truth calibration: need 0 < min < mean < max");
    }
    const double mu = 0.5 * (std::log(min) + std::log(max));
    double lo = 1e-9;
    double hi = 50.0;
    const double f_lo = clipped_lognormal_mean(mu, lo, min, max) - mean;
    const double f_hi = clipped_lognormal_mean(mu, hi, min, max) - mean;
    if (f_lo > 0.0 || f_hi < 0.0) {
        throw ConfigError("truth calibration: mean must lie between sqrt(min*max) and (min+max)/2");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (clipped_lognormal_mean(mu, mid, min, max) < mean) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {mu, 0.5 * (lo + hi), min, max};
}

std::vector<DecisionRecord> simulate_regression_team(const RegressionScenario& s) {
    s.validate();
    const auto dist = calibrate_truth(s.truth_min, s.truth_max, s.truth_mean);
    const auto n_inst = static_cast<std::size_t>(s.n_instances);

    // shared task: one truth and one AI prediction per instance
    auto task = make_stream(s.seed, kTaskStream, 0);
    std::vector<double> truth(n_inst);
    std::vector<double> ai(n_inst);
    {
        boost::random::normal_distribution<double> z;
        for (auto& t : truth) {
            t = std::clamp(std::exp(dist.mu + dist.sigma * z(task)), dist.min, dist.max);
        }
        std::vector<double> noise(n_inst);
        double mean_abs = 0.0;
        for (auto& e : noise) {
            e = standard_laplace(task);
            mean_abs += std::fabs(e);
        }
        mean_abs /= static_cast<double>(n_inst);
        // rescale so the AI's realised MAE equals the target exactly
        const double scale = mean_abs > 0.0 ? s.ai_mae_target / mean_abs : 0.0;
        for (std::size_t i = 0; i < n_inst; ++i) ai[i] = truth[i] + scale * noise[i];
    }

    struct Condition {
        const std::string* id;
        double human_mae;
    };
    std::vector<Condition> conditions{{&s.condition_id, s.human_mae_target}};
    if (s.uhci_human_mae_target) {
        conditions.push_back({&s.uhci_condition_id, *s.uhci_human_mae_target});
    }

    const auto n_part = static_cast<std::size_t>(s.n_participants);
    std::vector<DecisionRecord> out(conditions.size() * n_part * n_inst);
    for (std::size_t c = 0; c < conditions.size(); ++c) {
        const auto& cond = conditions[c];
        for_each_participant(s.n_participants, s.threads, [&](int p) {
            // same participant stream in every condition: paired draws
            auto eng = make_stream(s.seed, kParticipantStream, static_cast<std::uint64_t>(p));
            boost::random::beta_distribution<double> beta(
                s.integration.ai_weight_mean * s.integration.concentration,
                (1.0 - s.integration.ai_weight_mean) * s.integration.concentration);
            const auto pid = participant_name(*cond.id, p);
            for (std::size_t i = 0; i < n_inst; ++i) {
                const double human = truth[i] + cond.human_mae * standard_laplace(eng);
                double w = 0.0;
                if (s.integration.kind == IntegrationKind::pick_one) {
                    w = uniform01(eng) < s.integration.ai_weight_mean ? 1.0 : 0.0;
                } else if (s.integration.ai_weight_mean <= 0.0) {
                    w = 0.0;
                } else if (s.integration.ai_weight_mean >= 1.0) {
                    w = 1.0;
                } else {
                    w = beta(eng);
                }
                const double team = w * ai[i] + (1.0 - w) * human;
                auto& rec = out[(c * n_part + static_cast<std::size_t>(p)) * n_inst + i];
                rec.participant_id = pid;
                rec.condition_id = *cond.id;
                rec.instance_id = std::to_string(i + 1);
                rec.truth = truth[i];
                rec.human = human;
                rec.ai = ai[i];
                // keep pick_one bit-exact equal to the chosen member
                rec.team = w == 1.0 ? ai[i] : (w == 0.0 ? human : team);
            }
        });
    }
    return out;
}

std::vector<std::string> class_labels(int n_classes) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(std::max(n_classes, 0)));
    for (int k = 1; k <= n_classes; ++k) labels.push_back("c" + std::to_string(k));
    return labels;
}

std::vector<DecisionRecord> simulate_classification_team(const ClassificationScenario& s) {
    s.validate();
    const auto table = joint_error_table(s.human_error_target, s.ai_error_target, s.error_overlap);
    const auto labels = class_labels(s.n_classes);
    const auto n_inst = static_cast<std::size_t>(s.n_instances);

    auto task = make_stream(s.seed, kTaskStream, 0);
    std::vector<int> truth(n_inst);
    for (auto& t : truth) {
        t = std::min(static_cast<int>(uniform01(task) * s.n_classes), s.n_classes - 1);
    }
    // the AI errs on exactly round(rate * N) instances
    const auto n_ai_err = static_cast<std::size_t>(
        std::llround(s.ai_error_target * static_cast<double>(n_inst)));
    std::vector<std::size_t> order(n_inst);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < n_ai_err; ++i) {
        const auto span = n_inst - i;
        const auto j = i + std::min(static_cast<std::size_t>(uniform01(task) * static_cast<double>(span)),
                                    span - 1);
        std::swap(order[i], order[j]);
    }
    std::vector<bool> ai_errs(n_inst, false);
    for (std::size_t i = 0; i < n_ai_err; ++i) ai_errs[order[i]] = true;
    std::vector<int> ai(n_inst);
    for (std::size_t i = 0; i < n_inst; ++i) {
        ai[i] = ai_errs[i] ? wrong_label(uniform01(task), truth[i], s.n_classes) : truth[i];
    }

    const double a = s.ai_error_target;
    const double p_err_given_ai_err = a > 0.0 ? table.both / a : 0.0;
    const double p_err_given_ai_ok = a < 1.0 ? table.human_only / (1.0 - a) : 0.0;

    const auto n_part = static_cast<std::size_t>(s.n_participants);
    std::vector<DecisionRecord> out(n_part * n_inst);
    for_each_participant(s.n_participants, s.threads, [&](int p) {
        auto eng = make_stream(s.seed, kParticipantStream, static_cast<std::uint64_t>(p));
        const auto pid = participant_name(s.condition_id, p);
        for (std::size_t i = 0; i < n_inst; ++i) {
            // three variates per instance regardless of outcome, so runs that
            // differ only in rates stay paired draw for draw
            const double u = uniform01(eng);
            const double label_u = uniform01(eng);
            const double v = uniform01(eng);
            const bool human_errs = u < (ai_errs[i] ? p_err_given_ai_err : p_err_given_ai_ok);
            const int human = human_errs ? wrong_label(label_u, truth[i], s.n_classes) : truth[i];
            int team = human;
            if (human != ai[i]) {
                double adopt = s.reliance.p_adopt_when_disagree;
                if (human_errs) adopt += s.reliance.difficulty_coupling * (1.0 - adopt);
                if (v < adopt) team = ai[i];
            }
            auto& rec = out[static_cast<std::size_t>(p) * n_inst + i];
            rec.participant_id = pid;
            rec.condition_id = s.condition_id;
            rec.instance_id = std::to_string(i + 1);
            rec.truth = labels[static_cast<std::size_t>(truth[i])];
            rec.human = labels[static_cast<std::size_t>(human)];
            rec.ai = labels[static_cast<std::size_t>(ai[i])];
            rec.team = labels[static_cast<std::size_t>(team)];
        }
    });
    return out;
}

}  // namespace hacomp::sim
