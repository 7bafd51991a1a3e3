#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hacomp/domain.hpp"

namespace hacomp::sim {

enum class IntegrationKind { convex_blend, pick_one };

// How the team turns the two individual real-valued decisions into one.
//   convex_blend: team = w * ai + (1 - w) * human, w ~ Beta(mean * c, (1 - mean) * c)
//   pick_one:     team = ai with probability `ai_weight_mean`, else human
struct IntegrationPolicy {
    IntegrationKind kind = IntegrationKind::convex_blend;
    double ai_weight_mean = 0.5;
    double concentration = 4.0;

    void validate() const;
};

// Team decision for classification: agreement is always kept; on
// disagreement the AI label is adopted with probability p_adopt_when_disagree,
// raised toward 1 by `difficulty_coupling` on instances the human gets wrong.
struct ReliancePolicy {
    double p_adopt_when_disagree = 0.5;
    double difficulty_coupling = 0.0;

    void validate() const;
};

struct RegressionScenario {
    int n_participants = 50;
    int n_instances = 15;
    double truth_min = 195'000.0;
    double truth_max = 2'000'000.0;
    double truth_mean = 703'120.0;
    double ai_mae_target = 163'080.0;
    double human_mae_target = 251'282.0;
    // When set, a second condition with the same participant streams is
    // generated at this human MAE (information-asymmetry treatment).
    std::optional<double> uhci_human_mae_target;
    IntegrationPolicy integration;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string condition_id = "without_uhci";
    std::string uhci_condition_id = "with_uhci";

    void validate() const;
};

struct ClassificationScenario {
    int n_participants = 50;
    int n_instances = 150;
    int n_classes = 16;
    double ai_error_target = 0.2666;
    double human_error_target = 0.30;
    // P(AI errs | human errs); lower means more capability asymmetry.
    double error_overlap = 0.6667;
    ReliancePolicy reliance;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string condition_id = "baseline";

    void validate() const;
};

// Joint error probabilities implied by the two marginals and the overlap.
struct JointErrorTable {
    double both = 0.0;
    double human_only = 0.0;
    double ai_only = 0.0;
    double neither = 0.0;
};

// Throws ConfigError when the table would contain a negative cell.
JointErrorTable joint_error_table(double human_error, double ai_error, double overlap);

struct OverlapBounds {
    double lo = 0.0;
    double hi = 1.0;
};

// Feasible range of error_overlap for fixed marginals.
OverlapBounds error_overlap_bounds(double human_error, double ai_error);

// Log-normal parameters whose [min, max]-clipped mean equals `mean`; the
// median is pinned at sqrt(min * max) and sigma is found by bisection.
struct ClippedLogNormal {
    double mu = 0.0;
    double sigma = 0.0;
    double min = 0.0;
    double max = 0.0;
};

ClippedLogNormal calibrate_truth(double min, double max, double mean);
double clipped_lognormal_mean(double mu, double sigma, double min, double max);

std::vector<DecisionRecord> simulate_regression_team(const RegressionScenario& scenario);
std::vector<DecisionRecord> simulate_classification_team(const ClassificationScenario& scenario);

// Labels used by the classification simulator: "c1" ... "cK".
std::vector<std::string> class_labels(int n_classes);

}  // namespace hacomp::sim
