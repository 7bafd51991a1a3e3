#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hacomp/domain.hpp"

namespace hacomp {

// Team member with the lower overall loss. Ties go to the AI.
enum class Member { human, ai };

const char* to_string(Member m);

struct ComplementarityBreakdown {
    std::string participant_id;
    std::string condition_id;
    Member t_star = Member::ai;
    double L_H = 0.0;
    double L_AI = 0.0;
    double L_I = 0.0;
    bool ctp = false;
    double cp = 0.0;
    double cp_inh = 0.0;
    double cp_coll = 0.0;
    double ce = 0.0;
    double ce_inh = 0.0;
    double ce_coll = 0.0;
    std::optional<double> realization_ratio;  // ce_inh / cp_inh, defined iff cp_inh > 0
    std::size_t n_instances = 0;
};

struct PotentialSplit {
    double inherent = 0.0;
    double collaborative = 0.0;
};

struct EffectSplit {
    double inherent = 0.0;
    double collaborative = 0.0;
};

Member determine_tstar(const ParticipantProfile& profile);
bool ctp(const ParticipantProfile& profile);

// The optional `t_star` overrides the per-participant choice (sensitivity
// analysis); by default T* is determined from the profile's own losses.
PotentialSplit cp_split(const ParticipantProfile& profile,
                        std::optional<Member> t_star = std::nullopt);
EffectSplit ce_split(const ParticipantProfile& profile,
                     std::optional<Member> t_star = std::nullopt);

ComplementarityBreakdown breakdown(const ParticipantProfile& profile,
                                   std::optional<Member> t_star = std::nullopt);

std::vector<ComplementarityBreakdown> breakdown_all(std::span<const ParticipantProfile> profiles,
                                                    unsigned threads = 1);

// Per-instance outcome from T*'s point of view.
//   partial_inherent        T* worse than the other member, team lands between them
//   full_inherent           team beats both while the other member beat T*
//   negative_collaborative  team worse than T*
//   positive_collaborative  T* already best on the instance, team beats it
//   neutral                 team equals T* (nothing gained or lost)
enum class ScenarioTag {
    partial_inherent,
    full_inherent,
    negative_collaborative,
    positive_collaborative,
    neutral,
};

const char* to_string(ScenarioTag tag);

// Which case of the inherent/collaborative effect tables applies to one
// instance, given the overall T*.
ScenarioTag classify_instance(const InstanceLosses& row, Member t_star);

struct ParticipantTag {
    std::string participant_id;
    ScenarioTag tag;
};

struct InstanceEffectRow {
    std::string instance_id;
    double mean_l_H = 0.0;
    double mean_l_AI = 0.0;
    double mean_l_I = 0.0;
    std::vector<ParticipantTag> tags;
    bool positive_coll_flag = false;
};

// One row per instance with participant-mean losses and each participant's
// scenario tag. All profiles must share the same instance set.
std::vector<InstanceEffectRow> per_instance_table(std::span<const ParticipantProfile> profiles,
                                                  std::optional<Member> t_star = std::nullopt);

}  // namespace hacomp
