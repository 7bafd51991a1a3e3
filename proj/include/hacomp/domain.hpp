#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hacomp {

// A decision or ground truth: a real-valued prediction in task units or a
// categorical class label.
using DecisionValue = std::variant<double, std::string>;

inline bool is_real(const DecisionValue& v) { return std::holds_alternative<double>(v); }
inline bool is_label(const DecisionValue& v) { return std::holds_alternative<std::string>(v); }

struct DecisionRecord {
    std::string participant_id;
    std::string condition_id;
    std::string instance_id;
    DecisionValue truth;
    DecisionValue human;
    DecisionValue ai;
    DecisionValue team;

    bool operator==(const DecisionRecord&) const = default;
};

enum class LossKind { absolute_error, zero_one };

// Decision-maker whose loss is being read off a profile.
enum class Role { human, ai, team };

const char* to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

struct InstanceLosses {
    std::string instance_id;
    double human = 0.0;
    double ai = 0.0;
    double team = 0.0;

    double of(Role role) const {
        switch (role) {
            case Role::human: return human;
            case Role::ai: return ai;
            case Role::team: return team;
        }
        return 0.0;
    }
};

// Per-instance loss triples of one participant over one task. Immutable once
// built; the constructor enforces N >= 1 and finite non-negative losses.
class ParticipantProfile {
public:
    ParticipantProfile(std::string participant_id, std::string condition_id,
                       std::vector<InstanceLosses> instances);

    const std::string& participant_id() const { return participant_id_; }
    const std::string& condition_id() const { return condition_id_; }
    std::span<const InstanceLosses> instances() const { return instances_; }
    std::size_t size() const { return instances_.size(); }

private:
    std::string participant_id_;
    std::string condition_id_;
    std::vector<InstanceLosses> instances_;
};

// Loss of a single decision against the ground truth. Throws ValidationError
// when the decision kinds do not match the loss kind; `context` names the
// offending record in the message.
double instance_loss(LossKind kind, const DecisionValue& decision, const DecisionValue& truth,
                     const std::string& context = {});

// Average per-instance loss of `role` (never a sum).
double overall_loss(const ParticipantProfile& profile, Role role);

struct ProfileSet {
    std::vector<ParticipantProfile> profiles;  // ordered by participant_id
    std::vector<std::string> warnings;
};

// Groups records by participant and converts each decision to its loss.
// Participants whose instance sets differ from the first participant's (in
// natural id order) are kept but reported in `warnings`.
ProfileSet build_profiles(std::span<const DecisionRecord> records, LossKind kind);

}  // namespace hacomp
