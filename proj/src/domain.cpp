#include "hacomp/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "hacomp/error.hpp"
#include "hacomp/ids.hpp"

namespace hacomp {

const char* to_string(LossKind kind) {
    switch (kind) {
        case LossKind::absolute_error: return "absolute_error";
        case LossKind::zero_one: return "zero_one";
    }
    return "unknown";
}

LossKind loss_kind_from_string(const std::string& name) {
    if (name == "absolute_error" || name == "mae") return LossKind::absolute_error;
    if (name == "zero_one" || name == "classification_error") return LossKind::zero_one;
    throw ValidationError("unknown loss kind '" + name + "'");
}

ParticipantProfile::ParticipantProfile(std::string participant_id, std::string condition_id,
                                       std::vector<InstanceLosses> instances)
    : participant_id_(std::move(participant_id)),
      condition_id_(std::move(condition_id)),
      instances_(std::move(instances)) {
    if (instances_.empty()) {
        throw ValidationError("profile '" + participant_id_ + "' has no instances");
    }
    for (const auto& row : instances_) {
        for (double l : {row.human, row.ai, row.team}) {
            if (!std::isfinite(l) || l < 0.0) {
                throw ValidationError("profile '" + participant_id_ + "', instance '" +
                                      row.instance_id + "': losses must be finite and >= 0");
            }
        }
    }
}

double instance_loss(LossKind kind, const DecisionValue& decision, const DecisionValue& truth,
                     const std::string& context) {
    const auto where = context.empty() ? std::string{} : " (" + context + ")";
    switch (kind) {
        case LossKind::absolute_error: {
            const auto* d = std::get_if<double>(&decision);
            const auto* t = std::get_if<double>(&truth);
            if (d == nullptr || t == nullptr) {
                throw ValidationError("absolute_error requires real-valued decisions" + where);
            }
            if (!std::isfinite(*d) || !std::isfinite(*t)) {
                throw ValidationError("non-finite real decision" + where);
            }
            return std::fabs(*d - *t);
        }
        case LossKind::zero_one: {
            const auto* d = std::get_if<std::string>(&decision);
            const auto* t = std::get_if<std::string>(&truth);
            if (d == nullptr || t == nullptr) {
                throw ValidationError("zero_one requires categorical decisions" + where);
            }
            return *d == *t ? 0.0 : 1.0;
        }
    }
    throw ValidationError("unknown loss kind" + where);
}

double overall_loss(const ParticipantProfile& profile, Role role) {
    const auto rows = profile.instances();
    if (rows.empty()) throw ValidationError("empty profile");
    double sum = 0.0;
    for (const auto& row : rows) sum += row.of(role);
    return sum / static_cast<double>(rows.size());
}

ProfileSet build_profiles(std::span<const DecisionRecord> records, LossKind kind) {
    struct Group {
        std::string condition_id;
        std::vector<InstanceLosses> rows;
    };
    std::map<std::string, Group, NaturalLess> groups;

    for (const auto& rec : records) {
        const std::string ctx = "participant '" + rec.participant_id + "', instance '" +
                                rec.instance_id + "'";
        auto [it, inserted] = groups.try_emplace(rec.participant_id);
        if (inserted) {
            it->second.condition_id = rec.condition_id;
        } else if (it->second.condition_id != rec.condition_id) {
            throw ValidationError(ctx + ": participant appears in conditions '" +
                                  it->second.condition_id + "' and '" + rec.condition_id + "'");
        }
        it->second.rows.push_back(InstanceLosses{
            rec.instance_id,
            instance_loss(kind, rec.human, rec.truth, ctx),
            instance_loss(kind, rec.ai, rec.truth, ctx),
            instance_loss(kind, rec.team, rec.truth, ctx),
        });
    }

    ProfileSet out;
    std::set<std::string> reference;
    bool have_reference = false;
    for (auto& [pid, group] : groups) {
        std::stable_sort(group.rows.begin(), group.rows.end(),
                         [](const InstanceLosses& a, const InstanceLosses& b) {
                             return natural_less(a.instance_id, b.instance_id);
                         });
        std::set<std::string> ids;
        for (const auto& row : group.rows) {
            if (!ids.insert(row.instance_id).second) {
                throw ValidationError("participant '" + pid + "': duplicate instance '" +
                                      row.instance_id + "'");
            }
        }
        if (!have_reference) {
            reference = ids;
            have_reference = true;
        } else if (ids != reference) {
            out.warnings.push_back("participant '" + pid +
                                   "' has an instance set different from the first participant");
        }
        out.profiles.emplace_back(pid, group.condition_id, std::move(group.rows));
    }
    return out;
}

}  // namespace hacomp
