#include "hacomp/metrics.hpp"

#include <algorithm>
#include <set>
#include <thread>

#include "hacomp/error.hpp"

namespace hacomp {

const char* to_string(Member m) { return m == Member::ai ? "AI" : "H"; }

const char* to_string(ScenarioTag tag) {
    switch (tag) {
        case ScenarioTag::partial_inherent: return "partial_inherent";
        case ScenarioTag::full_inherent: return "full_inherent";
        case ScenarioTag::negative_collaborative: return "negative_collaborative";
        case ScenarioTag::positive_collaborative: return "positive_collaborative";
        case ScenarioTag::neutral: return "neutral";
    }
    return "unknown";
}

namespace {

struct Overall {
    double human;
    double ai;
    double team;
    double effect;  // (min(sum_h, sum_ai) - sum_team) / n
};

// One left-to-right pass, fixed order.
Overall overall_losses(const ParticipantProfile& profile) {
    double h = 0.0, a = 0.0, t = 0.0;
    for (const auto& row : profile.instances()) {
        h += row.human;
        a += row.ai;
        t += row.team;
    }
    const auto n = static_cast<double>(profile.size());
    return {h / n, a / n, t / n, (std::min(h, a) - t) / n};
}

Member tstar_from(const Overall& o) { return o.ai <= o.human ? Member::ai : Member::human; }

// Per-instance contributions of the inherent and collaborative effect
// tables. The inequalities are kept exactly as stated in the case tables,
// including which comparisons are strict.
EffectSplit effect_terms(const InstanceLosses& r, Member t_star) {
    const double lh = r.human;
    const double la = r.ai;
    const double li = r.team;
    EffectSplit e;

    if (t_star == Member::ai) {
        if (la > li && li >= lh) {
            e.inherent = la - li;
        } else if (la > lh && lh > li) {
            e.inherent = la - lh;
        }
    } else {
        if (lh > li && li >= la) {
            e.inherent = lh - li;
        } else if (lh > la && la > li) {
            e.inherent = lh - la;
        }
    }

    if (la >= lh && lh > li) {
        e.collaborative = lh - li;
    } else if (lh > la && la > li) {
        e.collaborative = la - li;
    } else if (t_star == Member::ai && li > la) {
        e.collaborative = la - li;
    } else if (t_star == Member::human && li > lh) {
        e.collaborative = lh - li;
    }
    return e;
}

}  // namespace

Member determine_tstar(const ParticipantProfile& profile) {
    return tstar_from(overall_losses(profile));
}

bool ctp(const ParticipantProfile& profile) {
    const auto o = overall_losses(profile);
    return o.effect > 0.0;
}

PotentialSplit cp_split(const ParticipantProfile& profile, std::optional<Member> t_star) {
    const Member who = t_star.value_or(determine_tstar(profile));
    double inh = 0.0;
    double coll = 0.0;
    for (const auto& r : profile.instances()) {
        inh += who == Member::ai ? std::max(0.0, r.ai - r.human) : std::max(0.0, r.human - r.ai);
        coll += std::min(r.human, r.ai);
    }
    const auto n = static_cast<double>(profile.size());
    return {inh / n, coll / n};
}

EffectSplit ce_split(const ParticipantProfile& profile, std::optional<Member> t_star) {
    const Member who = t_star.value_or(determine_tstar(profile));
    EffectSplit sum;
    for (const auto& r : profile.instances()) {
        const auto e = effect_terms(r, who);
        sum.inherent += e.inherent;
        sum.collaborative += e.collaborative;
    }
    const auto n = static_cast<double>(profile.size());
    return {sum.inherent / n, sum.collaborative / n};
}

ComplementarityBreakdown breakdown(const ParticipantProfile& profile,
                                   std::optional<Member> t_star) {
    const auto o = overall_losses(profile);
    ComplementarityBreakdown b;
    b.participant_id = profile.participant_id();
    b.condition_id = profile.condition_id();
    b.n_instances = profile.size();
    b.t_star = t_star.value_or(tstar_from(o));
    b.L_H = o.human;
    b.L_AI = o.ai;
    b.L_I = o.team;
    const double best = std::min(o.human, o.ai);
    b.cp = best;
    b.ce = o.effect;
    b.ctp = b.ce > 0.0;

    const auto p = cp_split(profile, b.t_star);
    const auto e = ce_split(profile, b.t_star);
    b.cp_inh = p.inherent;
    b.cp_coll = p.collaborative;
    b.ce_inh = e.inherent;
    b.ce_coll = e.collaborative;
    if (b.cp_inh > 0.0) b.realization_ratio = b.ce_inh / b.cp_inh;
    return b;
}

std::vector<ComplementarityBreakdown> breakdown_all(std::span<const ParticipantProfile> profiles,
                                                    unsigned threads) {
    std::vector<ComplementarityBreakdown> out(profiles.size());
    const std::size_t n = profiles.size();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n == 0 ? 1 : n)));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = breakdown(profiles[i]);
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) out[i] = breakdown(profiles[i]);
        });
    }
    return out;
}

ScenarioTag classify_instance(const InstanceLosses& row, Member t_star) {
    const auto e = effect_terms(row, t_star);
    if (e.inherent > 0.0) {
        return e.collaborative > 0.0 ? ScenarioTag::full_inherent : ScenarioTag::partial_inherent;
    }
    if (e.collaborative < 0.0) return ScenarioTag::negative_collaborative;
    if (e.collaborative > 0.0) {
        // The collaborative case fired without any inherent part. That only
        // happens when T* was at least as good as the other member here.
        return ScenarioTag::positive_collaborative;
    }
    return ScenarioTag::neutral;
}

std::vector<InstanceEffectRow> per_instance_table(std::span<const ParticipantProfile> profiles,
                                                  std::optional<Member> t_star) {
    std::vector<InstanceEffectRow> rows;
    if (profiles.empty()) return rows;

    const auto& first = profiles.front();
    for (const auto& p : profiles) {
        if (p.size() != first.size()) {
            throw ValidationError("per-instance table: participant '" + p.participant_id() +
                                  "' has a different instance set");
        }
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p.instances()[i].instance_id != first.instances()[i].instance_id) {
                throw ValidationError("per-instance table: participant '" + p.participant_id() +
                                      "' has a different instance set");
            }
        }
    }

    rows.resize(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        rows[i].instance_id = first.instances()[i].instance_id;
        rows[i].tags.reserve(profiles.size());
    }
    for (const auto& p : profiles) {
        const Member who = t_star.value_or(determine_tstar(p));
        for (std::size_t i = 0; i < p.size(); ++i) {
            const auto& r = p.instances()[i];
            rows[i].mean_l_H += r.human;
            rows[i].mean_l_AI += r.ai;
            rows[i].mean_l_I += r.team;
            rows[i].tags.push_back({p.participant_id(), classify_instance(r, who)});
        }
    }
    const auto n = static_cast<double>(profiles.size());
    for (auto& row : rows) {
        row.mean_l_H /= n;
        row.mean_l_AI /= n;
        row.mean_l_I /= n;
        row.positive_coll_flag = row.mean_l_I < std::min(row.mean_l_H, row.mean_l_AI);
    }
    return rows;
}

}  // namespace hacomp
